#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quadsum {

enum class Errc {
  composite_modulus,
  modulus_too_large,
  not_a_divisor,
  non_uniform_image,
  budget_exceeded,
  nonzero_required,
  ordering_violated,
  invalid_argument,
  config_invalid,
  io_failure,
  unknown_kind,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures surface as this type; code() identifies the condition.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace quadsum
