#include "quadsum/error.hpp"
#include "quadsum/int128.hpp"

#include <algorithm>

namespace quadsum {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::composite_modulus: return "CompositeModulus";
    case Errc::modulus_too_large: return "ModulusTooLarge";
    case Errc::not_a_divisor: return "NotADivisor";
    case Errc::non_uniform_image: return "NonUniformImage";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::nonzero_required: return "NonzeroRequired";
    case Errc::ordering_violated: return "OrderingViolated";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::config_invalid: return "ConfigInvalid";
    case Errc::io_failure: return "IoFailure";
    case Errc::unknown_kind: return "UnknownKind";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace quadsum
