#pragma once

// Per-task verification routines used by the batch runner. Each returns the
// records of one planned task; seq/sub numbering is applied by the caller.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadsum/field.hpp"
#include "quadsum/harness.hpp"

namespace quadsum::harness::detail {

struct InstanceTask {
  SparsePoly psi;
  std::uint64_t j = 0;
  std::string family;
};

std::vector<ResultRecord> run_instance(const SweepConfig& config, const FieldCtx& ctx,
                                       const InstanceTask& task);
std::vector<ResultRecord> run_bilinear(const SweepConfig& config, const FieldCtx& ctx,
                                       std::uint64_t index);
std::vector<ResultRecord> run_energy(const SweepConfig& config, const FieldCtx& ctx);
std::vector<ResultRecord> run_cauchy(const SweepConfig& config, const FieldCtx& ctx);
std::vector<ResultRecord> run_ratio(const SweepConfig& config, const FieldCtx& ctx);

/// Seed-derivation domains, so different uses of the base seed never share
/// a stream.
enum SeedDomain : std::uint64_t {
  kSeedPoly = 1,
  kSeedChar = 2,
  kSeedBilinear = 3,
  kSeedEnergy = 4,
  kSeedRatio = 5,
};

}  // namespace quadsum::harness::detail
