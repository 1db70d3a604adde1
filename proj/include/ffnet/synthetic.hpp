#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffnet/dataset.hpp"

namespace ffnet {

/// Level shift applied to every sample from `index` onward, used to
/// emulate a regime break in the middle of a series.
struct ShockSpec {
  std::size_t index = 0;
  double delta = 0.0;
};

/// Random column tracking a requested mean / SD, with optional excess
/// kurtosis (two-component normal scale mixture) and level shock.
struct SyntheticColumn {
  std::string name;
  ColumnRole role = ColumnRole::kInput;
  double mean = 0.0;
  double sd = 1.0;
  double excess_kurtosis = 0.0;  // >= 0
  std::optional<ShockSpec> shock;
};

/// Target column derived from the random input columns: intercept +
/// weights . inputs + N(0, noise_sd). Weights pair with the SyntheticSpec
/// columns of input role, in order.
struct SyntheticTarget {
  std::string name;
  std::vector<double> weights;
  double intercept = 0.0;
  double noise_sd = 0.0;
  std::optional<ShockSpec> shock;
};

struct SyntheticSpec {
  Date start_date = Date::from_ymd(2009, 1, 1);
  std::vector<SyntheticColumn> columns;
  std::vector<SyntheticTarget> derived_targets;
};

/// Deterministic for a fixed (spec, n, seed). Dates are n consecutive
/// calendar days from spec.start_date.
TimeSeriesFrame generate_synthetic(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace ffnet
