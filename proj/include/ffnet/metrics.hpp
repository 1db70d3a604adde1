#pragma once

#include <span>
#include <string>
#include <vector>

#include "ffnet/dataset.hpp"
#include "ffnet/network.hpp"
#include "ffnet/scaling.hpp"

namespace ffnet {

double rmse(std::span<const double> actual, std::span<const double> predicted);
double mape(std::span<const double> actual, std::span<const double> predicted);  // percent
double mae(std::span<const double> actual, std::span<const double> predicted);

/// Fraction of samples with |actual - predicted| / |actual| <= epsilon.
double hit_rate(std::span<const double> actual, std::span<const double> predicted,
                double epsilon);

/// One evaluation cell: metrics for a (regime, target) pair in one unit
/// system. `units` is "scaled" or "original".
struct EvaluationRow {
  std::string regime;
  std::string target;
  std::string units;
  std::size_t n = 0;
  double mae = 0.0;
  double rmse = 0.0;
  double mape = 0.0;      // percent
  double hit_rate = 0.0;  // in [0, 1]
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;

  void merge(const EvaluationReport& other);
  const EvaluationRow& find(std::string_view regime, std::string_view target,
                            std::string_view units) const;

  std::string to_csv() const;
  static EvaluationReport from_csv(std::string_view csv);
  /// Aligned table, metrics as rows and regime/target pairs as columns,
  /// one block per unit system.
  std::string to_table() const;
};

/// Evaluates a trained net on the split's test block under one regime
/// label, in both scaled and original units (via the scaler's inverse).
/// split.test must hold original (unscaled) values; the inputs are run
/// through the scaler here before the forward pass. Produces one row per
/// (target, units); hit-rate tolerance defaults to 0.10. Metric
/// preconditions (e.g. zero actuals for MAPE) propagate.
EvaluationReport evaluate(const Network& net, const MinMaxScaler& scaler,
                          const SplitFrame& split, const std::string& regime_name,
                          double hit_epsilon = 0.10);

}  // namespace ffnet
