#pragma once

#include <string>
#include <vector>

#include "ffnet/dataset.hpp"

namespace ffnet {

/// Per-column min-max normalization: x_scaled = (x - min) / (max - min).
/// Fitted once (by policy on the training block only), then immutable;
/// transform and inverse_transform are pure. Degenerate columns
/// (min == max) transform to the constant 0.0 and invert back to min.
class MinMaxScaler {
 public:
  struct ColumnRange {
    std::string name;
    ColumnRole role = ColumnRole::kInput;
    double min = 0.0;
    double max = 0.0;
    bool degenerate() const { return min == max; }
  };

  static MinMaxScaler fit(const TimeSeriesFrame& train);

  TimeSeriesFrame transform(const TimeSeriesFrame& frame) const;
  TimeSeriesFrame inverse_transform(const TimeSeriesFrame& frame) const;

  /// Scalar forms for single-column work (prediction de-scaling, tests).
  double transform_value(std::string_view column, double x) const;
  double inverse_value(std::string_view column, double x_scaled) const;

  const std::vector<ColumnRange>& ranges() const { return ranges_; }
  const ColumnRange& range(std::string_view column) const;  // throws ColumnMismatch

  /// Plain-text sidecar: one `name role min max` line per column, so a
  /// saved model + scaler pair is enough to run predictions later.
  void save(const std::string& path) const;
  static MinMaxScaler load(const std::string& path);
  std::string to_text() const;
  static MinMaxScaler from_text(std::string_view text);

 private:
  MinMaxScaler() = default;
  void check_columns(const TimeSeriesFrame& frame) const;

  std::vector<ColumnRange> ranges_;
};

}  // namespace ffnet
