#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffnet/date.hpp"
#include "ffnet/errors.hpp"

namespace ffnet {

enum class ColumnRole { kInput, kTarget };

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::kInput;
};

/// One observation day: a date plus one value per declared column.
struct ObservationRow {
  Date date;
  std::vector<double> values;
};

/// Counts value reads on a frame. Test instrumentation for the leakage
/// guarantee: attach one to each split block and assert the test block
/// was never read during scaler fitting or training.
struct AccessStats {
  std::atomic<std::uint64_t> value_reads{0};
};

/// Date-indexed table of named daily series. Immutable after construction;
/// every constructor validates the invariants (strictly increasing dates,
/// finite values, unique column names, at least one input and one target).
class TimeSeriesFrame {
 public:
  TimeSeriesFrame(std::vector<ColumnSpec> columns, std::vector<ObservationRow> rows);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  std::size_t column_count() const { return columns_.size(); }
  std::size_t row_count() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  Date first_date() const;
  Date last_date() const;

  const ObservationRow& row(std::size_t i) const {
    touch();
    return rows_[i];
  }
  std::span<const ObservationRow> rows() const {
    touch();
    return rows_;
  }

  std::size_t column_index(std::string_view name) const;  // throws MissingColumn
  std::vector<double> column_values(std::string_view name) const;

  std::vector<std::size_t> input_indices() const;
  std::vector<std::size_t> target_indices() const;
  std::vector<std::string> input_names() const;
  std::vector<std::string> target_names() const;

  /// Row-major matrices restricted to the input / target columns, in
  /// declaration order. These are what the scaler and trainer consume.
  std::vector<std::vector<double>> input_matrix() const;
  std::vector<std::vector<double>> target_matrix() const;

  void attach_probe(std::shared_ptr<AccessStats> probe) { probe_ = std::move(probe); }

  bool operator==(const TimeSeriesFrame& other) const;

 private:
  void touch() const {
    if (probe_) probe_->value_reads.fetch_add(1, std::memory_order_relaxed);
  }
  std::vector<std::vector<double>> select_matrix(const std::vector<std::size_t>& cols) const;

  std::vector<ColumnSpec> columns_;
  std::vector<ObservationRow> rows_;
  std::shared_ptr<AccessStats> probe_;
};

/// Per-column descriptive statistics in the conventions used throughout:
/// sample SD (n-1), bias-uncorrected standardized third moment, excess
/// kurtosis. Zero-variance columns report 0 for both shape moments and
/// set `degenerate` instead of emitting NaN.
struct ColumnStats {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool degenerate = false;
};

struct DescriptiveStats {
  std::size_t row_count = 0;
  std::vector<ColumnStats> columns;
};

/// Contiguous calendar window: inclusive start, exclusive end.
struct RegimeSpec {
  std::string name;
  Date start_date;
  Date end_date;
};

struct SplitFractions {
  double train = 0.75;
  double test = 0.20;
  double validation = 0.05;
};

/// Chronological train -> validation -> test blocks of one frame.
struct SplitFrame {
  TimeSeriesFrame train;
  TimeSeriesFrame validation;
  TimeSeriesFrame test;
  SplitFractions fractions;
};

enum class MissingPolicy { kRejectRow, kForwardFill };

/// Column-role declaration for CSV ingestion.
struct CsvSchema {
  std::string date_column = "date";
  std::vector<ColumnSpec> columns;
  MissingPolicy missing = MissingPolicy::kRejectRow;
  bool sort_rows = false;                       // sort by date instead of failing on unsorted input
  std::vector<std::string> log_transform;       // columns mapped through natural log after fill
};

TimeSeriesFrame load_csv(const std::string& path, const CsvSchema& schema);
TimeSeriesFrame parse_csv(std::string_view text, const CsvSchema& schema);
void write_csv(const TimeSeriesFrame& frame, const std::string& path);
std::string to_csv(const TimeSeriesFrame& frame);

DescriptiveStats descriptive_stats(const TimeSeriesFrame& frame);

TimeSeriesFrame slice_regime(const TimeSeriesFrame& frame, const RegimeSpec& regime);

SplitFrame chronological_split(const TimeSeriesFrame& frame, const SplitFractions& fractions);

}  // namespace ffnet
