#include "ffnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "ffnet/textio.hpp"

namespace ffnet {

TimeSeriesFrame::TimeSeriesFrame(std::vector<ColumnSpec> columns,
                                 std::vector<ObservationRow> rows)
    : columns_(std::move(columns)), rows_(std::move(rows)) {
  if (columns_.empty()) throw MissingColumn("frame declared with no columns");

  std::set<std::string> names;
  bool has_input = false;
  bool has_target = false;
  for (const auto& col : columns_) {
    if (!names.insert(col.name).second) {
      throw MissingColumn("duplicate column name '" + col.name + "'");
    }
    has_input |= col.role == ColumnRole::kInput;
    has_target |= col.role == ColumnRole::kTarget;
  }
  if (!has_input) throw MissingColumn("frame has no input column");
  if (!has_target) throw MissingColumn("frame has no target column");

  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (r.values.size() != columns_.size()) {
      throw ShapeMismatch("row " + std::to_string(i) + " has " +
                          std::to_string(r.values.size()) + " values, expected " +
                          std::to_string(columns_.size()));
    }
    for (std::size_t c = 0; c < r.values.size(); ++c) {
      if (!std::isfinite(r.values[c])) {
        throw NonFiniteValue("non-finite value in column '" + columns_[c].name +
                             "' at " + r.date.to_string());
      }
    }
    if (i > 0 && !(rows_[i - 1].date < r.date)) {
      throw NonMonotonicDates("dates not strictly increasing at " + r.date.to_string());
    }
  }
}

Date TimeSeriesFrame::first_date() const {
  if (rows_.empty()) throw EmptyFrame("first_date on empty frame");
  return rows_.front().date;
}

Date TimeSeriesFrame::last_date() const {
  if (rows_.empty()) throw EmptyFrame("last_date on empty frame");
  return rows_.back().date;
}

std::size_t TimeSeriesFrame::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  throw MissingColumn("no column named '" + std::string(name) + "'");
}

std::vector<double> TimeSeriesFrame::column_values(std::string_view name) const {
  const std::size_t idx = column_index(name);
  touch();
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.values[idx]);
  return out;
}

std::vector<std::size_t> TimeSeriesFrame::input_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].role == ColumnRole::kInput) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> TimeSeriesFrame::target_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].role == ColumnRole::kTarget) out.push_back(i);
  }
  return out;
}

std::vector<std::string> TimeSeriesFrame::input_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) {
    if (c.role == ColumnRole::kInput) out.push_back(c.name);
  }
  return out;
}

std::vector<std::string> TimeSeriesFrame::target_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) {
    if (c.role == ColumnRole::kTarget) out.push_back(c.name);
  }
  return out;
}

std::vector<std::vector<double>> TimeSeriesFrame::select_matrix(
    const std::vector<std::size_t>& cols) const {
  touch();
  std::vector<std::vector<double>> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) {
    std::vector<double> v;
    v.reserve(cols.size());
    for (const std::size_t c : cols) v.push_back(r.values[c]);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<double>> TimeSeriesFrame::input_matrix() const {
  return select_matrix(input_indices());
}

std::vector<std::vector<double>> TimeSeriesFrame::target_matrix() const {
  return select_matrix(target_indices());
}

bool TimeSeriesFrame::operator==(const TimeSeriesFrame& other) const {
  if (columns_.size() != other.columns_.size()) return false;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name != other.columns_[i].name ||
        columns_[i].role != other.columns_[i].role) {
      return false;
    }
  }
  if (rows_.size() != other.rows_.size()) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].date != other.rows_[i].date || rows_[i].values != other.rows_[i].values) {
      return false;
    }
  }
  return true;
}

namespace {

struct RawRow {
  Date date;
  std::vector<double> values;  // NaN marks a missing/unparseable cell
};

bool parse_cell(std::string_view text, double* out) {
  const auto t = trim(text);
  if (t.empty()) return false;
  try {
    *out = parse_double(t);
  } catch (const ParseError&) {
    return false;
  }
  return true;
}

}  // namespace

TimeSeriesFrame parse_csv(std::string_view text, const CsvSchema& schema) {
  if (schema.columns.empty()) throw MissingColumn("schema declares no columns");

  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input");

  const auto header = split(trim(line), ',');
  auto find_header = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw MissingColumn("CSV header is missing column '" + std::string(name) + "'");
  };

  const std::size_t date_idx = find_header(schema.date_column);
  std::vector<std::size_t> col_idx;
  col_idx.reserve(schema.columns.size());
  for (const auto& col : schema.columns) col_idx.push_back(find_header(col.name));

  std::vector<RawRow> raw;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto fields = split(stripped, ',');
    if (fields.size() <= date_idx) {
      throw ParseError("line " + std::to_string(line_no) + ": too few fields");
    }
    RawRow row;
    row.date = Date::parse(trim(fields[date_idx]));
    row.values.resize(schema.columns.size());
    for (std::size_t c = 0; c < col_idx.size(); ++c) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (col_idx[c] < fields.size()) {
        if (parse_cell(fields[col_idx[c]], &v) && !std::isfinite(v) &&
            schema.missing == MissingPolicy::kRejectRow) {
          // A cell that parses to nan/inf is corrupt data, not a gap.
          throw NonFiniteValue("non-finite value in column '" + schema.columns[c].name +
                               "' at line " + std::to_string(line_no));
        }
      }
      row.values[c] = v;
    }
    raw.push_back(std::move(row));
  }

  if (schema.sort_rows) {
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawRow& a, const RawRow& b) { return a.date < b.date; });
  }
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!(raw[i - 1].date < raw[i].date)) {
      throw NonMonotonicDates("duplicate or unsorted date " + raw[i].date.to_string());
    }
  }

  // Resolve gaps: forward-fill from the previous kept row, or drop the row.
  std::vector<ObservationRow> rows;
  rows.reserve(raw.size());
  for (auto& r : raw) {
    bool keep = true;
    for (std::size_t c = 0; c < r.values.size(); ++c) {
      if (std::isfinite(r.values[c])) continue;
      if (schema.missing == MissingPolicy::kForwardFill && !rows.empty()) {
        r.values[c] = rows.back().values[c];
      } else {
        keep = false;
        break;
      }
    }
    if (keep) rows.push_back({r.date, std::move(r.values)});
  }

  for (const auto& name : schema.log_transform) {
    std::size_t idx = schema.columns.size();
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (schema.columns[c].name == name) idx = c;
    }
    if (idx == schema.columns.size()) {
      throw MissingColumn("log_transform names unknown column '" + name + "'");
    }
    for (auto& row : rows) {
      if (row.values[idx] <= 0.0) {
        throw NonFiniteValue("log transform of non-positive value in '" + name + "' at " +
                             row.date.to_string());
      }
      row.values[idx] = std::log(row.values[idx]);
    }
  }

  return TimeSeriesFrame(schema.columns, std::move(rows));
}

TimeSeriesFrame load_csv(const std::string& path, const CsvSchema& schema) {
  return parse_csv(read_file(path), schema);
}

std::string to_csv(const TimeSeriesFrame& frame) {
  std::string out = "date";
  for (const auto& col : frame.columns()) {
    out += ',';
    out += col.name;
  }
  out += '\n';
  for (const auto& row : frame.rows()) {
    out += row.date.to_string();
    for (const double v : row.values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const TimeSeriesFrame& frame, const std::string& path) {
  write_file(path, to_csv(frame));
}

DescriptiveStats descriptive_stats(const TimeSeriesFrame& frame) {
  const std::size_t n = frame.row_count();
  if (n < 2) throw FrameTooSmall("descriptive_stats needs at least 2 rows");

  DescriptiveStats stats;
  stats.row_count = n;
  for (const auto& col : frame.columns()) {
    std::vector<double> values = frame.column_values(col.name);

    ColumnStats cs;
    cs.name = col.name;

    double sum = 0.0;
    for (const double v : values) sum += v;
    cs.mean = sum / static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : values) {
      const double d = v - cs.mean;
      const double d2 = d * d;
      m2 += d2;
      m3 += d2 * d;
      m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    cs.sd = std::sqrt(m2 * static_cast<double>(n) / static_cast<double>(n - 1));

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    cs.min = sorted.front();
    cs.max = sorted.back();
    cs.median = (n % 2 == 1) ? sorted[n / 2]
                             : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    if (m2 == 0.0) {
      cs.degenerate = true;
      cs.skewness = 0.0;
      cs.excess_kurtosis = 0.0;
    } else {
      cs.skewness = m3 / std::pow(m2, 1.5);
      cs.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    stats.columns.push_back(std::move(cs));
  }
  return stats;
}

TimeSeriesFrame slice_regime(const TimeSeriesFrame& frame, const RegimeSpec& regime) {
  if (!(regime.start_date < regime.end_date)) {
    throw ParseError("regime '" + regime.name + "' has start >= end");
  }
  std::vector<ObservationRow> rows;
  for (const auto& row : frame.rows()) {
    if (regime.start_date <= row.date && row.date < regime.end_date) {
      rows.push_back(row);
    }
  }
  if (rows.empty()) {
    throw EmptyRegime("regime '" + regime.name + "' [" + regime.start_date.to_string() +
                      ", " + regime.end_date.to_string() + ") selects no rows");
  }
  return TimeSeriesFrame(frame.columns(), std::move(rows));
}

SplitFrame chronological_split(const TimeSeriesFrame& frame, const SplitFractions& f) {
  if (!(f.train > 0.0) || !(f.test > 0.0) || !(f.validation > 0.0)) {
    throw BadFractions("split fractions must all be positive");
  }
  if (std::abs(f.train + f.test + f.validation - 1.0) > 1e-9) {
    throw BadFractions("split fractions must sum to 1");
  }
  const std::size_t n = frame.row_count();
  if (n < 10) throw FrameTooSmall("chronological_split needs at least 10 rows");

  const auto n_train = static_cast<std::size_t>(std::floor(f.train * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::floor(f.test * static_cast<double>(n)));
  if (n_train == 0 || n_test == 0 || n_train + n_test >= n) {
    throw BadFractions("split fractions leave an empty block");
  }
  const std::size_t n_val = n - n_train - n_test;

  const auto all = frame.rows();
  auto block = [&](std::size_t begin, std::size_t count) {
    return TimeSeriesFrame(
        frame.columns(),
        std::vector<ObservationRow>(all.begin() + static_cast<std::ptrdiff_t>(begin),
                                    all.begin() + static_cast<std::ptrdiff_t>(begin + count)));
  };

  // Validation sits between train and test so the test block is strictly
  // the most-future data.
  return SplitFrame{block(0, n_train), block(n_train, n_val),
                    block(n_train + n_val, n_test), f};
}

}  // namespace ffnet
