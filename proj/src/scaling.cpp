#include "ffnet/scaling.hpp"

#include <algorithm>
#include <sstream>

#include "ffnet/textio.hpp"

namespace ffnet {

MinMaxScaler MinMaxScaler::fit(const TimeSeriesFrame& train) {
  if (train.empty()) throw EmptyFrame("cannot fit scaler on an empty frame");

  MinMaxScaler scaler;
  const auto rows = train.rows();
  for (std::size_t c = 0; c < train.column_count(); ++c) {
    ColumnRange r;
    r.name = train.columns()[c].name;
    r.role = train.columns()[c].role;
    r.min = r.max = rows[0].values[c];
    for (const auto& row : rows) {
      r.min = std::min(r.min, row.values[c]);
      r.max = std::max(r.max, row.values[c]);
    }
    scaler.ranges_.push_back(std::move(r));
  }
  return scaler;
}

void MinMaxScaler::check_columns(const TimeSeriesFrame& frame) const {
  if (frame.column_count() != ranges_.size()) {
    throw ColumnMismatch("frame has " + std::to_string(frame.column_count()) +
                         " columns, scaler was fitted on " + std::to_string(ranges_.size()));
  }
  for (std::size_t c = 0; c < ranges_.size(); ++c) {
    if (frame.columns()[c].name != ranges_[c].name) {
      throw ColumnMismatch("column '" + frame.columns()[c].name +
                           "' does not match fitted column '" + ranges_[c].name + "'");
    }
  }
}

const MinMaxScaler::ColumnRange& MinMaxScaler::range(std::string_view column) const {
  for (const auto& r : ranges_) {
    if (r.name == column) return r;
  }
  throw ColumnMismatch("scaler has no column '" + std::string(column) + "'");
}

double MinMaxScaler::transform_value(std::string_view column, double x) const {
  const auto& r = range(column);
  if (r.degenerate()) return 0.0;
  return (x - r.min) / (r.max - r.min);
}

double MinMaxScaler::inverse_value(std::string_view column, double x_scaled) const {
  const auto& r = range(column);
  if (r.degenerate()) return r.min;
  return x_scaled * (r.max - r.min) + r.min;
}

namespace {

TimeSeriesFrame map_frame(const TimeSeriesFrame& frame,
                          const std::vector<MinMaxScaler::ColumnRange>& ranges,
                          bool inverse) {
  std::vector<ObservationRow> rows;
  rows.reserve(frame.row_count());
  for (const auto& row : frame.rows()) {
    ObservationRow out{row.date, row.values};
    for (std::size_t c = 0; c < ranges.size(); ++c) {
      const auto& r = ranges[c];
      if (r.degenerate()) {
        out.values[c] = inverse ? r.min : 0.0;
      } else if (inverse) {
        out.values[c] = row.values[c] * (r.max - r.min) + r.min;
      } else {
        out.values[c] = (row.values[c] - r.min) / (r.max - r.min);
      }
    }
    rows.push_back(std::move(out));
  }
  return TimeSeriesFrame(frame.columns(), std::move(rows));
}

}  // namespace

TimeSeriesFrame MinMaxScaler::transform(const TimeSeriesFrame& frame) const {
  check_columns(frame);
  return map_frame(frame, ranges_, /*inverse=*/false);
}

TimeSeriesFrame MinMaxScaler::inverse_transform(const TimeSeriesFrame& frame) const {
  check_columns(frame);
  return map_frame(frame, ranges_, /*inverse=*/true);
}

std::string MinMaxScaler::to_text() const {
  std::string out = "ffnet-scaler v1\n";
  for (const auto& r : ranges_) {
    out += r.name;
    out += r.role == ColumnRole::kInput ? " input " : " target ";
    out += format_double(r.min);
    out += ' ';
    out += format_double(r.max);
    out += '\n';
  }
  return out;
}

MinMaxScaler MinMaxScaler::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != "ffnet-scaler v1") {
    throw ParseError("not a scaler file (bad header)");
  }
  MinMaxScaler scaler;
  while (std::getline(in, line)) {
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    std::istringstream fields{std::string(stripped)};
    ColumnRange r;
    std::string role_tok, min_tok, max_tok;
    if (!(fields >> r.name >> role_tok >> min_tok >> max_tok)) {
      throw ParseError("bad scaler line: " + std::string(stripped));
    }
    if (role_tok == "input") {
      r.role = ColumnRole::kInput;
    } else if (role_tok == "target") {
      r.role = ColumnRole::kTarget;
    } else {
      throw ParseError("bad column role '" + role_tok + "' in scaler file");
    }
    r.min = parse_double(min_tok, "scaler min");
    r.max = parse_double(max_tok, "scaler max");
    if (r.min > r.max) throw ParseError("scaler column '" + r.name + "' has min > max");
    scaler.ranges_.push_back(std::move(r));
  }
  if (scaler.ranges_.empty()) throw ParseError("scaler file has no columns");
  return scaler;
}

void MinMaxScaler::save(const std::string& path) const { write_file(path, to_text()); }

MinMaxScaler MinMaxScaler::load(const std::string& path) {
  return from_text(read_file(path));
}

}  // namespace ffnet
