#include "ffnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ffnet/textio.hpp"

namespace ffnet {

namespace {

void check_pair(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw LengthMismatch("series lengths differ: " + std::to_string(actual.size()) +
                         " vs " + std::to_string(predicted.size()));
  }
  if (actual.empty()) throw EmptyInput("empty series");
}

}  // namespace

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    const double d = actual[t] - predicted[t];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(actual.size()));
}

double mape(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    if (actual[t] == 0.0) {
      throw ZeroActual("MAPE undefined: actual value is 0 at index " + std::to_string(t));
    }
    sum += std::abs((actual[t] - predicted[t]) / actual[t]);
  }
  return 100.0 * sum / static_cast<double>(actual.size());
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    sum += std::abs(actual[t] - predicted[t]);
  }
  return sum / static_cast<double>(actual.size());
}

double hit_rate(std::span<const double> actual, std::span<const double> predicted,
                double epsilon) {
  check_pair(actual, predicted);
  if (!(epsilon > 0.0)) throw ConfigError("hit_rate epsilon must be positive");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    if (actual[t] == 0.0) {
      throw ZeroActual("hit_rate undefined: actual value is 0 at index " + std::to_string(t));
    }
    if (std::abs(actual[t] - predicted[t]) / std::abs(actual[t]) <= epsilon) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(actual.size());
}

void EvaluationReport::merge(const EvaluationReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

const EvaluationRow& EvaluationReport::find(std::string_view regime, std::string_view target,
                                            std::string_view units) const {
  for (const auto& row : rows) {
    if (row.regime == regime && row.target == target && row.units == units) return row;
  }
  throw Error("report has no cell (" + std::string(regime) + ", " + std::string(target) +
              ", " + std::string(units) + ")");
}

std::string EvaluationReport::to_csv() const {
  std::string out = "regime,target,units,n,mae,rmse,mape,hit_rate\n";
  for (const auto& r : rows) {
    out += r.regime + ',' + r.target + ',' + r.units + ',' + std::to_string(r.n) + ',' +
           format_double(r.mae) + ',' + format_double(r.rmse) + ',' + format_double(r.mape) +
           ',' + format_double(r.hit_rate) + '\n';
  }
  return out;
}

EvaluationReport EvaluationReport::from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "regime,target,units,n,mae,rmse,mape,hit_rate") {
    throw ParseError("not an evaluation CSV (bad header)");
  }
  EvaluationReport report;
  while (std::getline(in, line)) {
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto fields = split(stripped, ',');
    if (fields.size() != 8) throw ParseError("bad evaluation row: " + std::string(stripped));
    EvaluationRow row;
    row.regime = fields[0];
    row.target = fields[1];
    row.units = fields[2];
    row.n = static_cast<std::size_t>(std::stoull(fields[3]));
    row.mae = parse_double(fields[4], "mae");
    row.rmse = parse_double(fields[5], "rmse");
    row.mape = parse_double(fields[6], "mape");
    row.hit_rate = parse_double(fields[7], "hit_rate");
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string EvaluationReport::to_table() const {
  // Column layout follows the regime/target pairs in first-seen order;
  // metrics are the table rows, one block per unit system.
  std::vector<std::string> units_order;
  std::vector<std::pair<std::string, std::string>> cells;
  for (const auto& r : rows) {
    if (std::find(units_order.begin(), units_order.end(), r.units) == units_order.end()) {
      units_order.push_back(r.units);
    }
    const auto cell = std::make_pair(r.regime, r.target);
    if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
  }

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };

  std::string out;
  for (const auto& units : units_order) {
    out += "== " + units + " units ==\n";
    const std::size_t width = 18;
    auto pad = [&](std::string s) {
      if (s.size() < width) s.append(width - s.size(), ' ');
      return s;
    };
    out += pad("metric");
    for (const auto& [regime, target] : cells) out += pad(regime + "/" + target);
    out += '\n';

    auto metric_row = [&](const std::string& label, auto getter) {
      out += pad(label);
      for (const auto& [regime, target] : cells) {
        bool found = false;
        for (const auto& r : rows) {
          if (r.regime == regime && r.target == target && r.units == units) {
            out += pad(fmt(getter(r)));
            found = true;
            break;
          }
        }
        if (!found) out += pad("-");
      }
      out += '\n';
    };

    metric_row("MAE", [](const EvaluationRow& r) { return r.mae; });
    metric_row("RMSE", [](const EvaluationRow& r) { return r.rmse; });
    metric_row("MAPE(%)", [](const EvaluationRow& r) { return r.mape; });
    metric_row("hit_rate", [](const EvaluationRow& r) { return r.hit_rate; });
    out += pad("n");
    for (const auto& [regime, target] : cells) {
      bool found = false;
      for (const auto& r : rows) {
        if (r.regime == regime && r.target == target && r.units == units) {
          out += pad(std::to_string(r.n));
          found = true;
          break;
        }
      }
      if (!found) out += pad("-");
    }
    out += '\n';
  }
  return out;
}

EvaluationReport evaluate(const Network& net, const MinMaxScaler& scaler,
                          const SplitFrame& split, const std::string& regime_name,
                          double hit_epsilon) {
  const auto target_names = split.test.target_names();
  if (net.output_size() != target_names.size()) {
    throw ShapeMismatch("network output width does not match target column count");
  }

  // Metrics run on the test block only: scale inputs, forward, then undo
  // the target scaling for the original-unit rows.
  const TimeSeriesFrame scaled_test = scaler.transform(split.test);
  const auto predicted_scaled = net.forward_batch(scaled_test.input_matrix());
  const auto actual_scaled = scaled_test.target_matrix();
  const auto actual_original = split.test.target_matrix();

  EvaluationReport report;
  for (std::size_t t = 0; t < target_names.size(); ++t) {
    std::vector<double> pred_s(predicted_scaled.size());
    std::vector<double> act_s(predicted_scaled.size());
    std::vector<double> pred_o(predicted_scaled.size());
    std::vector<double> act_o(predicted_scaled.size());
    for (std::size_t i = 0; i < predicted_scaled.size(); ++i) {
      pred_s[i] = predicted_scaled[i][t];
      act_s[i] = actual_scaled[i][t];
      pred_o[i] = scaler.inverse_value(target_names[t], predicted_scaled[i][t]);
      act_o[i] = actual_original[i][t];
    }

    for (const bool scaled : {true, false}) {
      const auto& act = scaled ? act_s : act_o;
      const auto& pred = scaled ? pred_s : pred_o;
      EvaluationRow row;
      row.regime = regime_name;
      row.target = target_names[t];
      row.units = scaled ? "scaled" : "original";
      row.n = act.size();
      row.mae = mae(act, pred);
      row.rmse = rmse(act, pred);
      row.mape = mape(act, pred);
      row.hit_rate = hit_rate(act, pred, hit_epsilon);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace ffnet
