#include "ffnet/synthetic.hpp"

#include <cmath>

#include "ffnet/random.hpp"

namespace ffnet {

namespace {

// Unit-variance draw with the requested excess kurtosis, as a two-component
// normal scale mixture: with probability p the variance is a, else b, where
//   p*a + (1-p)*b = 1           (unit variance)
//   3*(p*a^2 + (1-p)*b^2) - 3 = g  (excess kurtosis)
// giving a = 1 + sqrt((1-p)(g/3)/p), b = (1 - p*a)/(1-p). p shrinks for
// very heavy tails so b stays positive.
struct TailMixture {
  double p = 0.0;
  double outlier_sd = 1.0;
  double core_sd = 1.0;

  explicit TailMixture(double excess_kurtosis) {
    const double g = excess_kurtosis;
    if (g <= 0.0) return;  // plain normal
    p = (g <= 24.0) ? 0.1 : 1.5 / (g + 3.0);
    const double a = 1.0 + std::sqrt((1.0 - p) * (g / 3.0) / p);
    const double b = (1.0 - p * a) / (1.0 - p);
    outlier_sd = std::sqrt(a);
    core_sd = std::sqrt(b);
  }

  double draw(Rng& rng) const {
    if (p == 0.0) return rng.normal();
    const bool outlier = rng.uniform() < p;
    return rng.normal() * (outlier ? outlier_sd : core_sd);
  }
};

void apply_shock(std::vector<double>& series, const std::optional<ShockSpec>& shock) {
  if (!shock) return;
  for (std::size_t i = shock->index; i < series.size(); ++i) series[i] += shock->delta;
}

}  // namespace

TimeSeriesFrame generate_synthetic(const SyntheticSpec& spec, std::size_t n,
                                   std::uint64_t seed) {
  if (n < 2) throw FrameTooSmall("generate_synthetic needs n >= 2");
  if (spec.columns.empty()) throw MissingColumn("synthetic spec has no columns");

  Rng rng(seed);

  std::vector<std::vector<double>> series;
  series.reserve(spec.columns.size() + spec.derived_targets.size());

  std::vector<std::size_t> input_cols;
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    const auto& col = spec.columns[c];
    const TailMixture mix(col.excess_kurtosis);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = col.mean + col.sd * mix.draw(rng);
    apply_shock(values, col.shock);
    if (col.role == ColumnRole::kInput) input_cols.push_back(c);
    series.push_back(std::move(values));
  }

  for (const auto& target : spec.derived_targets) {
    if (target.weights.size() != input_cols.size()) {
      throw ShapeMismatch("derived target '" + target.name + "' has " +
                          std::to_string(target.weights.size()) + " weights for " +
                          std::to_string(input_cols.size()) + " input columns");
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = target.intercept;
      for (std::size_t w = 0; w < target.weights.size(); ++w) {
        v += target.weights[w] * series[input_cols[w]][i];
      }
      if (target.noise_sd > 0.0) v += target.noise_sd * rng.normal();
      values[i] = v;
    }
    apply_shock(values, target.shock);
    series.push_back(std::move(values));
  }

  std::vector<ColumnSpec> columns;
  for (const auto& col : spec.columns) columns.push_back({col.name, col.role});
  for (const auto& target : spec.derived_targets) {
    columns.push_back({target.name, ColumnRole::kTarget});
  }

  std::vector<ObservationRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].date = spec.start_date.plus_days(static_cast<long>(i));
    rows[i].values.reserve(series.size());
    for (const auto& s : series) rows[i].values.push_back(s[i]);
  }

  return TimeSeriesFrame(std::move(columns), std::move(rows));
}

}  // namespace ffnet
