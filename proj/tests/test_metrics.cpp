#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "ffnet/metrics.hpp"
#include "ffnet/random.hpp"
#include "test_helpers.hpp"

using namespace ffnet;

namespace {

// Independent reference computations, one explicit accumulation each.
double ref_rmse(const std::vector<double>& s, const std::vector<double>& o) {
  double acc = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) acc += (s[t] - o[t]) * (s[t] - o[t]);
  return std::sqrt(acc / static_cast<double>(s.size()));
}

double ref_mape(const std::vector<double>& s, const std::vector<double>& o) {
  double acc = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) acc += std::fabs((s[t] - o[t]) / s[t]);
  return 100.0 * acc / static_cast<double>(s.size());
}

double ref_mae(const std::vector<double>& s, const std::vector<double>& o) {
  double acc = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) acc += std::fabs(s[t] - o[t]);
  return acc / static_cast<double>(s.size());
}

std::pair<std::vector<double>, std::vector<double>> random_pair(Rng& rng, std::size_t n) {
  std::vector<double> s(n), o(n);
  for (std::size_t t = 0; t < n; ++t) {
    s[t] = rng.uniform(1.0, 100.0);  // strictly positive so MAPE is defined
    o[t] = s[t] + rng.normal() * 5.0;
  }
  return {s, o};
}

}  // namespace

TEST_CASE("rmse") {
  const std::vector<double> s{1.0, 2.0};
  CHECK(rmse(s, s) == 0.0);
  CHECK(rmse(s, std::vector<double>{1.0, 4.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(rmse(s, std::vector<double>{1.0}), LengthMismatch);
  CHECK_THROWS_AS(rmse({}, {}), EmptyInput);
}

TEST_CASE("mape") {
  const std::vector<double> s{100.0};
  CHECK(mape(s, s) == 0.0);
  CHECK(mape(s, std::vector<double>{90.0}) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(mape(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 1.0}),
                  ZeroActual);
}

TEST_CASE("mae") {
  const std::vector<double> s{1.0, 3.0};
  CHECK(mae(s, s) == 0.0);
  CHECK(mae(s, std::vector<double>{2.0, 1.0}) == 1.5);
  CHECK_THROWS_AS(mae({}, {}), EmptyInput);
}

TEST_CASE("hit_rate") {
  const std::vector<double> s{100.0, 100.0};
  CHECK(hit_rate(s, s, 0.1) == 1.0);
  CHECK(hit_rate(s, std::vector<double>{95.0, 80.0}, 0.1) == 0.5);
  CHECK(hit_rate(s, std::vector<double>{95.0, 80.0}, 1e9) == 1.0);
  CHECK_THROWS_AS(hit_rate(std::vector<double>{0.0}, std::vector<double>{1.0}, 0.1),
                  ZeroActual);
  CHECK_THROWS_AS(hit_rate(s, s, 0.0), ConfigError);
}

TEST_CASE("metrics equal the reference computations on random pairs") {
  Rng rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [s, o] = random_pair(rng, 200);
    CHECK(std::abs(rmse(s, o) - ref_rmse(s, o)) <= 1e-12);
    CHECK(std::abs(mape(s, o) - ref_mape(s, o)) <= 1e-12);
    CHECK(std::abs(mae(s, o) - ref_mae(s, o)) <= 1e-12);
    CHECK(rmse(s, o) >= mae(s, o));
  }
}

TEST_CASE("rmse equals mae when every absolute error is equal") {
  const std::vector<double> s{10.0, 20.0, 30.0};
  const std::vector<double> o{12.0, 18.0, 32.0};  // |e| = 2 everywhere
  CHECK(rmse(s, o) == doctest::Approx(mae(s, o)).epsilon(1e-14));
  CHECK(rmse(s, s) == mae(s, s));
}

TEST_CASE("metrics are invariant under simultaneous permutation") {
  Rng rng(31415);
  auto [s, o] = random_pair(rng, 64);
  std::vector<double> rs(s.rbegin(), s.rend());
  std::vector<double> ro(o.rbegin(), o.rend());
  CHECK(rmse(s, o) == doctest::Approx(rmse(rs, ro)).epsilon(1e-13));
  CHECK(mae(s, o) == doctest::Approx(mae(rs, ro)).epsilon(1e-13));
  CHECK(mape(s, o) == doctest::Approx(mape(rs, ro)).epsilon(1e-13));
  CHECK(hit_rate(s, o, 0.1) == hit_rate(rs, ro, 0.1));
}

TEST_CASE("scaling behaviour under (s,o) -> (c*s, c*o)") {
  Rng rng(999);
  const auto [s, o] = random_pair(rng, 128);
  const double c = 37.5;
  std::vector<double> cs(s), co(o);
  for (double& v : cs) v *= c;
  for (double& v : co) v *= c;
  CHECK(rmse(cs, co) == doctest::Approx(c * rmse(s, o)).epsilon(1e-12));
  CHECK(mae(cs, co) == doctest::Approx(c * mae(s, o)).epsilon(1e-12));
  CHECK(mape(cs, co) == doctest::Approx(mape(s, o)).epsilon(1e-12));
  CHECK(hit_rate(cs, co, 0.1) == hit_rate(s, o, 0.1));
}

TEST_CASE("original-unit errors equal scaled-unit errors times the fitted range") {
  // Cross-check with the scaler on a single column.
  const auto train = testing::make_frame({30.0, 145.0, 80.0}, {1.0, 2.0, 3.0});
  const auto scaler = MinMaxScaler::fit(train);
  const double range = 145.0 - 30.0;

  Rng rng(7);
  std::vector<double> s(50), o(50), ss(50), so(50);
  for (std::size_t t = 0; t < s.size(); ++t) {
    s[t] = rng.uniform(35.0, 140.0);
    o[t] = s[t] + rng.normal() * 4.0;
    ss[t] = scaler.transform_value("x", s[t]);
    so[t] = scaler.transform_value("x", o[t]);
  }
  CHECK(rmse(s, o) == doctest::Approx(range * rmse(ss, so)).epsilon(1e-10));
  CHECK(mae(s, o) == doctest::Approx(range * mae(ss, so)).epsilon(1e-10));
}

TEST_CASE("evaluate scores a perfect predictor with zero error") {
  // Target column equals the input column, so a pass-through net predicts
  // it exactly in scaled space.
  std::vector<double> v;
  for (int i = 0; i < 40; ++i) v.push_back(50.0 + i);
  const auto frame = testing::make_frame(v, v);
  const auto split = chronological_split(frame, {0.75, 0.20, 0.05});
  const auto scaler = MinMaxScaler::fit(split.train);

  const Network identity({{1, 1, Activation::kLinear}, {1, 1, Activation::kLinear}},
                         {{1.0}, {1.0}}, {{0.0}, {0.0}});
  const auto report = evaluate(identity, scaler, split, "regime_a");

  REQUIRE(report.rows.size() == 2);  // one target, two unit systems
  for (const auto& row : report.rows) {
    CHECK(row.regime == "regime_a");
    CHECK(row.target == "y");
    CHECK(row.mae == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(row.rmse == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(row.mape == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(row.hit_rate == 1.0);
    CHECK(row.n == split.test.row_count());
  }
}

TEST_CASE("merged two-regime reports cover four cells") {
  std::vector<double> v;
  for (int i = 0; i < 40; ++i) v.push_back(50.0 + i);
  const auto frame = testing::make_frame(v, v);
  const auto split = chronological_split(frame, {0.75, 0.20, 0.05});
  const auto scaler = MinMaxScaler::fit(split.train);
  const Network identity({{1, 1, Activation::kLinear}, {1, 1, Activation::kLinear}},
                         {{1.0}, {1.0}}, {{0.0}, {0.0}});

  EvaluationReport merged = evaluate(identity, scaler, split, "sanction");
  merged.merge(evaluate(identity, scaler, split, "post_sanction"));
  CHECK(merged.rows.size() == 4);
  CHECK_NOTHROW(merged.find("sanction", "y", "scaled"));
  CHECK_NOTHROW(merged.find("post_sanction", "y", "original"));
  CHECK_THROWS(merged.find("sanction", "nope", "scaled"));
}

TEST_CASE("report CSV round-trips losslessly") {
  EvaluationReport report;
  report.rows.push_back({"sanction", "tepix", "original", 369, 0.107, 1106.0, 0.07, 0.9});
  report.rows.push_back({"sanction", "industry", "original", 369, 0.116, 1629.0, 0.16, 0.9});
  report.rows.push_back({"post", "tepix", "scaled", 240, 1.0 / 3.0, 0.125, 12.5, 0.875});

  const auto restored = EvaluationReport::from_csv(report.to_csv());
  REQUIRE(restored.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(restored.rows[i].regime == report.rows[i].regime);
    CHECK(restored.rows[i].target == report.rows[i].target);
    CHECK(restored.rows[i].units == report.rows[i].units);
    CHECK(restored.rows[i].n == report.rows[i].n);
    CHECK(restored.rows[i].mae == report.rows[i].mae);
    CHECK(restored.rows[i].rmse == report.rows[i].rmse);
    CHECK(restored.rows[i].mape == report.rows[i].mape);
    CHECK(restored.rows[i].hit_rate == report.rows[i].hit_rate);
  }
  CHECK_THROWS_AS(EvaluationReport::from_csv("bogus\n"), ParseError);

  const auto table = report.to_table();
  CHECK(table.find("sanction/tepix") != std::string::npos);
  CHECK(table.find("RMSE") != std::string::npos);
}
