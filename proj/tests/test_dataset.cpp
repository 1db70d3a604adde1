#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "ffnet/dataset.hpp"
#include "ffnet/random.hpp"
#include "ffnet/synthetic.hpp"
#include "test_helpers.hpp"

using namespace ffnet;

namespace {

const CsvSchema kOilTepixSchema{
    "date", {{"oil", ColumnRole::kInput}, {"tepix", ColumnRole::kTarget}}};

std::string daily_csv(std::size_t n, Date start = Date::from_ymd(2008, 12, 1)) {
  std::string csv = "date,oil,tepix\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv += start.plus_days(static_cast<long>(i)).to_string() + ',' +
           std::to_string(40.0 + 0.01 * static_cast<double>(i)) + ',' +
           std::to_string(10000.0 + static_cast<double>(i)) + '\n';
  }
  return csv;
}

// Independent moment oracle: direct two-pass computation, no library calls.
struct Moments {
  double mean, sd, skewness, excess_kurtosis;
};

Moments reference_moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  return {mean, std::sqrt(m2 * n / (n - 1.0)), m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

}  // namespace

TEST_CASE("parse_csv returns a validated frame") {
  const auto frame = parse_csv(
      "date,oil,tepix\n"
      "2014-01-02,80.5,12000\n"
      "2014-01-03,81.0,12100\n"
      "2014-01-04,79.2,11950\n",
      kOilTepixSchema);
  CHECK(frame.row_count() == 3);
  CHECK(frame.input_names() == std::vector<std::string>{"oil"});
  CHECK(frame.target_names() == std::vector<std::string>{"tepix"});
  CHECK(frame.row(0).values[0] == 80.5);
  CHECK(frame.first_date() == Date::from_ymd(2014, 1, 2));
}

TEST_CASE("parse_csv rejects duplicate dates") {
  const std::string csv =
      "date,oil,tepix\n"
      "2014-01-02,80.5,12000\n"
      "2014-01-02,81.0,12100\n";
  CHECK_THROWS_AS(parse_csv(csv, kOilTepixSchema), NonMonotonicDates);
}

TEST_CASE("parse_csv handles a ten-year daily file") {
  const auto frame = parse_csv(daily_csv(1845), kOilTepixSchema);
  CHECK(frame.row_count() == 1845);
  CHECK(frame.first_date() == Date::from_ymd(2008, 12, 1));
  CHECK(frame.last_date() < Date::from_ymd(2014, 1, 1));
}

TEST_CASE("parse_csv errors") {
  SUBCASE("schema column absent") {
    CHECK_THROWS_AS(parse_csv("date,oil\n2014-01-02,80.5\n", kOilTepixSchema),
                    MissingColumn);
  }
  SUBCASE("unsorted dates without the sort flag") {
    const std::string csv =
        "date,oil,tepix\n"
        "2014-01-03,81.0,12100\n"
        "2014-01-02,80.5,12000\n";
    CHECK_THROWS_AS(parse_csv(csv, kOilTepixSchema), NonMonotonicDates);
    CsvSchema sorted = kOilTepixSchema;
    sorted.sort_rows = true;
    const auto frame = parse_csv(csv, sorted);
    CHECK(frame.row_count() == 2);
    CHECK(frame.first_date() == Date::from_ymd(2014, 1, 2));
  }
  SUBCASE("literal nan cell with fill disabled") {
    const std::string csv =
        "date,oil,tepix\n"
        "2014-01-02,nan,12000\n";
    CHECK_THROWS_AS(parse_csv(csv, kOilTepixSchema), NonFiniteValue);
  }
  SUBCASE("bad date text") {
    CHECK_THROWS_AS(parse_csv("date,oil,tepix\n02/01/2014,80.5,12000\n", kOilTepixSchema),
                    ParseError);
  }
}

TEST_CASE("missing cells are dropped or forward-filled per policy") {
  const std::string csv =
      "date,oil,tepix\n"
      "2014-01-02,80.5,12000\n"
      "2014-01-03,,12100\n"
      "2014-01-04,79.2,11950\n";

  const auto rejected = parse_csv(csv, kOilTepixSchema);
  CHECK(rejected.row_count() == 2);
  CHECK(rejected.row(1).date == Date::from_ymd(2014, 1, 4));

  CsvSchema fill = kOilTepixSchema;
  fill.missing = MissingPolicy::kForwardFill;
  const auto filled = parse_csv(csv, fill);
  CHECK(filled.row_count() == 3);
  CHECK(filled.row(1).values[0] == 80.5);

  // A gap in the very first row has nothing to fill from.
  const std::string leading_gap =
      "date,oil,tepix\n"
      "2014-01-02,,12000\n"
      "2014-01-03,81.0,12100\n";
  CHECK(parse_csv(leading_gap, fill).row_count() == 1);
}

TEST_CASE("optional log transform") {
  CsvSchema schema = kOilTepixSchema;
  schema.log_transform = {"oil"};
  const auto frame = parse_csv("date,oil,tepix\n2014-01-02,100,12000\n2014-01-03,200,12100\n",
                               schema);
  CHECK(frame.row(0).values[0] == doctest::Approx(std::log(100.0)).epsilon(1e-15));
  CHECK_THROWS_AS(
      parse_csv("date,oil,tepix\n2014-01-02,-1,12000\n2014-01-03,1,12100\n", schema),
      NonFiniteValue);
}

TEST_CASE("csv round-trip reproduces the parsed frame") {
  Rng rng(11);
  std::string csv = "date,oil,tepix\n";
  Date d = Date::from_ymd(2012, 3, 1);
  for (int i = 0; i < 50; ++i) {
    csv += d.to_string() + ',' + std::to_string(30.0 + 100.0 * rng.uniform()) + ',' +
           std::to_string(9000.0 + 5000.0 * rng.uniform()) + '\n';
    d = d.plus_days(1 + static_cast<long>(rng.uniform() * 3.0));
  }
  const auto frame = parse_csv(csv, kOilTepixSchema);
  const auto reparsed = parse_csv(to_csv(frame), kOilTepixSchema);
  CHECK(frame == reparsed);
}

TEST_CASE("descriptive_stats matches hand computation on [1,2,3]") {
  const auto stats = descriptive_stats(testing::make_column_frame({1.0, 2.0, 3.0}));
  const auto& x = stats.columns[0];
  CHECK(x.mean == 2.0);
  CHECK(x.median == 2.0);
  CHECK(x.sd == 1.0);
  CHECK(x.skewness == 0.0);
  CHECK_FALSE(x.degenerate);
  CHECK(stats.row_count == 3);
}

TEST_CASE("descriptive_stats flags zero-variance columns") {
  const auto stats = descriptive_stats(testing::make_column_frame({5.0, 5.0, 5.0, 5.0}));
  const auto& x = stats.columns[0];
  CHECK(x.sd == 0.0);
  CHECK(x.skewness == 0.0);
  CHECK(x.excess_kurtosis == 0.0);
  CHECK(x.degenerate);
}

TEST_CASE("descriptive_stats median lies within [min, max]") {
  Rng rng(4);
  std::vector<double> values(101);
  for (double& v : values) v = rng.normal() * 3.0 + 1.0;
  const auto stats = descriptive_stats(testing::make_column_frame(values));
  const auto& x = stats.columns[0];
  CHECK(x.min <= x.median);
  CHECK(x.median <= x.max);
  const auto ref = reference_moments(values);
  CHECK(x.mean == doctest::Approx(ref.mean).epsilon(1e-12));
  CHECK(x.sd == doctest::Approx(ref.sd).epsilon(1e-12));
  CHECK(x.skewness == doctest::Approx(ref.skewness).epsilon(1e-12));
  CHECK(x.excess_kurtosis == doctest::Approx(ref.excess_kurtosis).epsilon(1e-12));
}

TEST_CASE("descriptive_stats depends only on the value multiset") {
  const std::vector<double> values{4.0, -1.0, 7.5, 2.2, 0.0, 3.3};
  std::vector<double> shuffled = values;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto a = descriptive_stats(testing::make_column_frame(values)).columns[0];
  const auto b = descriptive_stats(testing::make_column_frame(shuffled)).columns[0];
  // Equal up to summation order (reordering shifts the accumulation by ulps).
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-14));
  CHECK(a.median == b.median);
  CHECK(a.sd == doctest::Approx(b.sd).epsilon(1e-14));
  CHECK(a.skewness == doctest::Approx(b.skewness).epsilon(1e-13));
  CHECK(a.excess_kurtosis == doctest::Approx(b.excess_kurtosis).epsilon(1e-13));
}

TEST_CASE("descriptive_stats needs at least two rows") {
  CHECK_THROWS_AS(descriptive_stats(testing::make_column_frame({1.0})), FrameTooSmall);
}

TEST_CASE("slice_regime selects [start, end)") {
  const auto frame = parse_csv(daily_csv(2200), kOilTepixSchema);  // through 2014
  const RegimeSpec sanction{"sanction", Date::from_ymd(2008, 12, 1),
                            Date::from_ymd(2014, 1, 1)};
  const auto sliced = slice_regime(frame, sanction);
  CHECK(sliced.row_count() > 0);
  CHECK(sliced.last_date() < Date::from_ymd(2014, 1, 1));
  CHECK(sliced.first_date() == frame.first_date());

  SUBCASE("window equal to the full range is the identity") {
    const RegimeSpec all{"all", frame.first_date(), frame.last_date().plus_days(1)};
    CHECK(slice_regime(frame, all) == frame);
  }
  SUBCASE("idempotent for the same window") {
    CHECK(slice_regime(sliced, sanction) == sliced);
  }
  SUBCASE("empty intersection") {
    const RegimeSpec future{"future", Date::from_ymd(2030, 1, 1), Date::from_ymd(2031, 1, 1)};
    CHECK_THROWS_AS(slice_regime(frame, future), EmptyRegime);
  }
}

TEST_CASE("chronological_split block sizes and ordering") {
  const SplitFractions f{0.75, 0.20, 0.05};

  SUBCASE("N=100") {
    const auto split = chronological_split(parse_csv(daily_csv(100), kOilTepixSchema), f);
    CHECK(split.train.row_count() == 75);
    CHECK(split.validation.row_count() == 5);
    CHECK(split.test.row_count() == 20);
  }
  SUBCASE("N=1845 trains on 1383 rows") {
    const auto split = chronological_split(parse_csv(daily_csv(1845), kOilTepixSchema), f);
    CHECK(split.train.row_count() == 1383);
    CHECK(split.test.row_count() == 369);
    CHECK(split.validation.row_count() == 1845 - 1383 - 369);
  }
  SUBCASE("N=10 remainder goes to validation") {
    const auto split = chronological_split(parse_csv(daily_csv(10), kOilTepixSchema), f);
    CHECK(split.train.row_count() == 7);
    CHECK(split.validation.row_count() == 1);
    CHECK(split.test.row_count() == 2);
  }
}

TEST_CASE("chronological_split keeps blocks contiguous and ordered") {
  const auto frame = parse_csv(daily_csv(137), kOilTepixSchema);
  const auto split = chronological_split(frame, {0.75, 0.20, 0.05});

  CHECK(split.train.last_date() < split.validation.first_date());
  CHECK(split.validation.last_date() < split.test.first_date());

  std::vector<ObservationRow> joined;
  for (const auto& block : {split.train, split.validation, split.test}) {
    for (const auto& row : block.rows()) joined.push_back(row);
  }
  const TimeSeriesFrame rebuilt(frame.columns(), std::move(joined));
  CHECK(rebuilt == frame);
  CHECK(split.fractions.train == 0.75);
}

TEST_CASE("chronological_split preconditions") {
  const auto frame = parse_csv(daily_csv(100), kOilTepixSchema);
  CHECK_THROWS_AS(chronological_split(frame, {0.70, 0.20, 0.05}), BadFractions);
  CHECK_THROWS_AS(chronological_split(frame, {-0.75, 1.70, 0.05}), BadFractions);
  CHECK_THROWS_AS(chronological_split(parse_csv(daily_csv(9), kOilTepixSchema),
                                      {0.75, 0.20, 0.05}),
                  FrameTooSmall);
}

TEST_CASE("generate_synthetic is deterministic per seed") {
  SyntheticSpec spec;
  spec.columns = {{"oil", ColumnRole::kInput, 77.2, 27.3},
                  {"tepix", ColumnRole::kTarget, 48779.0, 28487.0}};
  const auto a = generate_synthetic(spec, 500, 7);
  const auto b = generate_synthetic(spec, 500, 7);
  CHECK(a == b);
  CHECK(to_csv(a) == to_csv(b));
  const auto c = generate_synthetic(spec, 500, 8);
  CHECK_FALSE(a == c);
}

TEST_CASE("generate_synthetic tracks requested moments") {
  SyntheticSpec spec;
  spec.columns = {{"oil", ColumnRole::kInput, 77.2, 27.3},
                  {"tepix", ColumnRole::kTarget, 48779.0, 28487.0}};
  const auto frame = generate_synthetic(spec, 2000, 42);
  const auto ref = reference_moments(frame.column_values("oil"));
  CHECK(std::abs(ref.mean - 77.2) < 1.5);  // ~2.5 sigma of the sample mean
  CHECK(std::abs(ref.sd - 27.3) / 27.3 < 0.1);
}

TEST_CASE("generate_synthetic heavy tails hit the kurtosis target") {
  SyntheticSpec spec;
  spec.columns = {{"volume", ColumnRole::kInput, 0.0, 1.0, 3.0},
                  {"y", ColumnRole::kTarget, 0.0, 1.0}};
  const auto frame = generate_synthetic(spec, 20000, 3);
  const auto ref = reference_moments(frame.column_values("volume"));
  CHECK(std::abs(ref.excess_kurtosis - 3.0) < 0.5);
}

TEST_CASE("generate_synthetic level shock shifts the path") {
  SyntheticSpec spec;
  SyntheticColumn oil{"oil", ColumnRole::kInput, 100.0, 2.0};
  oil.shock = ShockSpec{500, -50.0};  // -0.5 * level
  spec.columns = {oil, {"y", ColumnRole::kTarget, 0.0, 1.0}};
  const auto frame = generate_synthetic(spec, 1000, 9);
  const auto values = frame.column_values("oil");
  double before = 0.0, after = 0.0;
  for (std::size_t i = 0; i < 500; ++i) before += values[i];
  for (std::size_t i = 500; i < 1000; ++i) after += values[i];
  before /= 500.0;
  after /= 500.0;
  CHECK(before == doctest::Approx(100.0).epsilon(0.01));
  CHECK(after == doctest::Approx(50.0).epsilon(0.02));
}

TEST_CASE("generate_synthetic derived targets follow the inputs") {
  SyntheticSpec spec;
  spec.columns = {{"x1", ColumnRole::kInput, 100.0, 5.0},
                  {"x2", ColumnRole::kInput, 50.0, 5.0}};
  spec.derived_targets = {{"y", {0.5, -0.2}, 0.0, 0.0}};
  const auto frame = generate_synthetic(spec, 100, 21);
  for (const auto& row : frame.rows()) {
    CHECK(row.values[2] == doctest::Approx(0.5 * row.values[0] - 0.2 * row.values[1])
                               .epsilon(1e-12));
  }
}

TEST_CASE("frame access probe counts value reads") {
  auto frame = testing::make_column_frame({1.0, 2.0, 3.0});
  auto probe = std::make_shared<AccessStats>();
  frame.attach_probe(probe);
  CHECK(probe->value_reads.load() == 0);
  (void)frame.row_count();  // metadata is free
  CHECK(probe->value_reads.load() == 0);
  (void)frame.rows();
  CHECK(probe->value_reads.load() == 1);
  (void)frame.input_matrix();
  CHECK(probe->value_reads.load() == 2);
}
