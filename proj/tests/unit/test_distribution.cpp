#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "ubisim/distribution.hpp"

using namespace ubisim;
using fixtures::R;

namespace {

struct Entry {
  std::int64_t base;  // centavos
  std::int64_t reform;
  double weight = 1.0;
  int age = 30;
};

IndividualIncomeView view_of(const std::vector<Entry>& entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  IndividualIncomeView v;
  v.weight.resize(n);
  v.weight_micros.resize(n);
  v.age.resize(n);
  v.pc_baseline.resize(n);
  v.pc_reform.resize(n);
  v.order_key.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = entries[static_cast<std::size_t>(i)];
    v.weight_micros(i) = Weight::from_double(e.weight).micros();
    v.weight(i) = static_cast<double>(v.weight_micros(i)) / Weight::kScale;
    v.age(i) = e.age;
    v.pc_baseline(i) = e.base;
    v.pc_reform(i) = e.reform;
    v.order_key(i) = static_cast<int>(i);
  }
  return v;
}

double gini(const std::vector<double>& x, const std::vector<double>& w) {
  return weighted_gini(Eigen::Map<const Eigen::ArrayXd>(x.data(), static_cast<Eigen::Index>(x.size())),
                       Eigen::Map<const Eigen::ArrayXd>(w.data(), static_cast<Eigen::Index>(w.size())));
}

}  // namespace

TEST_CASE("gini fixed cases") {
  CHECK(gini({5, 5, 5}, {1, 2, 3}) == Catch::Approx(0.0).margin(1e-15));
  CHECK(gini({1, 3}, {1, 1}) == Catch::Approx(0.25).epsilon(1e-12));
  CHECK(gini({10, 20}, {3, 1}) == Catch::Approx(0.15).epsilon(1e-12));
  CHECK(gini({0, 0, 1}, {1, 1, 1}) == Catch::Approx(oracle::pairwise_gini({0, 0, 1}, {1, 1, 1})));
}

TEST_CASE("gini rejects bad input") {
  CHECK_THROWS_AS(gini({}, {}), EmptyInput);
  CHECK_THROWS_AS(gini({0, 0}, {1, 1}), AllZeroIncomes);
  CHECK_THROWS_AS(gini({-1, 2}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(gini({1, 2}, {0, 1}), std::invalid_argument);
}

TEST_CASE("sorted gini matches the pairwise definition") {
  fixtures::Gen g(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 300);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
      x[i] = g.chance(0.1) ? 0.0 : std::exp(g.uniform(0.0, 9.0));
      w[i] = g.uniform(0.1, 50.0);
    }
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) x[0] = 1.0;
    CHECK(std::abs(gini(x, w) - oracle::pairwise_gini(x, w)) < 1e-9);
  }
}

TEST_CASE("headcount counts strictly below the line") {
  const auto v = view_of({{30000, 30000, 2}, {40600, 40600, 1}, {50000, 50000, 1}});
  CHECK(poverty_headcount(v, R("406"), IncomeSide::Baseline, AgeGroup::All) == Catch::Approx(0.5));
  CHECK(poverty_headcount(v, R("299.99"), IncomeSide::Baseline, AgeGroup::All) == 0.0);
}

TEST_CASE("headcount by age group") {
  const auto v = view_of({{100, 50000, 1, 5}, {50000, 100, 1, 40}, {100, 100, 1, 70}, {90000, 90000, 3, 70}});
  CHECK(poverty_headcount(v, R("406"), IncomeSide::Baseline, AgeGroup::Children) == 1.0);
  CHECK(poverty_headcount(v, R("406"), IncomeSide::Reform, AgeGroup::Children) == 0.0);
  CHECK(poverty_headcount(v, R("406"), IncomeSide::Reform, AgeGroup::WorkingAge) == 1.0);
  CHECK(poverty_headcount(v, R("406"), IncomeSide::Baseline, AgeGroup::Elderly) == Catch::Approx(0.25));
  CHECK(in_group(17, AgeGroup::Children));
  CHECK(in_group(18, AgeGroup::WorkingAge));
  CHECK(in_group(64, AgeGroup::WorkingAge));
  CHECK(in_group(65, AgeGroup::Elderly));
  const auto adults = view_of({{100, 100, 1, 30}});
  CHECK_FALSE(poverty_headcount(adults, R("406"), IncomeSide::Baseline, AgeGroup::Children).has_value());
}

TEST_CASE("decile assignment follows cumulative weight") {
  std::vector<Entry> ten;
  for (int i = 10; i >= 1; --i) ten.push_back({i * 1000, i * 1000});
  const auto v10 = view_of(ten);
  const auto a10 = assign_deciles(v10);
  CHECK(a10.decile(9) == 1);   // income 10
  CHECK(a10.decile(0) == 10);  // income 100
  CHECK(a10.warnings.empty());

  std::vector<Entry> twenty;
  for (int i = 0; i < 20; ++i) twenty.push_back({(i * 7919) % 20 * 100 + 1, 0});
  const auto a20 = assign_deciles(view_of(twenty));
  for (double w : a20.weight) CHECK(w == Catch::Approx(2.0));

  std::vector<Entry> same(25, Entry{5000, 5000});
  const auto v = view_of(same);
  const auto a = assign_deciles(v);
  for (Eigen::Index i = 1; i < v.size(); ++i) CHECK(a.decile(i) >= a.decile(i - 1));
  for (double w : a.weight) CHECK(std::abs(w - 2.5) <= 1.0);
}

TEST_CASE("uniform gain makes everyone a winner") {
  std::vector<Entry> e;
  for (int i = 0; i < 30; ++i) e.push_back({1000 + 37 * i, 2000 + 37 * i, 1.0 + i % 3});
  const auto v = view_of(e);
  const auto r = winners_losers(v, assign_deciles(v));
  for (const auto& row : r.deciles) {
    CHECK(row.winners_pct == 100.0);
    CHECK_FALSE(row.mean_loss.has_value());
    CHECK(row.mean_gain == Catch::Approx(10.0));
  }
}

TEST_CASE("weighted winner and loser means within a decile") {
  // Ten persons of weight 4 fill deciles; decile 1 holds the lowest and is split 3:1.
  std::vector<Entry> e = {{100, 5100, 3}, {101, -1899, 1}};
  for (int i = 0; i < 9; ++i) e.push_back({100000 + i, 100000 + i, 4});
  const auto v = view_of(e);
  const auto a = assign_deciles(v);
  REQUIRE(a.decile(0) == 1);
  REQUIRE(a.decile(1) == 1);
  const auto r = winners_losers(v, a);
  CHECK(r.deciles[0].winners_pct == Catch::Approx(75.0));
  CHECK(r.deciles[0].losers_pct == Catch::Approx(25.0));
  CHECK(r.deciles[0].mean_gain == Catch::Approx(50.0));
  CHECK(r.deciles[0].mean_loss == Catch::Approx(20.0));
}

TEST_CASE("changes within a centavo count as unchanged") {
  const auto v = view_of({{1000, 1001}, {1000, 999}, {1000, 1002}, {1000, 998}});
  const auto r = winners_losers(v, assign_deciles(v));
  CHECK(r.all.unchanged_pct == Catch::Approx(50.0));
  CHECK(r.all.winners_pct == Catch::Approx(25.0));
  CHECK(r.all.losers_pct == Catch::Approx(25.0));
}

TEST_CASE("identity reform reports everyone unchanged") {
  const auto pop = synth_generate(fixtures::synth(120, 3));
  const auto base = baseline_disposable(pop, example_2017_policy());
  const auto v = make_view(pop, base);
  const auto r = winners_losers(v, assign_deciles(v));
  for (const auto& row : r.deciles) {
    CHECK(row.unchanged_pct == 100.0);
    CHECK_FALSE(row.mean_gain.has_value());
    CHECK_FALSE(row.mean_loss.has_value());
  }
}

TEST_CASE("view per-capita incomes come from the household") {
  const auto pop = fixtures::make_population({
      {.hh = "A", .age = 40, .market = "900"},
      {.hh = "A", .age = 10, .market = "300"},
      {.hh = "A", .age = 8},
  });
  auto policy = example_2017_policy();
  policy.pit = BracketSchedule({{R("0"), 0.0}});
  policy.ssc = BracketSchedule({{R("0"), 0.0}});
  const auto v = make_view(pop, baseline_disposable(pop, policy));
  CHECK((v.pc_baseline == 40000).all());
  CHECK(v.age(1) == 10);
}

TEST_CASE("mismatched assignment is rejected") {
  const auto v = view_of({{1, 1}, {2, 2}});
  DecileAssignment a;
  a.decile.resize(1);
  CHECK_THROWS_AS(winners_losers(v, a), InconsistentInputs);
}
