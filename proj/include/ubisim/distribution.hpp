#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ubisim/baseline_policy.hpp"
#include "ubisim/error.hpp"
#include "ubisim/microdata.hpp"
#include "ubisim/money.hpp"
#include "ubisim/reform.hpp"

namespace ubisim {

using MoneyArray = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;  // centavos
using WeightArray = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>; // micro-weights

// One entry per person: weight, age and household per-capita disposable
// income before and after a reform. `order_key` ranks persons by
// (household_id, person_id) for deterministic tie-breaking.
struct IndividualIncomeView {
  Eigen::ArrayXd weight;
  WeightArray weight_micros;
  Eigen::ArrayXi age;
  MoneyArray pc_baseline;
  MoneyArray pc_reform;
  Eigen::ArrayXi order_key;

  Eigen::Index size() const { return weight.size(); }
};

// Without an outcome, pc_reform mirrors pc_baseline.
IndividualIncomeView make_view(const Population& population, const BaselineResult& baseline,
                               const ReformOutcome* outcome = nullptr);

// Gini by the sorted cumulative-weight form
//   G = Σ_i w_i (x_i C_{i-1} - S_{i-1}) / (W S)
// where C and S are running sums of weights and weighted incomes.
// Throws EmptyInput, std::invalid_argument on negative incomes or
// non-positive weights, AllZeroIncomes when the mean is zero.
template <class IncomeDerived, class WeightDerived>
double weighted_gini(const Eigen::ArrayBase<IncomeDerived>& income, const Eigen::ArrayBase<WeightDerived>& weight) {
  const Eigen::Index n = income.size();
  if (n == 0) throw EmptyInput("weighted_gini: empty input");
  if (weight.size() != n) throw std::invalid_argument("weighted_gini: size mismatch");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return income(a) < income(b); });
  long double cum_w = 0.0L;
  long double cum_wx = 0.0L;
  long double acc = 0.0L;
  for (Eigen::Index i : order) {
    const long double x = static_cast<long double>(income(i));
    const long double w = static_cast<long double>(weight(i));
    if (x < 0.0L) throw std::invalid_argument("weighted_gini: negative income");
    if (!(w > 0.0L)) throw std::invalid_argument("weighted_gini: weights must be positive");
    acc += w * (x * cum_w - cum_wx);
    cum_w += w;
    cum_wx += w * x;
  }
  if (cum_wx <= 0.0L) throw AllZeroIncomes("weighted_gini: all incomes are zero");
  return static_cast<double>(acc / (cum_w * cum_wx));
}

enum class IncomeSide { Baseline, Reform };
enum class AgeGroup { All, Children, WorkingAge, Elderly };
const char* to_string(AgeGroup group);

bool in_group(int age, AgeGroup group);

// Weighted share of the group whose per-capita income is strictly below
// `line`; nullopt when the group is empty.
std::optional<double> poverty_headcount(const IndividualIncomeView& view, Money line, IncomeSide side, AgeGroup group);

struct DecileAssignment {
  Eigen::ArrayXi decile;                // 1..10 per person
  std::array<double, 10> weight{};      // total weight per decile
  std::vector<std::string> warnings;    // deciles off Σw/10 by more than 0.5%
};

// Sort by (pc_baseline, household_id, person_id); a person joins decile d
// when the midpoint of its cumulative weight lies in ((d-1)W/10, dW/10].
DecileAssignment assign_deciles(const IndividualIncomeView& view);

// Winner/loser cells for one decile (or all). Means are per-capita
// monthly reais; absent when the side has no weight.
struct WinnerLoserRow {
  std::string label;
  double weight = 0.0;
  // Exact partition of the row's weight.
  std::int64_t winners_micros = 0;
  std::int64_t losers_micros = 0;
  std::int64_t unchanged_micros = 0;
  double winners_pct = 0.0;
  double losers_pct = 0.0;
  double unchanged_pct = 0.0;
  std::optional<double> winners_baseline;
  std::optional<double> mean_gain;
  std::optional<double> losers_baseline;
  std::optional<double> mean_loss;
};

struct WinnerLoserReport {
  std::array<WinnerLoserRow, 10> deciles;
  WinnerLoserRow all;
};

// Per-capita change threshold for counting a winner or loser.
inline constexpr Money kWinnerEpsilon = Money::centavos(1);

WinnerLoserReport winners_losers(const IndividualIncomeView& view, const DecileAssignment& assignment);

}  // namespace ubisim
