#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ubisim/baseline_policy.hpp"
#include "ubisim/error.hpp"
#include "ubisim/microdata.hpp"
#include "ubisim/money.hpp"
#include "ubisim/reform.hpp"

namespace ubisim {

struct TwoBracketBases {
  WeightedTotal base_below;
  WeightedTotal base_above;
  double lower_rate = 0.0;
};

// Annual aggregates that determine the budget-neutral rate.
struct NeutralityProblem {
  WeightedTotal baseline_disposable_total;
  WeightedTotal nonubi_income_total;  // market + remaining transfers
  WeightedTotal ubi_gross_cost;
  WeightedTotal taxable_base_total;
  std::optional<TwoBracketBases> two_bracket;
};

// nonubi_income_total + ubi_gross_cost - baseline_disposable_total. A
// negative value means the reform is self-financing at rate 0.
WeightedTotal required_revenue(const NeutralityProblem& problem);

// Unrounded revenue at `rate` (flat, or upper with the problem's lower rate).
WeightedTotal exact_revenue(const NeutralityProblem& problem, double rate);

enum class SolveMethod { Given, ClosedForm, Bisection };
const char* to_string(SolveMethod method);

struct SolvedRates {
  double rate = 0.0;  // flat rate, or upper rate of a two-bracket design
  std::optional<double> lower_rate;
  WeightedTotal required_revenue;
  SolveMethod method = SolveMethod::ClosedForm;
  // Rate straight from the closed form, before moving it onto the
  // rounding staircase.
  double closed_form_rate = 0.0;
  // Σ reform disposable - Σ baseline disposable with unrounded per-person
  // taxes at closed_form_rate. This is what `tolerance` bounds.
  WeightedTotal exact_residual;
  // The same after full re-simulation with centavo-rounded taxes. Persons
  // with identical taxable income round together, so this can exceed the
  // tolerance by up to half the largest lump of the staircase.
  WeightedTotal residual;
  WeightedTotal tolerance;
  // Requirement already met at rate 0 (or by the lower bracket); `surplus`
  // is the revenue in excess.
  bool has_surplus = false;
  WeightedTotal surplus;
  int iterations = 0;

  bool within_tolerance() const { return abs(exact_residual) <= tolerance; }
};

// max(R$1.00/year, 1e-10 * |baseline total|).
WeightedTotal neutrality_tolerance(WeightedTotal baseline_disposable_total);

// rate = required / taxable base. Throws InfeasibleNeutrality when the
// rate would reach 100% or the base is empty with a positive requirement.
SolvedRates solve_flat_rate(const NeutralityProblem& problem);

// upper = (required - lower * base_below) / base_above. Throws
// InfeasibleNeutrality (also for an empty upper bracket with an unmet
// requirement) and ConfigError when the problem has no two-bracket part.
SolvedRates solve_upper_rate(const NeutralityProblem& problem);

template <class Value>
struct BisectionResult {
  double rate = 0.0;
  Value revenue{};
  int iterations = 0;
  bool within_tolerance = false;
};

// Oracle for the closed forms: bisects a non-decreasing rate -> revenue
// map on [0, 1) until the bracket collapses or `max_iterations` is
// reached, then returns whichever end is closer to the target. Throws
// NotBracketed when the target lies outside [revenue(0), revenue(1-)].
template <class RevenueFn, class Value>
BisectionResult<Value> bisection_check(RevenueFn&& revenue, Value target, Value tolerance, int max_iterations = 200) {
  auto gap = [](Value a, Value b) { return a < b ? b - a : a - b; };
  double lo = 0.0;
  double hi = std::nextafter(1.0, 0.0);
  Value r_lo = revenue(lo);
  if (!(r_lo < target)) {
    if (gap(r_lo, target) <= tolerance) return {lo, r_lo, 0, true};
    throw NotBracketed("bisection: target below revenue at rate 0");
  }
  Value r_hi = revenue(hi);
  if (r_hi < target) throw NotBracketed("bisection: target above revenue at the maximum rate");
  int iterations = 0;
  while (iterations < max_iterations) {
    const double mid = lo + (hi - lo) / 2.0;
    if (!(mid > lo && mid < hi)) break;
    ++iterations;
    const Value r = revenue(mid);
    if (r < target) {
      lo = mid;
      r_lo = r;
    } else {
      hi = mid;
      r_hi = r;
    }
  }
  const bool take_lo = gap(r_lo, target) < gap(r_hi, target);
  const double rate = take_lo ? lo : hi;
  const Value best = take_lo ? r_lo : r_hi;
  return {rate, best, iterations, gap(best, target) <= tolerance};
}

// Aggregates of `spec` on the population; the TwoBracket threshold must be
// resolved.
NeutralityProblem build_problem(const Population& population, const BaselineResult& baseline, const SchemeSpec& spec);

// Annual tax revenue from a full apply_scheme re-simulation with the
// solvable rate (flat, or two-bracket upper) set to `rate`.
WeightedTotal simulated_revenue(const Population& population, const BaselineResult& baseline, SchemeSpec spec,
                                double rate);

struct SolvedScheme {
  SchemeSpec spec;  // threshold resolved, all rates concrete
  SolvedRates rates;
  ReformOutcome outcome;
};

// Resolves the threshold, solves the open rate in closed form, then moves
// it along the centavo-rounding staircase to the nearest point of
// minimal |residual|, and re-simulates.
SolvedScheme solve_scheme(const Population& population, const BaselineResult& baseline, SchemeSpec spec);

}  // namespace ubisim
