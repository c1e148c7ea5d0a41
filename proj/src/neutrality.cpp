#include "ubisim/neutrality.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

namespace ubisim {

namespace {

long double ratio(WeightedTotal num, WeightedTotal den) {
  return static_cast<long double>(num.units()) / static_cast<long double>(den.units());
}

WeightedTotal scaled(WeightedTotal t, double rate) {
  return WeightedTotal::raw(static_cast<int128_t>(static_cast<long double>(t.units()) * rate));
}

// One person's reform tax as a function of the open rate:
// round_half_up(fixed + rate * slope), counted `step` times in the total.
struct TaxLine {
  double fixed;
  std::int64_t slope;
  int128_t step;
};

int128_t revenue_at(const std::vector<TaxLine>& lines, double rate) {
  int128_t total = 0;
  for (const auto& l : lines) total += l.step * linear_tax(l.fixed, rate, l.slope).cents();
  return total;
}

// Walks the jump points of the revenue staircase from `start` toward
// `target` and returns a rate adjacent to the crossing jump on the side
// with the smaller |target - revenue|.
double polish_on_staircase(const std::vector<TaxLine>& lines, int128_t target, double start, int& steps) {
  int128_t current = revenue_at(lines, start);
  int128_t diff = target - current;
  if (diff == 0) return start;
  const bool up = diff > 0;

  struct Event {
    double rate;
    std::size_t line;
  };
  auto later = [up](const Event& a, const Event& b) { return up ? a.rate > b.rate : a.rate < b.rate; };
  std::priority_queue<Event, std::vector<Event>, decltype(later)> events(later);
  std::vector<std::int64_t> level(lines.size());

  auto next_jump = [&](std::size_t i) -> std::optional<double> {
    const auto& l = lines[i];
    const double edge = up ? static_cast<double>(level[i]) + 0.5 : static_cast<double>(level[i]) - 0.5;
    const double rate = (edge - l.fixed) / static_cast<double>(l.slope);
    if (up ? rate >= 1.0 : rate < 0.0) return std::nullopt;
    return rate;
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].slope <= 0 || lines[i].step == 0) continue;
    level[i] = linear_tax(lines[i].fixed, start, lines[i].slope).cents();
    if (auto r = next_jump(i)) events.push({*r, i});
  }

  double previous = start;
  while (!events.empty()) {
    const double jump = events.top().rate;
    const int128_t before = current;
    while (!events.empty() && events.top().rate == jump) {
      const std::size_t i = events.top().line;
      events.pop();
      current += up ? lines[i].step : -lines[i].step;
      level[i] += up ? 1 : -1;
      if (auto r = next_jump(i)) events.push({*r, i});
    }
    ++steps;
    const int128_t after_diff = target - current;
    if (up ? after_diff > 0 : after_diff < 0) {
      diff = after_diff;
      previous = jump;
      continue;
    }
    const int128_t before_diff = target - before;
    const bool take_after = (after_diff < 0 ? -after_diff : after_diff) <= (before_diff < 0 ? -before_diff : before_diff);
    const double neighbour = take_after ? (events.empty() ? (up ? 1.0 : 0.0) : events.top().rate) : previous;
    const double room = std::abs(neighbour - jump) / 2.0;
    const double nudge = std::min(room, 1e-13 * std::max(std::abs(jump), 1e-300));
    const double direction = (take_after == up) ? 1.0 : -1.0;
    double rate = jump + direction * nudge;
    if (revenue_at(lines, rate) != (take_after ? current : before)) rate = jump + direction * room;
    return rate;
  }
  return previous;
}

std::vector<TaxLine> tax_lines(const Population& population, const SchemeSpec& spec) {
  std::vector<TaxLine> lines;
  lines.reserve(population.person_count());
  const auto* two = std::get_if<TwoBracketTax>(&spec.tax);
  for (const auto& h : population.households()) {
    for (const auto& p : h.members) {
      const PreTax pre = pre_tax(p, spec);
      const int128_t step = static_cast<int128_t>(p.weight.micros()) * kMonthsPerYear;
      if (two) {
        const Money below = min(pre.taxable, *two->threshold);
        const Money above = max(pre.taxable - *two->threshold, Money{});
        lines.push_back({*two->lower_rate * static_cast<double>(below.cents()), above.cents(), step});
      } else {
        lines.push_back({0.0, pre.taxable.cents(), step});
      }
    }
  }
  return lines;
}

SchemeSpec with_rate(SchemeSpec spec, double rate) {
  if (auto* flat = std::get_if<FlatTax>(&spec.tax)) flat->rate = rate;
  if (auto* two = std::get_if<TwoBracketTax>(&spec.tax)) two->upper_rate = rate;
  return spec;
}

}  // namespace

WeightedTotal required_revenue(const NeutralityProblem& p) {
  return p.nonubi_income_total + p.ubi_gross_cost - p.baseline_disposable_total;
}

WeightedTotal exact_revenue(const NeutralityProblem& p, double rate) {
  if (p.two_bracket) return scaled(p.two_bracket->base_below, p.two_bracket->lower_rate) + scaled(p.two_bracket->base_above, rate);
  return scaled(p.taxable_base_total, rate);
}

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::Given: return "given";
    case SolveMethod::ClosedForm: return "closed_form";
    case SolveMethod::Bisection: return "bisection";
  }
  return "unknown";
}

WeightedTotal neutrality_tolerance(WeightedTotal baseline_disposable_total) {
  const WeightedTotal one_real = WeightedTotal::money(Money::reais(1));
  const WeightedTotal relative = scaled(abs(baseline_disposable_total), 1e-10);
  return std::max(one_real, relative);
}

SolvedRates solve_flat_rate(const NeutralityProblem& problem) {
  SolvedRates out;
  out.method = SolveMethod::ClosedForm;
  out.required_revenue = required_revenue(problem);
  out.tolerance = neutrality_tolerance(problem.baseline_disposable_total);
  const WeightedTotal required = out.required_revenue;
  const WeightedTotal base = problem.taxable_base_total;
  if (required <= WeightedTotal{}) {
    out.rate = 0.0;
    out.has_surplus = required < WeightedTotal{};
    out.surplus = -required;
    return out;
  }
  if (base <= WeightedTotal{})
    throw InfeasibleNeutrality("ZeroBase: positive revenue requirement with an empty taxable base",
                               std::numeric_limits<double>::infinity(), required.to_reais());
  const long double rate = ratio(required, base);
  if (rate >= 1.0L)
    throw InfeasibleNeutrality("InfeasibleNeutrality: flat rate of " + std::to_string(static_cast<double>(rate * 100)) +
                                   "% required",
                               static_cast<double>(rate), (required - base).to_reais());
  out.rate = static_cast<double>(rate);
  return out;
}

SolvedRates solve_upper_rate(const NeutralityProblem& problem) {
  if (!problem.two_bracket) throw ConfigError("solve_upper_rate: problem has no two-bracket bases");
  const auto& tb = *problem.two_bracket;
  SolvedRates out;
  out.method = SolveMethod::ClosedForm;
  out.lower_rate = tb.lower_rate;
  out.required_revenue = required_revenue(problem);
  out.tolerance = neutrality_tolerance(problem.baseline_disposable_total);
  const WeightedTotal remaining = out.required_revenue - scaled(tb.base_below, tb.lower_rate);
  if (remaining <= WeightedTotal{}) {
    out.rate = 0.0;
    out.has_surplus = remaining < WeightedTotal{};
    out.surplus = -remaining;
    return out;
  }
  if (tb.base_above <= WeightedTotal{})
    throw InfeasibleNeutrality("EmptyUpperBracket: no income above the threshold to meet the requirement",
                               std::numeric_limits<double>::infinity(), remaining.to_reais());
  const long double rate = ratio(remaining, tb.base_above);
  if (rate >= 1.0L)
    throw InfeasibleNeutrality("InfeasibleNeutrality: upper rate of " + std::to_string(static_cast<double>(rate * 100)) +
                                   "% required",
                               static_cast<double>(rate), (remaining - tb.base_above).to_reais());
  out.rate = static_cast<double>(rate);
  return out;
}

NeutralityProblem build_problem(const Population& population, const BaselineResult& baseline, const SchemeSpec& spec) {
  NeutralityProblem problem;
  problem.baseline_disposable_total = baseline.totals.disposable;
  const auto* two = std::get_if<TwoBracketTax>(&spec.tax);
  if (two && !two->threshold) throw ConfigError("build_problem: two-bracket threshold unresolved");
  TwoBracketBases bases;
  for (const auto& h : population.households()) {
    for (const auto& p : h.members) {
      const PreTax pre = pre_tax(p, spec);
      problem.nonubi_income_total +=
          WeightedTotal::of(p.weight, p.market_income + pre.remaining_pension + pre.remaining_other, kMonthsPerYear);
      problem.ubi_gross_cost += WeightedTotal::of(p.weight, pre.ubi, kMonthsPerYear);
      problem.taxable_base_total += WeightedTotal::of(p.weight, pre.taxable, kMonthsPerYear);
      if (two) {
        bases.base_below += WeightedTotal::of(p.weight, min(pre.taxable, *two->threshold), kMonthsPerYear);
        bases.base_above += WeightedTotal::of(p.weight, max(pre.taxable - *two->threshold, Money{}), kMonthsPerYear);
      }
    }
  }
  if (two) {
    bases.lower_rate = two->lower_rate.value_or(0.0);
    problem.two_bracket = bases;
  }
  return problem;
}

WeightedTotal simulated_revenue(const Population& population, const BaselineResult& baseline, SchemeSpec spec,
                                double rate) {
  return apply_scheme(population, baseline, with_rate(std::move(spec), rate)).totals.tax_revenue;
}

SolvedScheme solve_scheme(const Population& population, const BaselineResult& baseline, SchemeSpec spec) {
  validate(spec);
  spec = resolve_threshold(std::move(spec), population);
  SolvedRates rates;
  if (has_unsolved_rate(spec)) {
    const NeutralityProblem problem = build_problem(population, baseline, spec);
    rates = std::holds_alternative<FlatTax>(spec.tax) ? solve_flat_rate(problem) : solve_upper_rate(problem);
    rates.closed_form_rate = rates.rate;
    rates.exact_residual = rates.required_revenue - exact_revenue(problem, rates.rate);
    if (rates.rate > 0.0) {
      const auto lines = tax_lines(population, spec);
      rates.rate = polish_on_staircase(lines, rates.required_revenue.units(), rates.rate, rates.iterations);
    }
    spec = with_rate(std::move(spec), rates.rate);
  } else {
    rates.method = SolveMethod::Given;
    rates.tolerance = neutrality_tolerance(baseline.totals.disposable);
    if (const auto* flat = std::get_if<FlatTax>(&spec.tax)) rates.rate = *flat->rate;
    if (const auto* two = std::get_if<TwoBracketTax>(&spec.tax)) {
      rates.rate = *two->upper_rate;
      rates.lower_rate = two->lower_rate;
    }
    const NeutralityProblem problem = build_problem(population, baseline, spec);
    rates.required_revenue = required_revenue(problem);
    rates.closed_form_rate = rates.rate;
    if (!std::holds_alternative<KeepBaselineTax>(spec.tax))
      rates.exact_residual = rates.required_revenue - exact_revenue(problem, rates.rate);
  }
  ReformOutcome outcome = apply_scheme(population, baseline, spec);
  rates.residual = outcome.totals.disposable - baseline.totals.disposable;
  if (std::holds_alternative<KeepBaselineTax>(spec.tax)) rates.exact_residual = rates.residual;
  return {std::move(spec), rates, std::move(outcome)};
}

}  // namespace ubisim
