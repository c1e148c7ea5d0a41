#include "ubisim/baseline_policy.hpp"

#include <algorithm>
#include <cmath>

#include "ubisim/error.hpp"

namespace ubisim {

BracketSchedule::BracketSchedule(std::vector<Bracket> brackets, std::optional<Money> cap)
    : brackets_(std::move(brackets)), cap_(cap) {
  if (brackets_.empty()) throw ConfigError("bracket schedule has no brackets");
  if (brackets_.front().lower_bound != Money{}) throw ConfigError("first bracket must start at 0");
  for (std::size_t i = 0; i < brackets_.size(); ++i) {
    const double r = brackets_[i].marginal_rate;
    if (!std::isfinite(r) || r < 0.0 || r >= 1.0)
      throw ConfigError("bracket rate " + std::to_string(r) + " outside [0, 1)");
    if (i > 0 && brackets_[i].lower_bound <= brackets_[i - 1].lower_bound)
      throw ConfigError("bracket lower bounds must be strictly increasing");
  }
  if (cap_ && *cap_ <= Money{}) throw ConfigError("schedule cap must be positive");
}

double BracketSchedule::top_rate() const {
  double top = 0.0;
  for (const auto& b : brackets_) top = std::max(top, b.marginal_rate);
  return top;
}

Money schedule_tax(const BracketSchedule& schedule, Money base) {
  if (schedule.cap()) base = min(base, *schedule.cap());
  if (base <= Money{}) return Money{};
  const auto& brackets = schedule.brackets();
  long double tax = 0.0L;
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    const Money lower = brackets[i].lower_bound;
    if (base <= lower) break;
    const Money upper = i + 1 < brackets.size() ? min(base, brackets[i + 1].lower_bound) : base;
    tax += static_cast<long double>(brackets[i].marginal_rate) * static_cast<long double>((upper - lower).cents());
  }
  return round_half_up_centavos(tax);
}

Money IncomeBase::of(const PersonRecord& p) const {
  Money base;
  if (market) base += p.market_income;
  if (pension) base += p.pension_income;
  if (other_benefits) base += p.other_benefit_income;
  return base;
}

BaselinePolicy example_2017_policy() {
  BaselinePolicy policy;
  policy.label = "example-2017 (illustrative, non-authoritative)";
  policy.pit = BracketSchedule({{Money::parse("0"), 0.0},
                                {Money::parse("1903.98"), 0.075},
                                {Money::parse("2826.65"), 0.15},
                                {Money::parse("3751.05"), 0.225},
                                {Money::parse("4664.68"), 0.275}});
  policy.ssc = BracketSchedule({{Money::parse("0"), 0.08}, {Money::parse("1659.38"), 0.09}, {Money::parse("2765.66"), 0.11}},
                               Money::parse("5531.31"));
  policy.pit_base = {true, true, false};
  policy.ssc_base = {true, false, false};
  policy.tax_source = TaxSource::FromSchedules;
  return policy;
}

BaselineResult baseline_disposable(const Population& population, const BaselinePolicy& policy) {
  if (policy.tax_source == TaxSource::FromColumns && !population.has_baseline_tax_columns())
    throw DataError(DataErrorKind::MissingBaselineTaxColumns, 0,
                    "tax_source FromColumns requires baseline_pit and baseline_ssc on every person");
  BaselineResult result;
  result.population_fingerprint = population.fingerprint();
  result.persons.reserve(population.person_count());
  auto& t = result.totals;
  for (const auto& h : population.households()) {
    for (const auto& p : h.members) {
      PersonBaseline b;
      if (policy.tax_source == TaxSource::FromColumns) {
        b.pit = *p.baseline_pit;
        b.ssc = *p.baseline_ssc;
      } else {
        b.pit = schedule_tax(policy.pit, policy.pit_base.of(p));
        b.ssc = schedule_tax(policy.ssc, policy.ssc_base.of(p));
      }
      b.disposable = p.market_income + p.pension_income + p.other_benefit_income - b.pit - b.ssc;
      t.market += WeightedTotal::of(p.weight, p.market_income, kMonthsPerYear);
      t.pensions += WeightedTotal::of(p.weight, p.pension_income, kMonthsPerYear);
      t.other_transfers += WeightedTotal::of(p.weight, p.other_benefit_income, kMonthsPerYear);
      t.pit += WeightedTotal::of(p.weight, b.pit, kMonthsPerYear);
      t.ssc += WeightedTotal::of(p.weight, b.ssc, kMonthsPerYear);
      t.disposable += WeightedTotal::of(p.weight, b.disposable, kMonthsPerYear);
      result.persons.push_back(b);
    }
  }
  return result;
}

}  // namespace ubisim
