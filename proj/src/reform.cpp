#include "ubisim/reform.hpp"

#include "ubisim/error.hpp"

namespace ubisim {

Money ubi_amount(int age, const UbiSchedule& ubi) {
  if (age <= ubi.child_max_age) return ubi.child_amount;
  if (age >= ubi.elderly_min_age) return ubi.elderly_amount;
  return ubi.adult_amount;
}

namespace {

void check_rate(const RateParam& rate, const char* what) {
  if (!rate) return;
  if (!std::isfinite(*rate) || *rate < 0.0 || *rate >= 1.0)
    throw ConfigError(std::string(what) + " " + std::to_string(*rate) + " outside [0, 1)");
}

}  // namespace

void validate(const SchemeSpec& spec) {
  const auto& u = spec.ubi;
  if (u.child_amount < Money{} || u.adult_amount < Money{} || u.elderly_amount < Money{})
    throw ConfigError("UBI amounts must be non-negative");
  if (u.child_max_age < -1 || u.child_max_age >= u.elderly_min_age)
    throw ConfigError("UBI age bands must satisfy -1 <= child_max_age < elderly_min_age");
  if (spec.poverty_line <= Money{}) throw ConfigError("poverty line must be positive");
  if (const auto* flat = std::get_if<FlatTax>(&spec.tax)) {
    check_rate(flat->rate, "flat rate");
  } else if (const auto* two = std::get_if<TwoBracketTax>(&spec.tax)) {
    check_rate(two->lower_rate, "lower rate");
    check_rate(two->upper_rate, "upper rate");
    if (!two->lower_rate) throw ConfigError("two-bracket lower rate must be given; only the upper rate is solvable");
    if (two->threshold && *two->threshold <= Money{}) throw ConfigError("two-bracket threshold must be positive");
    if (!two->threshold && !(std::isfinite(two->median_multiple) && two->median_multiple > 0.0))
      throw ConfigError("two-bracket median multiple must be positive");
  }
}

bool has_unsolved_rate(const SchemeSpec& spec) {
  if (const auto* flat = std::get_if<FlatTax>(&spec.tax)) return !flat->rate;
  if (const auto* two = std::get_if<TwoBracketTax>(&spec.tax)) return !two->lower_rate || !two->upper_rate;
  return false;
}

SchemeSpec preset(std::string_view name) {
  SchemeSpec s;
  s.name = std::string(name);
  s.offset = {true, true};
  s.poverty_line = Money::reais(406);
  if (name == "scheme1") {
    s.ubi = {Money::reais(406), Money::reais(406), Money::reais(406)};
    s.tax = FlatTax{};
  } else if (name == "scheme2") {
    s.ubi = {Money::reais(203), Money::reais(406), Money::reais(812)};
    s.tax = FlatTax{};
  } else if (name == "scheme3") {
    s.ubi = {Money::reais(203), Money::reais(406), Money::reais(812)};
    s.tax = TwoBracketTax{0.20, std::nullopt, std::nullopt, 2.0};
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> preset_names() { return {"scheme1", "scheme2", "scheme3"}; }

Money offset_pension(Money pension, Money ubi, const OffsetRule& rule) {
  return rule.pensions_reduced_by_ubi ? max(pension - ubi, Money{}) : pension;
}

Money flat_tax(Money taxable, double rate) { return linear_tax(0.0, rate, taxable.cents()); }

Money two_bracket_tax(Money taxable, double lower_rate, Money threshold, double upper_rate) {
  const Money below = min(taxable, threshold);
  const Money above = max(taxable - threshold, Money{});
  return linear_tax(lower_rate * static_cast<double>(below.cents()), upper_rate, above.cents());
}

SchemeSpec resolve_threshold(SchemeSpec spec, const Population& population) {
  if (auto* two = std::get_if<TwoBracketTax>(&spec.tax); two && !two->threshold) {
    const Money median = median_per_capita_gross_income(population);
    two->threshold = round_half_up_centavos(static_cast<long double>(median.cents()) * two->median_multiple);
    if (*two->threshold <= Money{}) throw ConfigError("derived two-bracket threshold is zero (median gross income is 0)");
  }
  return spec;
}

PreTax pre_tax(const PersonRecord& p, const SchemeSpec& spec) {
  PreTax out;
  out.ubi = ubi_amount(p.age, spec.ubi);
  out.remaining_pension = offset_pension(p.pension_income, out.ubi, spec.offset);
  out.remaining_other = spec.offset.other_benefits_abolished ? Money{} : p.other_benefit_income;
  out.taxable = p.market_income + out.remaining_pension + out.remaining_other;
  if (spec.ubi_taxable) out.taxable += out.ubi;
  return out;
}

ReformOutcome apply_scheme(const Population& population, const BaselineResult& baseline, const SchemeSpec& spec) {
  if (has_unsolved_rate(spec)) throw UnsolvedRate("scheme '" + spec.name + "' has a rate marked to-solve");
  if (baseline.population_fingerprint != population.fingerprint())
    throw InconsistentInputs("baseline was computed on a different population");
  const auto* two = std::get_if<TwoBracketTax>(&spec.tax);
  if (two && !two->threshold) throw ConfigError("two-bracket threshold unresolved; call resolve_threshold first");

  ReformOutcome out;
  out.population_fingerprint = population.fingerprint();
  out.persons.reserve(population.person_count());
  auto& t = out.totals;
  std::size_t i = 0;
  for (const auto& h : population.households()) {
    for (const auto& p : h.members) {
      const PreTax pre = pre_tax(p, spec);
      PersonReform r{pre.ubi, pre.remaining_pension, pre.remaining_other, pre.taxable, Money{}, Money{}};
      if (const auto* flat = std::get_if<FlatTax>(&spec.tax)) {
        r.tax = flat_tax(r.taxable, *flat->rate);
      } else if (two) {
        r.tax = two_bracket_tax(r.taxable, *two->lower_rate, *two->threshold, *two->upper_rate);
      } else {
        r.tax = baseline.persons[i].pit + baseline.persons[i].ssc;
      }
      r.disposable = p.market_income + r.remaining_pension + r.remaining_other + r.ubi - r.tax;

      const Weight w = p.weight;
      t.ubi_gross_cost += WeightedTotal::of(w, r.ubi, kMonthsPerYear);
      t.remaining_pensions += WeightedTotal::of(w, r.remaining_pension, kMonthsPerYear);
      t.remaining_other += WeightedTotal::of(w, r.remaining_other, kMonthsPerYear);
      t.nonubi_income += WeightedTotal::of(w, p.market_income + r.remaining_pension + r.remaining_other, kMonthsPerYear);
      t.taxable_base += WeightedTotal::of(w, r.taxable, kMonthsPerYear);
      t.tax_revenue += WeightedTotal::of(w, r.tax, kMonthsPerYear);
      t.disposable += WeightedTotal::of(w, r.disposable, kMonthsPerYear);
      out.persons.push_back(r);
      ++i;
    }
  }
  return out;
}

}  // namespace ubisim
