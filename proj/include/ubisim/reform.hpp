#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ubisim/baseline_policy.hpp"
#include "ubisim/microdata.hpp"
#include "ubisim/money.hpp"

namespace ubisim {

struct UbiSchedule {
  Money child_amount;
  Money adult_amount;
  Money elderly_amount;
  int child_max_age = 17;
  int elderly_min_age = 65;

  friend bool operator==(const UbiSchedule&, const UbiSchedule&) = default;
};

Money ubi_amount(int age, const UbiSchedule& ubi);

// A rate that is either given or left for the neutrality solver.
using RateParam = std::optional<double>;

struct FlatTax {
  RateParam rate;
  friend bool operator==(const FlatTax&, const FlatTax&) = default;
};

// Reduced rate up to `threshold`, upper rate above. With no explicit
// threshold it defaults to `median_multiple` times the weighted median
// per-capita household gross income of the population.
struct TwoBracketTax {
  RateParam lower_rate;
  std::optional<Money> threshold;
  RateParam upper_rate;
  double median_multiple = 2.0;
  friend bool operator==(const TwoBracketTax&, const TwoBracketTax&) = default;
};

// Keeps each person's baseline income tax and contribution.
struct KeepBaselineTax {
  friend bool operator==(const KeepBaselineTax&, const KeepBaselineTax&) = default;
};

using TaxDesign = std::variant<FlatTax, TwoBracketTax, KeepBaselineTax>;

struct OffsetRule {
  bool pensions_reduced_by_ubi = true;
  bool other_benefits_abolished = true;
  friend bool operator==(const OffsetRule&, const OffsetRule&) = default;
};

struct SchemeSpec {
  std::string name;
  UbiSchedule ubi;
  TaxDesign tax;
  OffsetRule offset;
  bool ubi_taxable = false;
  Money poverty_line = Money::reais(406);

  friend bool operator==(const SchemeSpec&, const SchemeSpec&) = default;
};

// Throws ConfigError on negative amounts, rates outside [0,1), a
// non-positive threshold, or an age band that does not partition 0..inf.
void validate(const SchemeSpec& spec);

bool has_unsolved_rate(const SchemeSpec& spec);

// Built-in presets "scheme1", "scheme2", "scheme3"; throws ConfigError.
SchemeSpec preset(std::string_view name);
std::vector<std::string> preset_names();

Money offset_pension(Money pension, Money ubi, const OffsetRule& rule);

// round_half_up(fixed + rate * slope). Every reform tax goes through this
// so the neutrality solver sees exactly the amounts apply_scheme produces.
inline Money linear_tax(double fixed_centavos, double rate, std::int64_t slope_centavos) {
  return Money::centavos(static_cast<std::int64_t>(
      std::floor(fixed_centavos + rate * static_cast<double>(slope_centavos) + 0.5)));
}

Money flat_tax(Money taxable, double rate);
Money two_bracket_tax(Money taxable, double lower_rate, Money threshold, double upper_rate);

struct PersonReform {
  Money ubi;
  Money remaining_pension;
  Money remaining_other;
  Money taxable;
  Money tax;
  Money disposable;
};

// Annualized weighted totals.
struct ReformTotals {
  WeightedTotal ubi_gross_cost;
  WeightedTotal remaining_pensions;
  WeightedTotal remaining_other;
  WeightedTotal nonubi_income;  // market + remaining transfers
  WeightedTotal taxable_base;
  WeightedTotal tax_revenue;
  WeightedTotal disposable;

  WeightedTotal remaining_transfers() const { return remaining_pensions + remaining_other; }
};

struct ReformOutcome {
  std::vector<PersonReform> persons;  // flat population order
  ReformTotals totals;
  std::uint64_t population_fingerprint = 0;
};

// Returns spec with a concrete TwoBracket threshold (population default
// applied when none is configured).
SchemeSpec resolve_threshold(SchemeSpec spec, const Population& population);

// Per-person pre-tax quantities of a scheme; independent of the rates.
struct PreTax {
  Money ubi;
  Money remaining_pension;
  Money remaining_other;
  Money taxable;
};
PreTax pre_tax(const PersonRecord& person, const SchemeSpec& spec);

// Throws UnsolvedRate when any rate is still marked to-solve, ConfigError
// when a TwoBracket threshold is unresolved.
ReformOutcome apply_scheme(const Population& population, const BaselineResult& baseline, const SchemeSpec& spec);

}  // namespace ubisim
