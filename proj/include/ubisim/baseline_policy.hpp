#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ubisim/microdata.hpp"
#include "ubisim/money.hpp"

namespace ubisim {

struct Bracket {
  Money lower_bound;
  double marginal_rate = 0.0;

  friend bool operator==(const Bracket&, const Bracket&) = default;
};

// Progressive marginal-rate schedule with an optional cap on the base.
class BracketSchedule {
 public:
  BracketSchedule() : brackets_{Bracket{}} {}
  // Throws ConfigError unless bounds start at 0 and strictly increase,
  // rates lie in [0, 1) and the cap (if any) is positive.
  explicit BracketSchedule(std::vector<Bracket> brackets, std::optional<Money> cap = std::nullopt);

  const std::vector<Bracket>& brackets() const { return brackets_; }
  const std::optional<Money>& cap() const { return cap_; }
  double top_rate() const;

  friend bool operator==(const BracketSchedule&, const BracketSchedule&) = default;

 private:
  std::vector<Bracket> brackets_;
  std::optional<Money> cap_;
};

// Marginal-rate tax on min(base, cap), rounded half-up to centavos.
Money schedule_tax(const BracketSchedule& schedule, Money base);

// Which income components enter an assessment base.
struct IncomeBase {
  bool market = true;
  bool pension = false;
  bool other_benefits = false;

  Money of(const PersonRecord& p) const;
  friend bool operator==(const IncomeBase&, const IncomeBase&) = default;
};

enum class TaxSource { FromColumns, FromSchedules };

struct BaselinePolicy {
  std::string label;
  BracketSchedule pit;
  BracketSchedule ssc;
  IncomeBase pit_base{true, true, false};
  IncomeBase ssc_base{true, false, false};
  TaxSource tax_source = TaxSource::FromSchedules;

  friend bool operator==(const BaselinePolicy&, const BaselinePolicy&) = default;
};

// Illustrative 2017-style monthly schedules (income tax with exempt band
// and four marginal rates; employee contribution 8/9/11% capped). Not a
// legal encoding.
BaselinePolicy example_2017_policy();

struct PersonBaseline {
  Money pit;
  Money ssc;
  Money disposable;
};

// Annualized weighted totals.
struct BaselineTotals {
  WeightedTotal market;
  WeightedTotal pensions;
  WeightedTotal other_transfers;
  WeightedTotal pit;
  WeightedTotal ssc;
  WeightedTotal disposable;

  WeightedTotal transfers() const { return pensions + other_transfers; }
  WeightedTotal taxes() const { return pit + ssc; }
};

struct BaselineResult {
  std::vector<PersonBaseline> persons;  // flat population order
  BaselineTotals totals;
  std::uint64_t population_fingerprint = 0;
};

// Throws DataError(MissingBaselineTaxColumns) when FromColumns is selected
// and any person lacks baseline_pit / baseline_ssc.
BaselineResult baseline_disposable(const Population& population, const BaselinePolicy& policy);

}  // namespace ubisim
