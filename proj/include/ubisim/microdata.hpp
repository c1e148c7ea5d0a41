#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ubisim/error.hpp"
#include "ubisim/money.hpp"

namespace ubisim {

struct PersonRecord {
  std::string person_id;
  std::string household_id;
  int age = 0;
  Weight weight;
  Money market_income;
  Money pension_income;
  Money other_benefit_income;
  std::optional<Money> baseline_pit;
  std::optional<Money> baseline_ssc;

  Money gross_income() const { return market_income + pension_income + other_benefit_income; }

  friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

struct Household {
  std::string household_id;
  std::vector<PersonRecord> members;

  Weight weight() const { return members.front().weight; }

  friend bool operator==(const Household&, const Household&) = default;
};

struct Provenance {
  enum class Kind { Ingested, Synthetic };
  Kind kind = Kind::Ingested;
  std::uint64_t seed = 0;

  std::string str() const;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct IngestionSummary {
  std::size_t rows = 0;
  std::size_t households = 0;
  double total_weight = 0.0;
};

// Weighted survey microdata. Immutable after construction; persons are
// addressed by a flat index in household order.
class Population {
 public:
  // Validates all invariants; throws DataError.
  Population(std::vector<Household> households, Provenance provenance);

  std::span<const Household> households() const { return households_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t person_count() const { return person_count_; }
  std::int64_t total_weight_micros() const { return total_weight_micros_; }
  double total_weight() const { return static_cast<double>(total_weight_micros_) / Weight::kScale; }
  bool has_baseline_tax_columns() const { return has_tax_columns_; }
  IngestionSummary summary() const;

  // FNV-1a over the canonical CSV serialization.
  std::uint64_t fingerprint() const { return fingerprint_; }
  std::string fingerprint_hex() const;

  // Flat index of a household's first member.
  std::size_t offset(std::size_t household_index) const { return offsets_[household_index]; }

  template <class Fn>  // Fn(const Household&, std::size_t first_person_index)
  void for_each_household(Fn&& fn) const {
    for (std::size_t h = 0; h < households_.size(); ++h) fn(households_[h], offsets_[h]);
  }

  bool same_records(const Population& other) const { return households_ == other.households_; }

 private:
  std::vector<Household> households_;
  std::vector<std::size_t> offsets_;
  Provenance provenance_;
  std::size_t person_count_ = 0;
  std::int64_t total_weight_micros_ = 0;
  bool has_tax_columns_ = false;
  std::uint64_t fingerprint_ = 0;
};

struct IngestionOptions {
  char delimiter = ',';
};

// Parses the microdata CSV contract:
//   household_id, person_id, age, weight, market_income, pension_income,
//   other_benefit_income[, baseline_pit][, baseline_ssc]
// Column order is free; unknown columns are ignored.
Population load_population(std::istream& source, const IngestionOptions& options = {});
Population load_population_file(const std::string& path, const IngestionOptions& options = {});

// Canonical serialization; load_population(write_population(p)) has the
// same records as p.
void write_population(std::ostream& out, const Population& population);

// (Σ incomes) / n, rounded half-up to centavos.
Money per_capita(const Household& household, const std::function<Money(const PersonRecord&)>& income_of);
Money per_capita(std::span<const Money> member_incomes);

// Smallest value whose cumulative weight reaches half the total.
// Throws EmptyInput.
template <class Value>
Value weighted_median(std::vector<std::pair<Value, Weight>> values);

// Weighted median over individuals of the per-capita household gross
// income (market + pensions + other benefits).
Money median_per_capita_gross_income(const Population& population);

// --- synthetic populations -------------------------------------------------

struct AgeMixture {
  double children = 0.25;      // share of members aged 0..17
  double working_age = 0.62;   // 18..64
  double elderly = 0.13;       // 65..95
};

struct IncomeParams {
  // Market income of employed adults: lognormal(log_mean, log_sd), with a
  // Pareto(pareto_alpha) multiplier applied to the top `pareto_share`.
  double employment_rate = 0.62;
  double elderly_employment_rate = 0.15;
  double log_mean = 7.05;
  double log_sd = 0.85;
  double pareto_share = 0.04;
  double pareto_alpha = 1.8;
  // Pension probability and amount (lognormal, floored at the minimum).
  double elderly_pension_rate = 0.86;
  double working_pension_rate = 0.05;
  double pension_log_mean = 7.25;
  double pension_log_sd = 0.65;
  double minimum_pension = 937.00;
  // Means-tested family benefit per child when household per-capita market
  // income is below the eligibility line; unemployment benefit for
  // non-employed working-age adults.
  double family_benefit_per_child = 45.00;
  double family_benefit_base = 90.00;
  double family_benefit_line = 250.00;
  double family_benefit_takeup = 0.7;
  double unemployment_benefit_rate = 0.06;
  double unemployment_benefit_amount = 1200.00;
};

struct SynthSpec {
  std::size_t n_households = 1000;
  std::uint64_t seed = 1;
  AgeMixture ages;
  // P(size = i + 1).
  std::vector<double> household_size = {0.15, 0.25, 0.25, 0.20, 0.10, 0.05};
  // Elderly heads live with a partner of the same band with this
  // probability; remaining members follow `ages`.
  double elderly_partner_rate = 0.6;
  IncomeParams income;
  double weight_min = 1.0;
  double weight_max = 12.0;
};

// Deterministic for a given spec on every platform. Throws ConfigError
// (InvalidSpec) for non-positive sizes or degenerate distributions.
Population synth_generate(const SynthSpec& spec);

template <class Value>
Value weighted_median(std::vector<std::pair<Value, Weight>> values) {
  if (values.empty()) throw EmptyInput("weighted_median: empty input");
  std::sort(values.begin(), values.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  int128_t total = 0;
  for (const auto& v : values) total += v.second.micros();
  int128_t cumulative = 0;
  for (const auto& v : values) {
    cumulative += v.second.micros();
    if (2 * cumulative >= total) return v.first;
  }
  return values.back().first;
}

}  // namespace ubisim
