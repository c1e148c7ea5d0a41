#include "ubisim/microdata.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ubisim/csv.hpp"
#include "ubisim/error.hpp"

namespace ubisim {

namespace {

constexpr std::array<const char*, 7> kRequiredColumns = {
    "household_id", "person_id", "age", "weight", "market_income", "pension_income", "other_benefit_income"};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void check_person(const PersonRecord& p, std::size_t row) {
  if (p.person_id.empty()) throw DataError(DataErrorKind::MalformedRow, row, "empty person_id");
  if (p.household_id.empty()) throw DataError(DataErrorKind::MalformedRow, row, "empty household_id");
  if (p.age < 0) throw DataError(DataErrorKind::InvalidNumber, row, "negative age");
  if (p.weight.micros() <= 0)
    throw DataError(DataErrorKind::NonPositiveWeight, row, "weight " + p.weight.str() + " is not positive");
  auto non_negative = [&](Money m, const char* column) {
    if (m < Money{}) throw DataError(DataErrorKind::NegativeIncome, row, std::string(column) + " = " + m.str());
  };
  non_negative(p.market_income, "market_income");
  non_negative(p.pension_income, "pension_income");
  non_negative(p.other_benefit_income, "other_benefit_income");
  if (p.baseline_pit) non_negative(*p.baseline_pit, "baseline_pit");
  if (p.baseline_ssc) non_negative(*p.baseline_ssc, "baseline_ssc");
}

}  // namespace

std::string Provenance::str() const {
  return kind == Kind::Ingested ? std::string("ingested") : "synthetic(" + std::to_string(seed) + ")";
}

Population::Population(std::vector<Household> households, Provenance provenance)
    : households_(std::move(households)), provenance_(provenance) {
  if (households_.empty()) throw DataError(DataErrorKind::EmptyPopulation, 0, "population has no households");
  std::unordered_set<std::string> person_ids;
  has_tax_columns_ = true;
  offsets_.reserve(households_.size());
  for (const auto& h : households_) {
    if (h.members.empty())
      throw DataError(DataErrorKind::MalformedRow, 0, "household " + h.household_id + " has no members");
    offsets_.push_back(person_count_);
    for (const auto& p : h.members) {
      check_person(p, 0);
      if (p.household_id != h.household_id)
        throw DataError(DataErrorKind::MalformedRow, 0, "person " + p.person_id + " not in household " + h.household_id);
      if (p.weight != h.weight())
        throw DataError(DataErrorKind::UnequalWeightsWithinHousehold, 0, "household " + h.household_id);
      if (!person_ids.insert(p.person_id).second)
        throw DataError(DataErrorKind::DuplicatePersonId, 0, "person_id " + p.person_id);
      has_tax_columns_ = has_tax_columns_ && p.baseline_pit && p.baseline_ssc;
      total_weight_micros_ += p.weight.micros();
      ++person_count_;
    }
  }
  std::ostringstream canonical;
  write_population(canonical, *this);
  fingerprint_ = fnv1a(canonical.str());
}

IngestionSummary Population::summary() const { return {person_count_, households_.size(), total_weight()}; }

std::string Population::fingerprint_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint_));
  return buf;
}

Population load_population(std::istream& source, const IngestionOptions& options) {
  const auto rows = csv::read_all(source, options.delimiter);
  if (rows.empty()) throw DataError(DataErrorKind::MissingColumn, 1, "missing header row");

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) column.emplace(rows[0][i], i);
  std::array<std::size_t, kRequiredColumns.size()> idx{};
  for (std::size_t k = 0; k < kRequiredColumns.size(); ++k) {
    auto it = column.find(kRequiredColumns[k]);
    if (it == column.end())
      throw DataError(DataErrorKind::MissingColumn, 1, std::string("column '") + kRequiredColumns[k] + "' not found");
    idx[k] = it->second;
  }
  auto optional_column = [&](const char* name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    return it == column.end() ? std::nullopt : std::optional<std::size_t>(it->second);
  };
  const auto pit_col = optional_column("baseline_pit");
  const auto ssc_col = optional_column("baseline_ssc");

  std::vector<Household> households;
  std::unordered_map<std::string, std::size_t> household_index;
  std::unordered_set<std::string> person_ids;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < rows[0].size())
      throw DataError(DataErrorKind::MalformedRow, line,
                      "expected " + std::to_string(rows[0].size()) + " fields, got " + std::to_string(row.size()));

    auto money = [&](std::size_t col, const char* name) {
      try {
        return Money::parse(row[col]);
      } catch (const std::invalid_argument&) {
        throw DataError(DataErrorKind::InvalidNumber, line, std::string(name) + " = '" + row[col] + "'");
      }
    };
    auto optional_money = [&](const std::optional<std::size_t>& col, const char* name) -> std::optional<Money> {
      if (!col || row[*col].empty()) return std::nullopt;
      return money(*col, name);
    };

    PersonRecord p;
    p.household_id = row[idx[0]];
    p.person_id = row[idx[1]];
    try {
      std::size_t used = 0;
      p.age = std::stoi(row[idx[2]], &used);
      if (used != row[idx[2]].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(DataErrorKind::InvalidNumber, line, "age = '" + row[idx[2]] + "'");
    }
    try {
      p.weight = Weight::parse(row[idx[3]]);
    } catch (const std::invalid_argument&) {
      throw DataError(DataErrorKind::InvalidNumber, line, "weight = '" + row[idx[3]] + "'");
    }
    p.market_income = money(idx[4], "market_income");
    p.pension_income = money(idx[5], "pension_income");
    p.other_benefit_income = money(idx[6], "other_benefit_income");
    p.baseline_pit = optional_money(pit_col, "baseline_pit");
    p.baseline_ssc = optional_money(ssc_col, "baseline_ssc");
    check_person(p, line);

    if (!person_ids.insert(p.person_id).second)
      throw DataError(DataErrorKind::DuplicatePersonId, line, "person_id " + p.person_id);
    auto [it, inserted] = household_index.emplace(p.household_id, households.size());
    if (inserted) {
      households.push_back(Household{p.household_id, {}});
    } else if (households[it->second].weight() != p.weight) {
      throw DataError(DataErrorKind::UnequalWeightsWithinHousehold, line,
                      "household " + p.household_id + ": weight " + p.weight.str() + " differs from " +
                          households[it->second].weight().str());
    }
    households[it->second].members.push_back(std::move(p));
  }
  return Population(std::move(households), Provenance{Provenance::Kind::Ingested, 0});
}

Population load_population_file(const std::string& path, const IngestionOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open microdata file '" + path + "'");
  return load_population(in, options);
}

void write_population(std::ostream& out, const Population& population) {
  bool any_pit = false;
  bool any_ssc = false;
  for (const auto& h : population.households())
    for (const auto& p : h.members) {
      any_pit = any_pit || p.baseline_pit.has_value();
      any_ssc = any_ssc || p.baseline_ssc.has_value();
    }
  csv::Row header(kRequiredColumns.begin(), kRequiredColumns.end());
  if (any_pit) header.emplace_back("baseline_pit");
  if (any_ssc) header.emplace_back("baseline_ssc");
  csv::write_row(out, header);
  for (const auto& h : population.households()) {
    for (const auto& p : h.members) {
      csv::Row row = {p.household_id,        p.person_id,           std::to_string(p.age),
                      p.weight.str(),        p.market_income.str(), p.pension_income.str(),
                      p.other_benefit_income.str()};
      if (any_pit) row.push_back(p.baseline_pit ? p.baseline_pit->str() : std::string());
      if (any_ssc) row.push_back(p.baseline_ssc ? p.baseline_ssc->str() : std::string());
      csv::write_row(out, row);
    }
  }
}

Money per_capita(std::span<const Money> member_incomes) {
  if (member_incomes.empty()) return Money{};
  int128_t sum = 0;
  for (Money m : member_incomes) sum += m.cents();
  return Money::centavos(static_cast<std::int64_t>(div_round_half_up(sum, static_cast<int128_t>(member_incomes.size()))));
}

Money per_capita(const Household& household, const std::function<Money(const PersonRecord&)>& income_of) {
  std::vector<Money> incomes;
  incomes.reserve(household.members.size());
  for (const auto& p : household.members) incomes.push_back(income_of(p));
  return per_capita(incomes);
}

Money median_per_capita_gross_income(const Population& population) {
  std::vector<std::pair<Money, Weight>> values;
  values.reserve(population.person_count());
  for (const auto& h : population.households()) {
    const Money pc = per_capita(h, [](const PersonRecord& p) { return p.gross_income(); });
    for (const auto& p : h.members) values.emplace_back(pc, p.weight);
  }
  return weighted_median(std::move(values));
}

}  // namespace ubisim
