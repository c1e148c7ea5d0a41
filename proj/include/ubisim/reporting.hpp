#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ubisim/baseline_policy.hpp"
#include "ubisim/distribution.hpp"
#include "ubisim/microdata.hpp"
#include "ubisim/neutrality.hpp"

namespace ubisim {

struct BudgetSchemeColumn {
  std::string scheme;
  WeightedTotal ubi_gross_cost;
  WeightedTotal transfer_reduction;
  WeightedTotal ubi_net_cost;
  WeightedTotal remaining_transfers;
  WeightedTotal tax_revenue;
  WeightedTotal disposable;
  double standard_rate = 0.0;
  std::optional<double> reduced_rate;
  std::optional<Money> threshold;
};

// Reform column from annual aggregates; reduction = current transfers -
// remaining, net cost = gross cost - reduction.
BudgetSchemeColumn budget_column(const std::string& scheme, const BaselineTotals& current, const ReformTotals& reform,
                                 const SolvedRates& rates);

struct BudgetTable {
  BaselineTotals current;
  std::vector<BudgetSchemeColumn> schemes;
};

// Values are fractions in [0, 1]; nullopt marks an empty age group or an
// undefined reduction.
struct PovertyColumn {
  std::string scheme;  // "current" for the baseline column
  std::array<std::optional<double>, 4> headcount;  // All, Children, WorkingAge, Elderly
  std::array<std::optional<double>, 4> reduction_pct;
  double gini = 0.0;
  std::optional<double> gini_reduction_pct;
};

struct PovertyTable {
  Money poverty_line;
  std::vector<PovertyColumn> columns;  // current first
};

struct DecileTable {
  std::string scheme;
  WinnerLoserReport report;
  std::vector<std::string> warnings;
};

struct FigurePoint {
  int decile = 0;
  double winners_pct = 0.0;
  double losers_pct = 0.0;
  std::optional<double> gain_pct_of_baseline;
  std::optional<double> loss_pct_of_baseline;
};

struct FigureSeries {
  std::string scheme;
  std::array<FigurePoint, 10> points;
};

enum class BudgetUnit { Billions, Millions };

struct Report {
  std::string software_version;
  IngestionSummary population;
  std::string population_fingerprint;
  std::string provenance;
  std::vector<SolvedScheme> schemes;
  BudgetTable budget;
  PovertyTable poverty;
  std::vector<DecileTable> deciles;
  std::vector<FigureSeries> figures;
  BudgetUnit budget_unit = BudgetUnit::Billions;
};

// Throws InconsistentInputs when the baseline or any outcome was computed
// on a different population.
Report build_report(const Population& population, const BaselineResult& baseline, std::span<const SolvedScheme> schemes,
                    Money poverty_line);

// Figure points derived from a decile table's cells.
FigureSeries figure_series(const DecileTable& table);

// --- printed tables --------------------------------------------------------

// Half-up rounding to `decimals` places, applied once when printing.
std::string format_fixed(double value, int decimals);
// Whole number with thousands separators, e.g. "1,115".
std::string format_grouped(int128_t value);

struct PrintedTable {
  std::string name;  // file stem
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const PrintedTable&, const PrintedTable&) = default;
};

PrintedTable print_budget(const Report& report);
PrintedTable print_poverty(const Report& report);
PrintedTable print_deciles(const DecileTable& table);
PrintedTable print_figure(const FigureSeries& series);
std::vector<PrintedTable> printed_tables(const Report& report);

enum class ReportFormat { Csv, Json };

void write_table(const PrintedTable& table, ReportFormat format, const std::filesystem::path& file);
PrintedTable read_table_csv(const std::filesystem::path& file);

nlohmann::json manifest_json(const Report& report);

// One file per table plus manifest.json; byte-stable for fixed inputs.
// Throws IoFailure. Returns the written paths.
std::vector<std::filesystem::path> serialize_report(const Report& report, ReportFormat format,
                                                    const std::filesystem::path& destination);

// Full-precision document for one scheme of the report (the HTTP
// SimulateResponse body).
nlohmann::json simulate_response_json(const Report& report, std::size_t scheme_index = 0);
nlohmann::json solver_json(const SolvedRates& rates);

}  // namespace ubisim
