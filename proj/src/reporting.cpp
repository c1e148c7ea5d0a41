#include "ubisim/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ubisim/config_io.hpp"
#include "ubisim/csv.hpp"
#include "ubisim/error.hpp"

namespace ubisim {

using nlohmann::json;

namespace {

constexpr std::array<AgeGroup, 4> kGroups = {AgeGroup::All, AgeGroup::Children, AgeGroup::WorkingAge,
                                             AgeGroup::Elderly};

std::optional<double> reduction_pct(std::optional<double> before, std::optional<double> after) {
  if (!before || !after || *before <= 0.0) return std::nullopt;
  return 100.0 * (*before - *after) / *before;
}

int128_t unit_divisor(BudgetUnit unit) {
  const int128_t real = 100'000'000;  // WeightedTotal units per real
  return unit == BudgetUnit::Billions ? real * 1'000'000'000 : real * 1'000'000;
}

std::string dash_or(const std::optional<double>& v, int decimals, double scale = 1.0) {
  return v ? format_fixed(*v * scale, decimals) : std::string("-");
}

std::string whole_reais(const std::optional<double>& v) {
  if (!v) return "-";
  return format_grouped(static_cast<int128_t>(std::floor(*v + 0.5)));
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json row_json(const WinnerLoserRow& r) {
  return {{"label", r.label},
          {"weight", r.weight},
          {"winners_pct", r.winners_pct},
          {"losers_pct", r.losers_pct},
          {"unchanged_pct", r.unchanged_pct},
          {"winners_baseline_income", optional_json(r.winners_baseline)},
          {"mean_gain", optional_json(r.mean_gain)},
          {"losers_baseline_income", optional_json(r.losers_baseline)},
          {"mean_loss", optional_json(r.mean_loss)}};
}

json headcounts_json(const std::array<std::optional<double>, 4>& values) {
  json out = json::object();
  for (std::size_t g = 0; g < kGroups.size(); ++g) out[to_string(kGroups[g])] = optional_json(values[g]);
  return out;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  return out.empty() ? std::string("scheme") : out;
}

}  // namespace

BudgetSchemeColumn budget_column(const std::string& scheme, const BaselineTotals& current, const ReformTotals& reform,
                                 const SolvedRates& rates) {
  BudgetSchemeColumn c;
  c.scheme = scheme;
  c.ubi_gross_cost = reform.ubi_gross_cost;
  c.remaining_transfers = reform.remaining_transfers();
  c.transfer_reduction = current.transfers() - c.remaining_transfers;
  c.ubi_net_cost = c.ubi_gross_cost - c.transfer_reduction;
  c.tax_revenue = reform.tax_revenue;
  c.disposable = reform.disposable;
  c.standard_rate = rates.rate;
  c.reduced_rate = rates.lower_rate;
  return c;
}

Report build_report(const Population& population, const BaselineResult& baseline, std::span<const SolvedScheme> schemes,
                    Money poverty_line) {
  if (baseline.population_fingerprint != population.fingerprint())
    throw InconsistentInputs("build_report: baseline fingerprint does not match the population");
  for (const auto& s : schemes)
    if (s.outcome.population_fingerprint != population.fingerprint())
      throw InconsistentInputs("build_report: outcome of '" + s.spec.name + "' comes from a different population");

  Report r;
  r.software_version = UBISIM_VERSION;
  r.population = population.summary();
  r.population_fingerprint = population.fingerprint_hex();
  r.provenance = population.provenance().str();
  r.schemes.assign(schemes.begin(), schemes.end());

  r.budget.current = baseline.totals;
  r.budget_unit = abs(baseline.totals.disposable) >= WeightedTotal::billions(100.0) ? BudgetUnit::Billions
                                                                                    : BudgetUnit::Millions;
  for (const auto& s : schemes) {
    BudgetSchemeColumn c = budget_column(s.spec.name, baseline.totals, s.outcome.totals, s.rates);
    if (const auto* two = std::get_if<TwoBracketTax>(&s.spec.tax)) c.threshold = two->threshold;
    r.budget.schemes.push_back(c);
  }

  r.poverty.poverty_line = poverty_line;
  const IndividualIncomeView base_view = make_view(population, baseline);
  PovertyColumn current;
  current.scheme = "current";
  for (std::size_t g = 0; g < kGroups.size(); ++g)
    current.headcount[g] = poverty_headcount(base_view, poverty_line, IncomeSide::Baseline, kGroups[g]);
  current.gini = weighted_gini(base_view.pc_baseline, base_view.weight);
  r.poverty.columns.push_back(current);

  const DecileAssignment deciles = assign_deciles(base_view);
  for (const auto& s : schemes) {
    const IndividualIncomeView view = make_view(population, baseline, &s.outcome);
    PovertyColumn col;
    col.scheme = s.spec.name;
    for (std::size_t g = 0; g < kGroups.size(); ++g) {
      col.headcount[g] = poverty_headcount(view, poverty_line, IncomeSide::Reform, kGroups[g]);
      col.reduction_pct[g] = reduction_pct(current.headcount[g], col.headcount[g]);
    }
    col.gini = weighted_gini(view.pc_reform, view.weight);
    col.gini_reduction_pct = reduction_pct(current.gini, col.gini);
    r.poverty.columns.push_back(col);

    DecileTable table{s.spec.name, winners_losers(view, deciles), deciles.warnings};
    r.figures.push_back(figure_series(table));
    r.deciles.push_back(std::move(table));
  }
  return r;
}

FigureSeries figure_series(const DecileTable& table) {
  FigureSeries out;
  out.scheme = table.scheme;
  for (std::size_t d = 0; d < 10; ++d) {
    const auto& row = table.report.deciles[d];
    FigurePoint p;
    p.decile = static_cast<int>(d + 1);
    p.winners_pct = row.winners_pct;
    p.losers_pct = row.losers_pct;
    if (row.mean_gain && row.winners_baseline && *row.winners_baseline > 0.0)
      p.gain_pct_of_baseline = 100.0 * *row.mean_gain / *row.winners_baseline;
    if (row.mean_loss && row.losers_baseline && *row.losers_baseline > 0.0)
      p.loss_pct_of_baseline = 100.0 * *row.mean_loss / *row.losers_baseline;
    out.points[d] = p;
  }
  return out;
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return "-";
  const long double scale = std::pow(10.0L, decimals);
  const long double scaled = std::floor(static_cast<long double>(value) * scale + 0.5L);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lf", decimals, scaled / scale);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string format_grouped(int128_t value) {
  std::string digits = int128_str(value < 0 ? -value : value);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return value < 0 ? "-" + out : out;
}

PrintedTable print_budget(const Report& report) {
  const int128_t div = unit_divisor(report.budget_unit);
  auto amount = [&](WeightedTotal t) { return format_grouped(div_round_half_up(t.units(), div)); };
  PrintedTable t;
  t.name = "budget_table";
  t.title = std::string("Budgetary effects (") +
            (report.budget_unit == BudgetUnit::Billions ? "billions" : "millions") + " of reais/year)";
  t.columns = {"Item", "Current system"};
  for (const auto& c : report.budget.schemes) t.columns.push_back(c.scheme);
  const auto& cur = report.budget.current;
  const std::size_t n = report.budget.schemes.size();
  auto current_only = [&](const std::string& label, WeightedTotal v) {
    std::vector<std::string> row = {label, amount(v)};
    row.resize(2 + n);
    t.rows.push_back(row);
  };
  auto reform_only = [&](const std::string& label, auto getter) {
    std::vector<std::string> row = {label, ""};
    for (const auto& c : report.budget.schemes) row.push_back(getter(c));
    t.rows.push_back(row);
  };
  {
    std::vector<std::string> row = {"Initial (market) income", amount(cur.market)};
    for (std::size_t i = 0; i < n; ++i) row.push_back(amount(cur.market));
    t.rows.push_back(row);
  }
  current_only("Current transfers", cur.transfers());
  current_only("Pensions", cur.pensions);
  current_only("Others", cur.other_transfers);
  current_only("Current tax revenue", cur.taxes());
  current_only("Personal income tax", cur.pit);
  current_only("Employee social security contribution", cur.ssc);
  current_only("Current disposable income", cur.disposable);
  reform_only("UBI gross cost", [&](const BudgetSchemeColumn& c) { return amount(c.ubi_gross_cost); });
  reform_only("Reduction in current transfers", [&](const BudgetSchemeColumn& c) { return amount(c.transfer_reduction); });
  reform_only("UBI net cost", [&](const BudgetSchemeColumn& c) { return amount(c.ubi_net_cost); });
  reform_only("Remaining transfers", [&](const BudgetSchemeColumn& c) { return amount(c.remaining_transfers); });
  reform_only("Tax revenue under UBI", [&](const BudgetSchemeColumn& c) { return amount(c.tax_revenue); });
  reform_only("Disposable income under UBI", [&](const BudgetSchemeColumn& c) { return amount(c.disposable); });
  reform_only("Income tax rate under UBI (%) - Flat/Standard",
              [&](const BudgetSchemeColumn& c) { return format_fixed(c.standard_rate * 100.0, 1); });
  reform_only("Income tax rate under UBI (%) - Reduced",
              [&](const BudgetSchemeColumn& c) { return dash_or(c.reduced_rate, 1, 100.0); });
  reform_only("Reduced-rate threshold (R$/month)", [&](const BudgetSchemeColumn& c) {
    return c.threshold ? format_grouped(div_round_half_up(c.threshold->cents(), 100)) : std::string("-");
  });
  return t;
}

PrintedTable print_poverty(const Report& report) {
  PrintedTable t;
  t.name = "poverty_inequality";
  t.title = "Effects on poverty and inequality (poverty line R$" + report.poverty.poverty_line.str() + "/month)";
  t.columns = {"Indicator"};
  for (const auto& c : report.poverty.columns) t.columns.push_back(c.scheme == "current" ? "Current system" : c.scheme);
  const std::array<const char*, 4> labels = {"Total population (% in poverty)", "Children (< 18)",
                                             "Working age (18 - 64)", "Old age (>= 65)"};
  for (std::size_t g = 0; g < 4; ++g) {
    std::vector<std::string> level = {labels[g]};
    std::vector<std::string> reduction = {"% reduction"};
    for (std::size_t i = 0; i < report.poverty.columns.size(); ++i) {
      const auto& c = report.poverty.columns[i];
      level.push_back(c.headcount[g] ? format_fixed(*c.headcount[g] * 100.0, 1) : std::string("empty"));
      reduction.push_back(i == 0 ? std::string("-") : dash_or(c.reduction_pct[g], 1));
    }
    t.rows.push_back(level);
    t.rows.push_back(reduction);
  }
  std::vector<std::string> gini = {"Gini coefficient of inequality"};
  std::vector<std::string> gini_red = {"% reduction"};
  for (std::size_t i = 0; i < report.poverty.columns.size(); ++i) {
    const auto& c = report.poverty.columns[i];
    gini.push_back(format_fixed(c.gini, 3));
    gini_red.push_back(i == 0 ? std::string("-") : dash_or(c.gini_reduction_pct, 1));
  }
  t.rows.push_back(gini);
  t.rows.push_back(gini_red);
  return t;
}

PrintedTable print_deciles(const DecileTable& table) {
  PrintedTable t;
  t.name = "deciles_" + sanitize(table.scheme);
  t.title = "Winners and losers by baseline per-capita income decile - " + table.scheme;
  t.columns = {"Decile",   "Winners %", "Winners baseline income R$/month", "Gain R$/month",
               "Losers %", "Losers baseline income R$/month", "Loss R$/month"};
  auto row = [](const WinnerLoserRow& r) {
    return std::vector<std::string>{r.label,
                                    format_fixed(r.winners_pct, 1),
                                    whole_reais(r.winners_baseline),
                                    whole_reais(r.mean_gain),
                                    format_fixed(r.losers_pct, 1),
                                    whole_reais(r.losers_baseline),
                                    whole_reais(r.mean_loss)};
  };
  for (const auto& r : table.report.deciles) t.rows.push_back(row(r));
  t.rows.push_back(row(table.report.all));
  return t;
}

PrintedTable print_figure(const FigureSeries& series) {
  PrintedTable t;
  t.name = "figure_series_" + sanitize(series.scheme);
  t.title = "Winners/losers and change in per-capita disposable income by decile - " + series.scheme;
  t.columns = {"Decile", "Winners %", "Losers %", "Gain % of winners baseline", "Loss % of losers baseline"};
  for (const auto& p : series.points)
    t.rows.push_back({std::to_string(p.decile), format_fixed(p.winners_pct, 1), format_fixed(p.losers_pct, 1),
                      dash_or(p.gain_pct_of_baseline, 1), dash_or(p.loss_pct_of_baseline, 1)});
  return t;
}

std::vector<PrintedTable> printed_tables(const Report& report) {
  std::vector<PrintedTable> out = {print_budget(report), print_poverty(report)};
  for (const auto& d : report.deciles) out.push_back(print_deciles(d));
  for (const auto& f : report.figures) out.push_back(print_figure(f));
  return out;
}

void write_table(const PrintedTable& table, ReportFormat format, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoFailure("cannot write '" + file.string() + "'");
  if (format == ReportFormat::Csv) {
    csv::write_row(out, table.columns);
    for (const auto& row : table.rows) csv::write_row(out, row);
  } else {
    out << json{{"title", table.title}, {"columns", table.columns}, {"rows", table.rows}}.dump(2) << '\n';
  }
  if (!out) throw IoFailure("failed writing '" + file.string() + "'");
}

PrintedTable read_table_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoFailure("cannot read '" + file.string() + "'");
  auto rows = csv::read_all(in);
  PrintedTable t;
  t.name = file.stem().string();
  if (rows.empty()) return t;
  t.columns = rows.front();
  t.rows.assign(rows.begin() + 1, rows.end());
  return t;
}

json solver_json(const SolvedRates& rates) {
  return {{"rate", rates.rate},
          {"rate_percent", format_fixed(rates.rate * 100.0, 1)},
          {"lower_rate", rates.lower_rate ? json(*rates.lower_rate) : json(nullptr)},
          {"method", to_string(rates.method)},
          {"required_revenue_reais", rates.required_revenue.to_reais()},
          {"required_revenue_exact", rates.required_revenue.exact_str()},
          {"closed_form_rate", rates.closed_form_rate},
          {"exact_residual_reais", rates.exact_residual.to_reais()},
          {"exact_residual_exact", rates.exact_residual.exact_str()},
          {"residual_reais", rates.residual.to_reais()},
          {"residual_exact", rates.residual.exact_str()},
          {"tolerance_reais", rates.tolerance.to_reais()},
          {"within_tolerance", rates.within_tolerance()},
          {"surplus_reais", rates.has_surplus ? json(rates.surplus.to_reais()) : json(nullptr)},
          {"iterations", rates.iterations}};
}

json manifest_json(const Report& report) {
  json schemes = json::array();
  for (const auto& s : report.schemes)
    schemes.push_back({{"name", s.spec.name}, {"spec", to_json(s.spec)}, {"solver", solver_json(s.rates)}});
  json warnings = json::array();
  if (!report.deciles.empty())
    for (const auto& w : report.deciles.front().warnings) warnings.push_back(w);
  return {{"software", {{"name", "ubisim"}, {"version", report.software_version}}},
          {"population",
           {{"fingerprint", report.population_fingerprint},
            {"provenance", report.provenance},
            {"persons", report.population.rows},
            {"households", report.population.households},
            {"total_weight", report.population.total_weight}}},
          {"poverty_line", report.poverty.poverty_line.str()},
          {"budget_unit", report.budget_unit == BudgetUnit::Billions ? "billions" : "millions"},
          {"schemes", schemes},
          {"decile_warnings", warnings}};
}

std::vector<std::filesystem::path> serialize_report(const Report& report, ReportFormat format,
                                                    const std::filesystem::path& destination) {
  std::error_code ec;
  std::filesystem::create_directories(destination, ec);
  if (ec) throw IoFailure("cannot create '" + destination.string() + "': " + ec.message());
  const std::string ext = format == ReportFormat::Csv ? ".csv" : ".json";
  std::vector<std::filesystem::path> written;
  json files = json::array();
  for (const auto& table : printed_tables(report)) {
    const auto path = destination / (table.name + ext);
    write_table(table, format, path);
    written.push_back(path);
    files.push_back(path.filename().string());
  }
  json manifest = manifest_json(report);
  manifest["files"] = files;
  const auto path = destination / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write '" + path.string() + "'");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoFailure("failed writing '" + path.string() + "'");
  written.push_back(path);
  return written;
}

json simulate_response_json(const Report& report, std::size_t index) {
  if (index >= report.schemes.size()) throw std::out_of_range("simulate_response_json: no such scheme");
  const auto& s = report.schemes[index];
  const auto& b = report.budget.schemes[index];
  const auto& cur = report.budget.current;
  const auto& pov_base = report.poverty.columns.front();
  const auto& pov = report.poverty.columns[index + 1];
  const auto& dec = report.deciles[index];
  const auto& fig = report.figures[index];

  json deciles = json::array();
  for (const auto& r : dec.report.deciles) deciles.push_back(row_json(r));
  json figure = json::array();
  for (const auto& p : fig.points)
    figure.push_back({{"decile", p.decile},
                      {"winners_pct", p.winners_pct},
                      {"losers_pct", p.losers_pct},
                      {"gain_pct_of_baseline", optional_json(p.gain_pct_of_baseline)},
                      {"loss_pct_of_baseline", optional_json(p.loss_pct_of_baseline)}});
  json reductions = json::object();
  for (std::size_t g = 0; g < kGroups.size(); ++g) reductions[to_string(kGroups[g])] = optional_json(pov.reduction_pct[g]);

  json solver = solver_json(s.rates);
  solver["decile_warnings"] = dec.warnings;
  return {{"population_fingerprint", report.population_fingerprint},
          {"scheme", to_json(s.spec)},
          {"rates",
           {{"standard", b.standard_rate},
            {"reduced", optional_json(b.reduced_rate)},
            {"threshold", b.threshold ? json(b.threshold->to_reais()) : json(nullptr)}}},
          {"budget",
           {{"unit", "reais/year"},
            {"initial_income", cur.market.to_reais()},
            {"current_transfers", cur.transfers().to_reais()},
            {"pensions", cur.pensions.to_reais()},
            {"other_transfers", cur.other_transfers.to_reais()},
            {"current_tax_revenue", cur.taxes().to_reais()},
            {"personal_income_tax", cur.pit.to_reais()},
            {"employee_ssc", cur.ssc.to_reais()},
            {"current_disposable", cur.disposable.to_reais()},
            {"ubi_gross_cost", b.ubi_gross_cost.to_reais()},
            {"transfer_reduction", b.transfer_reduction.to_reais()},
            {"ubi_net_cost", b.ubi_net_cost.to_reais()},
            {"remaining_transfers", b.remaining_transfers.to_reais()},
            {"tax_revenue", b.tax_revenue.to_reais()},
            {"reform_disposable", b.disposable.to_reais()}}},
          {"poverty",
           {{"line", report.poverty.poverty_line.to_reais()},
            {"baseline", headcounts_json(pov_base.headcount)},
            {"reform", headcounts_json(pov.headcount)},
            {"reduction_pct", reductions}}},
          {"gini", {{"baseline", pov_base.gini}, {"reform", pov.gini}, {"reduction_pct", optional_json(pov.gini_reduction_pct)}}},
          {"deciles", deciles},
          {"all_deciles", row_json(dec.report.all)},
          {"figure_series", figure},
          {"diagnostics", solver}};
}

}  // namespace ubisim
