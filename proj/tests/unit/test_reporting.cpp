#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "ubisim/engine.hpp"
#include "ubisim/error.hpp"
#include "ubisim/reporting.hpp"

using namespace ubisim;
using fixtures::R;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ubisim_test_reporting_" + name);
  fs::remove_all(dir);
  return dir;
}

SchemeSpec null_reform() {
  SchemeSpec s;
  s.name = "null";
  s.ubi = {Money{}, Money{}, Money{}};
  s.tax = KeepBaselineTax{};
  s.offset = {false, false};
  return s;
}

const Engine& engine() {
  static const Engine e(synth_generate(fixtures::synth(400, 7)), example_2017_policy());
  return e;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_fixed(35.69, 1) == "35.7");
  CHECK(format_fixed(0.25, 1) == "0.3");
  CHECK(format_fixed(0.4719, 3) == "0.472");
  CHECK(format_fixed(-0.04, 1) == "0.0");
  CHECK(format_fixed(-1.25, 1) == "-1.2");
  CHECK(format_grouped(1115) == "1,115");
  CHECK(format_grouped(-1234567) == "-1,234,567");
  CHECK(format_grouped(999) == "999");
  CHECK(format_grouped(0) == "0");
}

TEST_CASE("budget column replays the published net cost") {
  BaselineTotals current;
  current.market = WeightedTotal::billions(2571);
  current.pensions = WeightedTotal::billions(717);
  current.other_transfers = WeightedTotal::billions(87);
  ReformTotals reform;
  reform.ubi_gross_cost = WeightedTotal::billions(1009);
  reform.remaining_pensions = WeightedTotal::billions(553);
  SolvedRates rates;
  rates.rate = 1115.0 / 3124.0;
  const auto c = budget_column("scheme1", current, reform, rates);
  CHECK(c.transfer_reduction.round_billions() == 251);
  CHECK(c.ubi_net_cost.round_billions() == 758);
  CHECK(c.remaining_transfers.round_billions() == 553);
}

TEST_CASE("null reform columns equal the current system") {
  const auto specs = std::vector<SchemeSpec>{null_reform()};
  const auto report = engine().report(specs);
  const auto& c = report.budget.schemes[0];
  const auto& cur = report.budget.current;
  CHECK(c.ubi_gross_cost == WeightedTotal{});
  CHECK(c.transfer_reduction == WeightedTotal{});
  CHECK(c.remaining_transfers == cur.transfers());
  CHECK(c.tax_revenue == cur.taxes());
  CHECK(c.disposable == cur.disposable);
  const auto& pov = report.poverty.columns[1];
  for (std::size_t g = 0; g < 4; ++g)
    if (pov.reduction_pct[g]) CHECK(*pov.reduction_pct[g] == 0.0);
  CHECK(*pov.gini_reduction_pct == 0.0);
  const auto printed = print_poverty(report);
  CHECK(printed.rows[1][2] == "0.0");
  CHECK(printed.rows.back()[2] == "0.0");
}

TEST_CASE("table identities hold on a synthetic population") {
  const auto specs = std::vector<SchemeSpec>{preset("scheme1"), preset("scheme2"), preset("scheme3")};
  const auto report = engine().report(specs);
  for (const auto& c : report.budget.schemes) {
    CHECK(c.ubi_net_cost == c.ubi_gross_cost - c.transfer_reduction);
    CHECK(c.remaining_transfers == report.budget.current.transfers() - c.transfer_reduction);
  }
  for (const auto& d : report.deciles) {
    for (const auto& row : d.report.deciles) {
      CHECK(row.winners_micros + row.losers_micros + row.unchanged_micros > 0);
      CHECK(row.winners_pct + row.losers_pct + row.unchanged_pct == Catch::Approx(100.0));
    }
  }
  const auto budget = print_budget(report);
  CHECK(budget.rows.size() == 17);
  CHECK(budget.columns.size() == 5);
  CHECK(budget.rows[15][4] == "20.0");
  CHECK(budget.rows[15][2] == "-");
}

TEST_CASE("figure points are the decile cells divided by hand") {
  const auto specs = std::vector<SchemeSpec>{preset("scheme2")};
  const auto report = engine().report(specs);
  const auto& d1 = report.deciles[0].report.deciles[0];
  const auto& p1 = report.figures[0].points[0];
  CHECK(p1.decile == 1);
  CHECK(p1.winners_pct == d1.winners_pct);
  CHECK(p1.losers_pct == d1.losers_pct);
  REQUIRE(d1.mean_gain.has_value());
  CHECK(*p1.gain_pct_of_baseline == Catch::Approx(100.0 * *d1.mean_gain / *d1.winners_baseline));
  const auto printed = print_figure(report.figures[0]);
  CHECK(printed.rows[0][1] == format_fixed(d1.winners_pct, 1));
}

TEST_CASE("reports refuse outcomes from another population") {
  const auto other = synth_generate(fixtures::synth(50, 1));
  const auto other_base = baseline_disposable(other, example_2017_policy());
  const auto solved = solve_scheme(other, other_base, preset("scheme1"));
  const std::vector<SolvedScheme> schemes = {solved};
  CHECK_THROWS_AS(build_report(engine().population(), engine().baseline(), schemes, R("406")), InconsistentInputs);
  CHECK_THROWS_AS(build_report(engine().population(), other_base, {}, R("406")), InconsistentInputs);
}

TEST_CASE("json manifest keeps full precision while tables print one decimal") {
  const auto specs = std::vector<SchemeSpec>{preset("scheme1")};
  const auto report = engine().report(specs);
  const auto dir = scratch("json");
  const auto files = serialize_report(report, ReportFormat::Json, dir);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  const double rate = manifest["schemes"][0]["solver"]["rate"].get<double>();
  CHECK(rate == report.schemes[0].rates.rate);
  const auto budget = nlohmann::json::parse(slurp(dir / "budget_table.json"));
  CHECK(budget["rows"][14][2] == format_fixed(rate * 100.0, 1));
  CHECK(manifest["files"].size() == files.size() - 1);
  CHECK(manifest["population"]["fingerprint"] == engine().population().fingerprint_hex());

  auto given = preset("scheme1");
  given.tax = FlatTax{0.357};
  const auto given_report = engine().report(std::vector<SchemeSpec>{given});
  CHECK(print_budget(given_report).rows[14][2] == "35.7");
  CHECK(solver_json(given_report.schemes[0].rates)["rate"].get<double>() == 0.357);
}

TEST_CASE("csv tables re-parse to the printed report") {
  const auto specs = std::vector<SchemeSpec>{preset("scheme2"), preset("scheme3")};
  const auto report = engine().report(specs);
  const auto dir = scratch("csv");
  serialize_report(report, ReportFormat::Csv, dir);
  for (const auto& table : printed_tables(report)) {
    INFO(table.name);
    const auto parsed = read_table_csv(dir / (table.name + ".csv"));
    CHECK(parsed.name == table.name);
    CHECK(parsed.columns == table.columns);
    CHECK(parsed.rows == table.rows);
  }
}

TEST_CASE("serialization is byte-stable") {
  const auto specs = std::vector<SchemeSpec>{preset("scheme1"), preset("scheme3")};
  const Engine a(synth_generate(fixtures::synth(300, 42)), example_2017_policy());
  const Engine b(synth_generate(fixtures::synth(300, 42)), example_2017_policy());
  const auto d1 = scratch("stable1");
  const auto d2 = scratch("stable2");
  const auto f1 = serialize_report(a.report(specs), ReportFormat::Csv, d1);
  const auto f2 = serialize_report(b.report(specs), ReportFormat::Csv, d2);
  REQUIRE(f1.size() == f2.size());
  for (std::size_t i = 0; i < f1.size(); ++i) CHECK(slurp(f1[i]) == slurp(f2[i]));
}

TEST_CASE("empty age groups print a marker") {
  auto spec = fixtures::synth(60, 8);
  spec.ages = {0.0, 1.0, 0.0};
  spec.elderly_partner_rate = 0.0;
  const Engine e(synth_generate(spec), example_2017_policy());
  const auto report = e.report(std::vector<SchemeSpec>{preset("scheme2")});
  const auto printed = print_poverty(report);
  CHECK(printed.rows[2][1] == "empty");
  CHECK(printed.rows[3][2] == "-");
}

TEST_CASE("budget unit follows the population size") {
  const auto report = engine().report(std::vector<SchemeSpec>{preset("scheme1")});
  CHECK(report.budget_unit == BudgetUnit::Millions);
  CHECK(print_budget(report).title.find("millions") != std::string::npos);
}
