#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "ubisim/config_io.hpp"
#include "ubisim/error.hpp"

using namespace ubisim;
using nlohmann::json;
using fixtures::R;

namespace {

std::string shipped(const std::string& rel) { return std::string(UBISIM_SOURCE_DIR) + "/config/" + rel; }

}  // namespace

TEST_CASE("shipped scheme files equal the built-in presets") {
  for (const auto& name : preset_names()) {
    INFO(name);
    CHECK(scheme_from_json(read_json_file(shipped("schemes/" + name + ".json"))) == preset(name));
    CHECK(load_scheme(name) == preset(name));
    CHECK(load_scheme(shipped("schemes/" + name + ".json")) == preset(name));
  }
}

TEST_CASE("shipped baseline file equals the built-in example policy") {
  CHECK(policy_from_json(read_json_file(shipped("baseline_example_2017.json"))) == example_2017_policy());
}

TEST_CASE("scheme json round-trips") {
  for (const auto& name : preset_names()) CHECK(scheme_from_json(to_json(preset(name))) == preset(name));
  auto s = preset("scheme3");
  auto& two = std::get<TwoBracketTax>(s.tax);
  two.threshold = R("1725.50");
  two.upper_rate = 0.475;
  s.ubi_taxable = true;
  CHECK(scheme_from_json(to_json(s)) == s);
  SchemeSpec keep = preset("scheme1");
  keep.tax = KeepBaselineTax{};
  CHECK(scheme_from_json(to_json(keep)) == keep);
}

TEST_CASE("scheme json accepts amounts as strings and rates to solve") {
  const auto j = json::parse(R"({
    "name": "mine",
    "ubi": {"child": "150.25", "adult": 300, "elderly": 600.5},
    "tax": {"type": "flat", "rate": "solve"}
  })");
  const auto s = scheme_from_json(j);
  CHECK(s.ubi.child_amount == R("150.25"));
  CHECK(s.ubi.elderly_amount == R("600.50"));
  CHECK(has_unsolved_rate(s));
  CHECK(s.offset.pensions_reduced_by_ubi);
  CHECK(s.poverty_line == R("406"));
}

TEST_CASE("invalid scheme documents are config errors") {
  auto base = to_json(preset("scheme1"));
  auto bad_rate = base;
  bad_rate["tax"]["rate"] = 1.5;
  CHECK_THROWS_AS(scheme_from_json(bad_rate), ConfigError);
  auto bad_type = base;
  bad_type["tax"]["type"] = "progressive";
  CHECK_THROWS_AS(scheme_from_json(bad_type), ConfigError);
  auto missing = base;
  missing["ubi"].erase("adult");
  CHECK_THROWS_AS(scheme_from_json(missing), ConfigError);
  auto bad_amount = base;
  bad_amount["ubi"]["child"] = "12.345";
  CHECK_THROWS_AS(scheme_from_json(bad_amount), ConfigError);
  auto bad_rate_word = base;
  bad_rate_word["tax"]["rate"] = "later";
  CHECK_THROWS_AS(scheme_from_json(bad_rate_word), ConfigError);
  CHECK_THROWS_AS(scheme_from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(load_scheme("no-such-scheme"), ConfigError);
}

TEST_CASE("policy json round-trips and validates") {
  const auto p = example_2017_policy();
  CHECK(policy_from_json(to_json(p)) == p);
  auto j = to_json(p);
  j["pit"]["brackets"][1]["lower"] = 0;
  CHECK_THROWS_AS(policy_from_json(j), ConfigError);
  j = to_json(p);
  j["tax_source"] = "from_columns";
  CHECK(policy_from_json(j).tax_source == TaxSource::FromColumns);
  j["ssc"]["base"] = json::array({"wages"});
  CHECK_THROWS_AS(policy_from_json(j), ConfigError);
}

TEST_CASE("synth spec json keeps defaults for missing keys") {
  const auto s = synth_spec_from_json(json::parse(R"({"n_households": 25, "income": {"log_sd": 1.1}})"));
  CHECK(s.n_households == 25);
  CHECK(s.income.log_sd == 1.1);
  CHECK(s.income.log_mean == SynthSpec{}.income.log_mean);
  const auto fixture = synth_spec_from_json(read_json_file(shipped("fixtures/calibrated_synth.json")));
  CHECK(synth_spec_from_json(to_json(fixture)).income.pareto_alpha == fixture.income.pareto_alpha);
  CHECK_THROWS_AS(read_json_file(shipped("missing.json")), ConfigError);
}
