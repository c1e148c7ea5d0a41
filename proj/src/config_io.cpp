#include "ubisim/config_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ubisim/error.hpp"

namespace ubisim {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("invalid '" + key + "': " + why);
}

Money money_from(const json& j, const std::string& key) {
  if (j.is_string()) {
    try {
      return Money::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      bad(key, e.what());
    }
  }
  if (!j.is_number()) bad(key, "expected an amount in reais");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(key, "not finite");
  return round_half_up_centavos(static_cast<long double>(v) * 100.0L);
}

json money_to(Money m) {
  if (m.cents() % 100 == 0) return m.cents() / 100;
  return m.to_reais();
}

RateParam rate_from(const json& obj, const std::string& key) {
  if (!obj.contains(key)) bad(key, "missing (use a number or \"solve\")");
  const json& j = obj.at(key);
  if (j.is_string()) {
    if (j.get<std::string>() == "solve") return std::nullopt;
    bad(key, "the only accepted string is \"solve\"");
  }
  if (!j.is_number()) bad(key, "expected a number or \"solve\"");
  return j.get<double>();
}

json rate_to(const RateParam& r) { return r ? json(*r) : json("solve"); }

template <class T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(key, e.what());
  }
}

const json& object_at(const json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) bad(key, "missing");
  const json& j = obj.at(key);
  if (!j.is_object()) bad(key, "expected an object");
  return j;
}

BracketSchedule schedule_from(const json& j, const std::string& key, IncomeBase& base) {
  if (!j.is_object()) bad(key, "expected an object");
  if (!j.contains("brackets") || !j.at("brackets").is_array()) bad(key + ".brackets", "expected an array");
  std::vector<Bracket> brackets;
  for (const auto& b : j.at("brackets")) {
    if (!b.is_object() || !b.contains("lower") || !b.contains("rate")) bad(key + ".brackets", "entries need lower and rate");
    if (!b.at("rate").is_number()) bad(key + ".brackets.rate", "expected a number");
    brackets.push_back({money_from(b.at("lower"), key + ".brackets.lower"), b.at("rate").get<double>()});
  }
  std::optional<Money> cap;
  if (j.contains("cap") && !j.at("cap").is_null()) cap = money_from(j.at("cap"), key + ".cap");
  if (j.contains("base")) {
    if (!j.at("base").is_array()) bad(key + ".base", "expected an array of income components");
    base = IncomeBase{false, false, false};
    for (const auto& c : j.at("base")) {
      const std::string s = c.is_string() ? c.get<std::string>() : std::string();
      if (s == "market") base.market = true;
      else if (s == "pension") base.pension = true;
      else if (s == "other_benefits") base.other_benefits = true;
      else bad(key + ".base", "unknown income component '" + s + "'");
    }
  }
  return BracketSchedule(std::move(brackets), cap);
}

json schedule_to(const BracketSchedule& s, const IncomeBase& base) {
  json brackets = json::array();
  for (const auto& b : s.brackets()) brackets.push_back({{"lower", money_to(b.lower_bound)}, {"rate", b.marginal_rate}});
  json components = json::array();
  if (base.market) components.push_back("market");
  if (base.pension) components.push_back("pension");
  if (base.other_benefits) components.push_back("other_benefits");
  return {{"brackets", brackets}, {"cap", s.cap() ? money_to(*s.cap()) : json(nullptr)}, {"base", components}};
}

}  // namespace

SchemeSpec scheme_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scheme must be a JSON object");
  SchemeSpec s;
  s.name = get_or<std::string>(j, "name", "custom");
  const json& ubi = object_at(j, "ubi");
  for (const char* k : {"child", "adult", "elderly"})
    if (!ubi.contains(k)) bad(std::string("ubi.") + k, "missing");
  s.ubi.child_amount = money_from(ubi.at("child"), "ubi.child");
  s.ubi.adult_amount = money_from(ubi.at("adult"), "ubi.adult");
  s.ubi.elderly_amount = money_from(ubi.at("elderly"), "ubi.elderly");
  s.ubi.child_max_age = get_or<int>(ubi, "child_max_age", 17);
  s.ubi.elderly_min_age = get_or<int>(ubi, "elderly_min_age", 65);

  if (j.contains("offset")) {
    const json& off = object_at(j, "offset");
    s.offset.pensions_reduced_by_ubi = get_or<bool>(off, "pensions_reduced_by_ubi", true);
    s.offset.other_benefits_abolished = get_or<bool>(off, "other_benefits_abolished", true);
  }
  s.ubi_taxable = get_or<bool>(j, "ubi_taxable", false);
  if (j.contains("poverty_line")) s.poverty_line = money_from(j.at("poverty_line"), "poverty_line");

  const json& tax = object_at(j, "tax");
  const std::string type = get_or<std::string>(tax, "type", "");
  if (type == "flat") {
    s.tax = FlatTax{rate_from(tax, "rate")};
  } else if (type == "two_bracket") {
    TwoBracketTax t;
    t.lower_rate = rate_from(tax, "lower_rate");
    t.upper_rate = rate_from(tax, "upper_rate");
    if (tax.contains("threshold") && !tax.at("threshold").is_null())
      t.threshold = money_from(tax.at("threshold"), "tax.threshold");
    t.median_multiple = get_or<double>(tax, "threshold_median_multiple", 2.0);
    s.tax = t;
  } else if (type == "keep_baseline") {
    s.tax = KeepBaselineTax{};
  } else {
    bad("tax.type", "expected flat, two_bracket or keep_baseline");
  }
  validate(s);
  return s;
}

json to_json(const SchemeSpec& s) {
  json tax;
  if (const auto* flat = std::get_if<FlatTax>(&s.tax)) {
    tax = {{"type", "flat"}, {"rate", rate_to(flat->rate)}};
  } else if (const auto* two = std::get_if<TwoBracketTax>(&s.tax)) {
    tax = {{"type", "two_bracket"},
           {"lower_rate", rate_to(two->lower_rate)},
           {"upper_rate", rate_to(two->upper_rate)},
           {"threshold", two->threshold ? money_to(*two->threshold) : json(nullptr)},
           {"threshold_median_multiple", two->median_multiple}};
  } else {
    tax = {{"type", "keep_baseline"}};
  }
  return {{"name", s.name},
          {"ubi",
           {{"child", money_to(s.ubi.child_amount)},
            {"adult", money_to(s.ubi.adult_amount)},
            {"elderly", money_to(s.ubi.elderly_amount)},
            {"child_max_age", s.ubi.child_max_age},
            {"elderly_min_age", s.ubi.elderly_min_age}}},
          {"offset",
           {{"pensions_reduced_by_ubi", s.offset.pensions_reduced_by_ubi},
            {"other_benefits_abolished", s.offset.other_benefits_abolished}}},
          {"ubi_taxable", s.ubi_taxable},
          {"poverty_line", money_to(s.poverty_line)},
          {"tax", tax}};
}

BaselinePolicy policy_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("baseline policy must be a JSON object");
  BaselinePolicy p;
  p.label = get_or<std::string>(j, "label", "custom");
  const std::string source = get_or<std::string>(j, "tax_source", "from_schedules");
  if (source == "from_schedules") p.tax_source = TaxSource::FromSchedules;
  else if (source == "from_columns") p.tax_source = TaxSource::FromColumns;
  else bad("tax_source", "expected from_schedules or from_columns");
  if (!j.contains("pit")) bad("pit", "missing");
  if (!j.contains("ssc")) bad("ssc", "missing");
  p.pit = schedule_from(j.at("pit"), "pit", p.pit_base);
  p.ssc = schedule_from(j.at("ssc"), "ssc", p.ssc_base);
  return p;
}

json to_json(const BaselinePolicy& p) {
  return {{"label", p.label},
          {"tax_source", p.tax_source == TaxSource::FromColumns ? "from_columns" : "from_schedules"},
          {"pit", schedule_to(p.pit, p.pit_base)},
          {"ssc", schedule_to(p.ssc, p.ssc_base)}};
}

SynthSpec synth_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("synthesis spec must be a JSON object");
  SynthSpec s;
  const auto n = get_or<long long>(j, "n_households", static_cast<long long>(s.n_households));
  if (n < 1) bad("n_households", "must be >= 1");
  s.n_households = static_cast<std::size_t>(n);
  s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
  if (j.contains("ages")) {
    const json& a = object_at(j, "ages");
    s.ages.children = get_or<double>(a, "children", s.ages.children);
    s.ages.working_age = get_or<double>(a, "working_age", s.ages.working_age);
    s.ages.elderly = get_or<double>(a, "elderly", s.ages.elderly);
  }
  s.household_size = get_or<std::vector<double>>(j, "household_size", s.household_size);
  s.elderly_partner_rate = get_or<double>(j, "elderly_partner_rate", s.elderly_partner_rate);
  s.weight_min = get_or<double>(j, "weight_min", s.weight_min);
  s.weight_max = get_or<double>(j, "weight_max", s.weight_max);
  if (j.contains("income")) {
    const json& in = object_at(j, "income");
    auto& p = s.income;
#define UBISIM_FIELD(name) p.name = get_or<double>(in, #name, p.name)
    UBISIM_FIELD(employment_rate);
    UBISIM_FIELD(elderly_employment_rate);
    UBISIM_FIELD(log_mean);
    UBISIM_FIELD(log_sd);
    UBISIM_FIELD(pareto_share);
    UBISIM_FIELD(pareto_alpha);
    UBISIM_FIELD(elderly_pension_rate);
    UBISIM_FIELD(working_pension_rate);
    UBISIM_FIELD(pension_log_mean);
    UBISIM_FIELD(pension_log_sd);
    UBISIM_FIELD(minimum_pension);
    UBISIM_FIELD(family_benefit_per_child);
    UBISIM_FIELD(family_benefit_base);
    UBISIM_FIELD(family_benefit_line);
    UBISIM_FIELD(family_benefit_takeup);
    UBISIM_FIELD(unemployment_benefit_rate);
    UBISIM_FIELD(unemployment_benefit_amount);
#undef UBISIM_FIELD
  }
  return s;
}

json to_json(const SynthSpec& s) {
  const auto& p = s.income;
  return {{"n_households", s.n_households},
          {"seed", s.seed},
          {"ages", {{"children", s.ages.children}, {"working_age", s.ages.working_age}, {"elderly", s.ages.elderly}}},
          {"household_size", s.household_size},
          {"elderly_partner_rate", s.elderly_partner_rate},
          {"weight_min", s.weight_min},
          {"weight_max", s.weight_max},
          {"income",
           {{"employment_rate", p.employment_rate},
            {"elderly_employment_rate", p.elderly_employment_rate},
            {"log_mean", p.log_mean},
            {"log_sd", p.log_sd},
            {"pareto_share", p.pareto_share},
            {"pareto_alpha", p.pareto_alpha},
            {"elderly_pension_rate", p.elderly_pension_rate},
            {"working_pension_rate", p.working_pension_rate},
            {"pension_log_mean", p.pension_log_mean},
            {"pension_log_sd", p.pension_log_sd},
            {"minimum_pension", p.minimum_pension},
            {"family_benefit_per_child", p.family_benefit_per_child},
            {"family_benefit_base", p.family_benefit_base},
            {"family_benefit_line", p.family_benefit_line},
            {"family_benefit_takeup", p.family_benefit_takeup},
            {"unemployment_benefit_rate", p.unemployment_benefit_rate},
            {"unemployment_benefit_amount", p.unemployment_benefit_amount}}}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

SchemeSpec load_scheme(const std::string& name_or_path) {
  for (const auto& name : preset_names())
    if (name == name_or_path) return preset(name);
  if (!std::filesystem::exists(name_or_path))
    throw ConfigError("scheme '" + name_or_path + "' is neither a preset nor an existing file");
  return scheme_from_json(read_json_file(name_or_path));
}

}  // namespace ubisim
