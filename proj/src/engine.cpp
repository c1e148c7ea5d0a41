#include "ubisim/engine.hpp"

#include <array>

#include "ubisim/distribution.hpp"

namespace ubisim {

using nlohmann::json;

Engine::Engine(Population population, BaselinePolicy policy)
    : population_(std::move(population)), policy_(std::move(policy)),
      baseline_(baseline_disposable(population_, policy_)) {}

SolvedScheme Engine::solve(const SchemeSpec& spec) const { return solve_scheme(population_, baseline_, spec); }

Report Engine::report(std::span<const SchemeSpec> specs, std::optional<Money> line) const {
  std::vector<SolvedScheme> solved;
  solved.reserve(specs.size());
  for (const auto& spec : specs) solved.push_back(solve(spec));
  const Money poverty_line = line ? *line : specs.empty() ? Money::reais(406) : specs.front().poverty_line;
  return build_report(population_, baseline_, solved, poverty_line);
}

json Engine::simulate(const SchemeSpec& spec, std::optional<Money> line) const {
  const std::array<SchemeSpec, 1> specs = {spec};
  return simulate_response_json(report(specs, line), 0);
}

json Engine::baseline_summary(Money line) const {
  const auto view = make_view(population_, baseline_);
  const auto& t = baseline_.totals;
  json poverty = json::object();
  for (AgeGroup g : {AgeGroup::All, AgeGroup::Children, AgeGroup::WorkingAge, AgeGroup::Elderly}) {
    const auto h = poverty_headcount(view, line, IncomeSide::Baseline, g);
    poverty[to_string(g)] = h ? json(*h) : json(nullptr);
  }
  const auto summary = population_.summary();
  return {{"population_fingerprint", population_.fingerprint_hex()},
          {"provenance", population_.provenance().str()},
          {"persons", summary.rows},
          {"households", summary.households},
          {"total_weight", summary.total_weight},
          {"policy", policy_.label},
          {"budget",
           {{"unit", "reais/year"},
            {"initial_income", t.market.to_reais()},
            {"current_transfers", t.transfers().to_reais()},
            {"pensions", t.pensions.to_reais()},
            {"other_transfers", t.other_transfers.to_reais()},
            {"current_tax_revenue", t.taxes().to_reais()},
            {"personal_income_tax", t.pit.to_reais()},
            {"employee_ssc", t.ssc.to_reais()},
            {"current_disposable", t.disposable.to_reais()}}},
          {"poverty", {{"line", line.to_reais()}, {"headcount", poverty}}},
          {"gini", weighted_gini(view.pc_baseline, view.weight)}};
}

json infeasible_json(const InfeasibleNeutrality& e) {
  const double rate = e.required_rate();
  return {{"error", "InfeasibleNeutrality"},
          {"message", e.what()},
          {"required_rate", std::isfinite(rate) ? json(rate) : json(nullptr)},
          {"shortfall_reais", e.shortfall_reais()}};
}

}  // namespace ubisim
