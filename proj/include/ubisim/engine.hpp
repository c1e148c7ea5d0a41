#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ubisim/baseline_policy.hpp"
#include "ubisim/microdata.hpp"
#include "ubisim/neutrality.hpp"
#include "ubisim/reform.hpp"
#include "ubisim/reporting.hpp"

namespace ubisim {

// A loaded population with its baseline, shared read-only by the CLI and
// the HTTP service. All member functions are const and thread-safe.
class Engine {
 public:
  Engine(Population population, BaselinePolicy policy);

  const Population& population() const { return population_; }
  const BaselinePolicy& policy() const { return policy_; }
  const BaselineResult& baseline() const { return baseline_; }

  SolvedScheme solve(const SchemeSpec& spec) const;

  // Poverty line: `line` if given, else the first scheme's.
  Report report(std::span<const SchemeSpec> specs, std::optional<Money> line = std::nullopt) const;

  // SimulateResponse document for one scheme.
  nlohmann::json simulate(const SchemeSpec& spec, std::optional<Money> line = std::nullopt) const;

  // Baseline aggregates, poverty by age group and Gini.
  nlohmann::json baseline_summary(Money line = Money::reais(406)) const;

 private:
  Population population_;
  BaselinePolicy policy_;
  BaselineResult baseline_;
};

nlohmann::json infeasible_json(const InfeasibleNeutrality& e);

}  // namespace ubisim
