#include "ubisim/scenario.hpp"

#include <ostream>

#include "ubisim/config_io.hpp"
#include "ubisim/engine.hpp"
#include "ubisim/error.hpp"

namespace ubisim {

void validate(const ScenarioConfig& config) {
  if (config.data_path.has_value() == config.synth.has_value())
    throw ConfigError("exactly one data source is required (--data or --synth-households)");
  if (config.schemes.empty()) throw ConfigError("at least one --scheme is required");
  if (config.poverty_line && *config.poverty_line < Money{}) throw ConfigError("poverty line must be non-negative");
}

Population load_source(const std::optional<std::string>& data_path, const std::optional<SynthSpec>& synth) {
  if (synth) return synth_generate(*synth);
  if (!data_path) throw ConfigError("no data source");
  try {
    return load_population_file(*data_path);
  } catch (const IoFailure& e) {
    throw DataError(DataErrorKind::MalformedRow, 0, e.what());
  }
}

BaselinePolicy load_policy(const std::optional<std::string>& path) {
  if (!path) return example_2017_policy();
  return policy_from_json(read_json_file(*path));
}

int run_scenario(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    std::vector<SchemeSpec> specs;
    for (const auto& s : config.schemes) specs.push_back(load_scheme(s));
    const BaselinePolicy policy = load_policy(config.baseline_path);
    const Engine engine(load_source(config.data_path, config.synth), policy);
    const Report report = engine.report(specs, config.poverty_line);
    for (const auto& s : report.schemes) {
      out << s.spec.name << ": rate " << format_fixed(s.rates.rate * 100.0, 1) << "% (" << to_string(s.rates.method)
          << "), residual " << s.rates.exact_residual.exact_str() << " exact, " << s.rates.residual.exact_str()
          << " after rounding (reais/year)";
      if (!s.rates.within_tolerance()) out << " [outside tolerance " << s.rates.tolerance.exact_str() << "]";
      out << '\n';
    }
    for (const auto& path : serialize_report(report, config.format, config.out_dir)) out << "wrote " << path.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: ConfigError: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "error: DataError: " << e.what() << '\n';
    return kExitData;
  } catch (const InfeasibleNeutrality& e) {
    err << "error: InfeasibleNeutrality: " << e.what() << " (shortfall " << format_fixed(e.shortfall_reais(), 2)
        << " reais/year)\n";
    return kExitInfeasible;
  } catch (const IoFailure& e) {
    err << "error: IoFailure: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace ubisim
