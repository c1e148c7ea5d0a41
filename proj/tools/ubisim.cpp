#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ubisim/config_io.hpp"
#include "ubisim/engine.hpp"
#include "ubisim/error.hpp"
#include "ubisim/scenario.hpp"
#include "ubisim/service.hpp"

using namespace ubisim;

namespace {

struct SourceFlags {
  std::string data;
  std::size_t households = 0;
  std::uint64_t seed = 1;
  std::string synth_spec;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App* cmd) {
    auto* data_opt = cmd->add_option("--data", data, "Microdata CSV");
    auto* synth_opt = cmd->add_option("--synth-households", households, "Generate a synthetic population of N households");
    seed_opt = cmd->add_option("--seed", seed, "Seed for the synthetic population");
    cmd->add_option("--synth-spec", synth_spec, "SynthSpec JSON (household count and seed flags override it)");
    data_opt->excludes(synth_opt);
  }

  std::optional<SynthSpec> synth() const {
    if (households == 0 && synth_spec.empty()) return std::nullopt;
    SynthSpec spec = synth_spec.empty() ? SynthSpec{} : synth_spec_from_json(read_json_file(synth_spec));
    if (households > 0) spec.n_households = households;
    if (synth_spec.empty() || seed_opt->count() > 0) spec.seed = seed;
    return spec;
  }
  std::optional<std::string> path() const { return data.empty() ? std::nullopt : std::optional(data); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ubisim: static UBI tax-benefit microsimulation"};
  app.set_version_flag("--version", UBISIM_VERSION);
  app.require_subcommand(1);

  SourceFlags sim_source;
  std::vector<std::string> schemes;
  std::string baseline;
  std::string poverty_line;
  std::string out_dir = "out";
  std::string format = "csv";
  auto* sim = app.add_subcommand("simulate", "Solve and report one or more schemes");
  sim_source.add(sim);
  sim->add_option("--scheme", schemes, "Preset name (scheme1..scheme3) or SchemeSpec path; repeatable")->required();
  sim->add_option("--baseline", baseline, "BaselinePolicy JSON (default: built-in 2017 example)");
  sim->add_option("--poverty-line", poverty_line, "Poverty line in reais/month");
  sim->add_option("--out", out_dir, "Output directory");
  sim->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::size_t synth_households = 1000;
  std::uint64_t synth_seed = 1;
  std::string synth_spec_path;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic population CSV");
  synth->add_option("--households", synth_households, "Number of households");
  synth->add_option("--seed", synth_seed, "Seed");
  synth->add_option("--spec", synth_spec_path, "SynthSpec JSON");
  synth->add_option("--out", synth_out, "Output CSV (default: stdout)");

  SourceFlags serve_source;
  std::string serve_baseline;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the what-if HTTP service");
  serve_source.add(serve);
  serve->add_option("--baseline", serve_baseline, "BaselinePolicy JSON");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    CLI::App* cmd = &app;
    for (auto* sub : app.get_subcommands()) cmd = sub;
    std::cerr << "error: " << e.what() << "\n\n" << cmd->help();
    return kExitConfig;
  }

  try {
    if (*sim) {
      ScenarioConfig config;
      config.data_path = sim_source.path();
      config.synth = sim_source.synth();
      if (!baseline.empty()) config.baseline_path = baseline;
      config.schemes = schemes;
      if (!poverty_line.empty()) {
        try {
          config.poverty_line = Money::parse(poverty_line);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("invalid --poverty-line: " + std::string(e.what()));
        }
      }
      config.out_dir = out_dir;
      config.format = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
      return run_scenario(config, std::cout, std::cerr);
    }
    if (*synth) {
      SynthSpec spec = synth_spec_path.empty() ? SynthSpec{} : synth_spec_from_json(read_json_file(synth_spec_path));
      if (synth->count("--households")) spec.n_households = synth_households;
      if (synth->count("--seed") || synth_spec_path.empty()) spec.seed = synth_seed;
      const Population population = synth_generate(spec);
      if (synth_out.empty()) {
        write_population(std::cout, population);
      } else {
        std::ofstream out(synth_out, std::ios::binary);
        if (!out) throw IoFailure("cannot write '" + synth_out + "'");
        write_population(out, population);
        std::cerr << "wrote " << population.person_count() << " persons to " << synth_out << '\n';
      }
      return kExitOk;
    }
    if (*serve) {
      ScenarioConfig probe;
      probe.data_path = serve_source.path();
      probe.synth = serve_source.synth();
      if (probe.data_path.has_value() == probe.synth.has_value())
        throw ConfigError("exactly one data source is required (--data or --synth-households)");
      const Engine engine(load_source(probe.data_path, probe.synth),
                          load_policy(serve_baseline.empty() ? std::nullopt : std::optional(serve_baseline)));
      const Service service(engine);
      service.listen(host, port, [&](int bound, const std::function<void()>&) {
        std::cerr << "serving population " << engine.population().fingerprint_hex() << " on http://" << host << ':'
                  << bound << '\n';
      });
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: ConfigError: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "error: DataError: " << e.what() << '\n';
    return kExitData;
  } catch (const IoFailure& e) {
    std::cerr << "error: IoFailure: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
