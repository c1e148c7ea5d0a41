#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ubisim/baseline_policy.hpp"
#include "ubisim/microdata.hpp"
#include "ubisim/money.hpp"
#include "ubisim/reporting.hpp"

namespace ubisim {

// Exactly one of data_path / synth.
struct ScenarioConfig {
  std::optional<std::string> data_path;
  std::optional<SynthSpec> synth;
  std::optional<std::string> baseline_path;  // default: example_2017_policy()
  std::vector<std::string> schemes;          // preset names or SchemeSpec paths
  std::optional<Money> poverty_line;
  std::filesystem::path out_dir = "out";
  ReportFormat format = ReportFormat::Csv;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitData = 2,
  kExitInfeasible = 3,
  kExitIo = 4,
  kExitInternal = 5,
};

// Throws ConfigError.
void validate(const ScenarioConfig& config);

// Throws DataError (an unreadable file is reported as MalformedRow at row 0).
Population load_source(const std::optional<std::string>& data_path, const std::optional<SynthSpec>& synth);
BaselinePolicy load_policy(const std::optional<std::string>& path);

// Runs the whole pipeline and writes the report. Progress goes to `out`,
// one diagnostic line per failure to `err`.
int run_scenario(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ubisim
