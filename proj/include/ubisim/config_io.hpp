#pragma once

#include <string>

#include "json.hpp"
#include "ubisim/baseline_policy.hpp"
#include "ubisim/microdata.hpp"
#include "ubisim/reform.hpp"

namespace ubisim {

// JSON documents; see docs/schemas.md. Parsing throws ConfigError with the
// offending key in the message.

SchemeSpec scheme_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SchemeSpec& spec);

BaselinePolicy policy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BaselinePolicy& policy);

// Missing keys keep the SynthSpec defaults.
SynthSpec synth_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthSpec& spec);

nlohmann::json read_json_file(const std::string& path);

// A preset name ("scheme1".."scheme3") or a path to a SchemeSpec file.
SchemeSpec load_scheme(const std::string& name_or_path);

}  // namespace ubisim
