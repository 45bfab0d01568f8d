#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace flrdt {

// Reads TOML (.toml) or JSON (anything else). A manifest written by run_job is
// accepted too: its "config" member is returned, so results can be regenerated from it.
// Relative fixture paths are resolved against the config file's directory.
nlohmann::json load_config(const std::string& path);

// "a.b.c=value"; value parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& config, const std::string& assignment);

// Checks types, ranges and unknown keys, fills every default, and requires a seed
// for stochastic tasks. Throws ConfigError whose message starts with a JSON pointer.
nlohmann::json validate_config(const nlohmann::json& raw);

struct JobResult {
    int exit_code = 0; // 0 ok, 2 completed but flagged, 1 error
    std::vector<std::string> files;
    std::string message;
};

// Validates, runs the task and writes its result files plus manifest.json into out_dir.
// format: "csv" (tables as CSV, traces as JSON) or "json" (everything as JSON).
// Schema errors return exit code 1 before anything is written.
JobResult run_job(const nlohmann::json& config, const std::string& out_dir, const std::string& format = "csv");

} // namespace flrdt
