#pragma once

// Config-driven experiment runs.
//
// A config is a flat list of `key = value` lines. '#' starts a comment,
// strings may be quoted and lists are comma separated, optionally wrapped
// in [ ]. Every key must be known to the selected experiment.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlr {

struct RunConfig {
  std::string experiment;
  std::string name;
  std::filesystem::path output_dir = ".";
  std::map<std::string, std::string> params;  // every key except the three above
};

/// Parses config text. Raises ConfigError on syntax errors, duplicate or
/// unknown keys and unknown experiments.
RunConfig parse_config(std::istream& in, const std::string& default_name = "run");

/// Reads a config file; the default output name is the file stem.
RunConfig load_config(const std::filesystem::path& path);

std::vector<std::string> experiment_names();

/// Keys accepted by an experiment besides experiment, name and output_dir.
std::vector<std::string> allowed_keys(const std::string& experiment);

/// Runs the experiment and writes <name>.csv and <name>.meta.json (some
/// experiments add further tables). Returns the written paths.
std::vector<std::filesystem::path> run_experiment(const RunConfig& cfg);

/// Loads and runs a config. Exit codes: 0 success, 2 config error,
/// 3 numerical failure. Diagnostics go to `err`.
int run(const std::filesystem::path& config, std::ostream& err,
        const std::optional<std::filesystem::path>& output_dir = std::nullopt);

}  // namespace dlr
