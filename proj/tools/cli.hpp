#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace fraclap::cli {

using nlohmann::json;

/// Values given on the command line; they win over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_n;
  std::optional<double> alpha;
  std::optional<double> half_extent;
  std::optional<std::string> input;
};

/// Fully populated default config for a subcommand (apply, gl, exhaust, verify, bench).
json default_config(const std::string& subcommand);

/// defaults <- config file <- overrides. Unknown keys are rejected.
json resolve_config(const std::string& subcommand, const std::string& config_path, const Overrides& overrides);

int cmd_apply(const json& cfg, const std::filesystem::path& out);
int cmd_gl(const json& cfg, const std::filesystem::path& out);
int cmd_exhaust(const json& cfg, const std::filesystem::path& out);
int cmd_verify(const json& cfg, const std::filesystem::path& out);
int cmd_bench(const json& cfg, const std::filesystem::path& out);

/// Writes manifest.json, dispatches, and maps exceptions to exit codes
/// (2 validation, 1 numerical). Messages go to stderr.
int execute(const std::string& subcommand, const json& cfg, const std::filesystem::path& out);

int run(int argc, char** argv);

}  // namespace fraclap::cli
