#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace patmat::cli {

/// Fully resolved options of one invocation. Defaults apply to keys given
/// neither on the command line nor in a --config file.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> patterns;  // preset names or files, one per letter (or one for all)
  std::string word;
  std::size_t size = 0;
  std::vector<std::size_t> sizes;
  std::size_t trials = 20;
  std::size_t samples = 100000;
  std::size_t grid = 0;
  std::string dist = "gaussian-real";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::size_t word_cap = 12;
  double oracle_budget = 1e7;
  double grid_budget = 1e7;
  unsigned supersample = 1;
  unsigned threads = 0;  // not echoed: results do not depend on it
  std::size_t probes = 0;
  std::size_t colors = 0;
  bool dump = false;
  std::string spec;
  std::size_t spectrum_max = 5000;
};

/// JSON text of the resolved configuration, as echoed in every output.
std::string config_json(const RunConfig& config);

/// Builds a config from a JSON object (keys as in config_json, plus
/// "subcommand" and "threads").
RunConfig config_from_json(const std::string& text);

/// Executes one subcommand. Output goes to config.out when set, else `out`.
/// Returns the process exit status: 0 ok, 1 validation, 2 budget exceeded,
/// 3 numerical failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand, flags, optional --config FILE whose values the
/// flags override) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace patmat::cli
