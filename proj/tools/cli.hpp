#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parcpt/core.hpp"
#include "parcpt/simbench.hpp"

namespace parcpt::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kInputError = 2,
  kConfigError = 3,
};

/// Settings shared by `simulate` and `bench`, after merging the optional
/// key=value file with command-line flags (flags win).
struct RunConfig {
  ScenarioId scenario = ScenarioId::A;
  std::vector<Index> ns;
  std::vector<double> deltas;
  std::vector<Method> methods;
  std::vector<Index> workers;
  std::optional<Index> overlap;
  std::optional<std::vector<double>> proportions;
  Index reps = 200;
  std::uint64_t seed = 1;
  double epsilon = 0.05;
  double noise_sd = 1.0;
  Index min_segment_length = 1;
  int timing_repeats = 3;
  std::filesystem::path out = ".";
};

/// Builds a RunConfig from normalised keys (see `read_key_values`). Missing
/// keys take the command's defaults. Throws InvalidConfig.
RunConfig make_run_config(const std::map<std::string, std::string>& values, bool bench);

/// Entry point; argv[0] is the program name. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parcpt::cli
