#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/domain.hpp"

namespace momentkit::cli {

enum ExitCode : int {
  kPass = 0,
  kMathFailure = 1,
  kInputError = 2,
  kBudgetExceeded = 3,
};

/// Settings shared by every subcommand. All randomness derives from `seed`.
struct RunConfig {
  long long rank = 2;
  long long order = 3;
  /// Empty means (0,1)^rank.
  std::vector<Interval> box;
  long long samples = 12;
  std::uint64_t seed = 0;
  double tol = Domain::kDefaultTolerance;
  long long budget = 20;
  long long probes = 50;
  long long max_support = -1;
};

/// Throws InvalidArgument when r < 1, N < 0, tol <= 0, samples < 8, or the box
/// does not have r intervals.
void validate(const RunConfig& config);

/// MOMENT_LEIBNIZ_SEED, when set to an unsigned integer, replaces config.seed.
/// Returns false if the variable is set but malformed.
bool apply_env_overrides(RunConfig& config);

nlohmann::json config_json(const RunConfig& config);
/// FNV-1a over the compact JSON dump of the config.
std::string config_hash(const RunConfig& config);

struct CommandResult {
  int exit_code = kPass;
  nlohmann::json report;
};

CommandResult cmd_verify_leibniz(const RunConfig& config);
CommandResult cmd_verify_family(const RunConfig& config, const nlohmann::json& descriptor);
CommandResult cmd_search_supports(const RunConfig& config);

struct SemigroupOptions {
  std::vector<double> lambdas = {0.0, 1.0};
  long long sweep = 3;
  bool tamper = false;
};

CommandResult cmd_verify_semigroup(const RunConfig& config, const SemigroupOptions& options = {});

/// Emits a random_valid_family for `support` (a JSON list of indices), or for
/// every index with 2|alpha| > N when absent.
CommandResult cmd_gen_family(const RunConfig& config, const std::optional<nlohmann::json>& support);

/// Reads `text` as inline JSON if it starts with '{' or '[', else as a file path.
nlohmann::json load_json_argument(const std::string& text);

/// Deterministic rendering used for stdout and --out files.
std::string render(const nlohmann::json& report);

}  // namespace momentkit::cli
