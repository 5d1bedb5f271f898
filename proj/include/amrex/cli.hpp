#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amrex/errors.hpp"

namespace amrex::cli {

// Bad flags or values; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Settings shared by every subcommand. Precedence, lowest first: built-in
// defaults, `--config` file (key=value lines), AMREX_<KEY> environment
// variables, command-line flags.
struct RunConfig {
  std::string dataset = "fever";
  std::optional<double> lambda;  // unset: per-dataset default, see effective_lambda
  std::string select = "accuracy";
  int restarts = 4;
  std::uint64_t seed = 0;
  bool include_top = true;
  std::string top_match = "root";
  std::string backend = "hash";
  std::string empty_evidence = "error";
  std::string question_mode = "answer-only";
  bool strict = true;
  unsigned jobs = 0;  // 0: available parallelism
  double entailment_threshold = 0.6;
};

// Keys accepted in config files and as AMREX_<KEY> (upper case, '-' -> '_').
const std::vector<std::string>& config_keys();

// Throws UsageError for an unknown key or unparseable value.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Reads key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

// FEVER 0; AVeriTeC 0.9 when selecting for accuracy, 0 for macro F1.
double effective_lambda(const RunConfig& cfg);

std::string describe(const RunConfig& cfg);

// Runs one subcommand. args[0] is the program name. Returns the exit code:
// 0 success, 1 domain error, 2 usage error. Data goes to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amrex::cli
