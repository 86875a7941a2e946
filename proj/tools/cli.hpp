#pragma once

// Command-line front end. The whole program lives here so tests can drive it
// in-process; main() only forwards argv.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace finsler::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitVerifyFailed = 3;

enum class Command { geodesic, exp, log, distance, verify, spectral, compare };
enum class Format { json, csv };

/// Parsed command line. Matrix fields hold the raw argument text (an inline
/// JSON literal, "identity" or "zero") or a file path.
struct RunSpec {
  Command command = Command::geodesic;
  int p = 2;
  std::optional<int> N;
  std::string g0 = "identity";
  std::string v0;
  std::string g1;
  std::string g0_file;
  std::string v0_file;
  std::string g1_file;
  double T = 1.0;
  double step = 1e-3;
  bool adaptive = false;
  std::uint64_t seed = 0;
  int trials = 10;
  std::string case_name = "all";
  std::string output;
  Format format = Format::json;
  std::string stream = "g";
  bool with_trajectory = false;
  int max_iters = 50;
  int restarts = 4;
};

/// Parses argv-style arguments (args[0] is the program name) and runs the
/// command. Results go to `out` or the --output file; error objects go to
/// `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs an already parsed spec.
int execute(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Worker count for verify: FINSLER_GL_THREADS when set, else hardware
/// concurrency, never more than `jobs`.
unsigned worker_count(unsigned jobs);

}  // namespace finsler::cli
