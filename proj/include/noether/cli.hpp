#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace noether::cli {

enum class Command { derive, verify, flow, action, integrability, catalog };
enum class Format { json, csv };

struct RunConfig {
  Command command = Command::catalog;
  std::optional<std::string> system;       // builtin name
  std::optional<std::string> system_file;  // JSON system spec
  std::vector<std::string> integrals;      // names or expression text
  std::vector<std::string> points;         // "t,q1..qn,p1..pn"
  double step = 1e-3;
  double duration = 1.0;
  double s = 0.01;
  double tol = 1e-9;            // verify: symmetry residuals
  double bracket_tol = 1e-6;    // integrability
  double invariance_tol = 1e-8;
  double sv_tol = 1e-8;
  double min_rho = 1e-3;
  std::uint64_t seed = 1;
  std::size_t samples = 20;
  std::optional<std::size_t> r;  // commuting subset size for integrability
  std::optional<std::string> output;
  Format format = Format::json;
  bool list = false;
  std::optional<std::string> export_name;
};

/// Parses argv into `config`. Returns an exit code when the process should
/// stop (help, usage errors); NOETHER_SEED overrides --seed.
std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config,
                                      std::ostream& out, std::ostream& err);

/// Executes the command. Exit codes: 0 success, 2 tolerance violation, 1 error
/// (reported on `err` as a JSON object).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace noether::cli
