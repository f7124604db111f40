#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dysmooth {

enum class Command { analyze, certify, cascade, verify };
enum class OutputFormat { json, csv, svg };

struct LevelRange {
  int lo = 0;
  int hi = 0;
};
/// "a..b" (inclusive) or a single level "a".
LevelRange parse_level_range(const std::string& text);

struct RunConfig {
  Command command = Command::analyze;
  // exactly one of function / input
  std::optional<std::string> function;
  std::optional<std::string> input;
  // catalog parameters
  int axis = 1;  ///< 1-based
  std::vector<double> center{0.5};
  double alpha = 1.0;
  std::vector<std::string> terms;  ///< poly terms "coef:e1,e2,..."
  double a = 0.5;
  double b = 3.0;
  int m = 12;

  LevelRange r{2, 2};
  int d = 1;
  LevelRange n{2, 10};
  std::string weighting = "theorem";
  std::uint64_t seed = 1;
  int dirs = 64;
  int base_res = 64;
  int dir_res = 64;
  // cascade
  std::vector<double> u;
  int i = 1;  ///< 1-based axis of the difference
  double t = 0.0;
  int stages = 4;

  OutputFormat format = OutputFormat::json;
  std::optional<std::string> out;
};

/// Parses argv into a RunConfig. Returns nullopt when help was printed.
/// Throws a validation Error on bad arguments.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Executes the command; writes the artifact to config.out or `out`.
void run(const RunConfig& config, std::ostream& out);

/// Full entry point: parse, run, map failures to exit statuses
/// (0 ok, 2 validation, 3 capacity, 4 invariant) with one JSON line on `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dysmooth
