#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace cflow {

/// Command-line configuration. Exit contract: 0 success, 1 certificate or
/// audit failure, 2 input error (unreadable file, incompatible
/// algorithm/instance, oracle cap exceeded with the oracle requested).
struct RunConfig {
  std::string command;          // solve | verify | reduce | bench
  std::string input_path;
  std::string algo = "scaling"; // simple | scaling | concave
  double eps = 0.0625;
  std::string audit = "every";  // every | scale | off
  bool oracle = false;
  bool trace = false;
  std::string output_path;      // empty writes to stdout
  std::uint64_t seed = 1;

  // reduce
  std::string reduce_kind;      // assignment|chain|schedule|mincost|multisource
  bool reduce_solve = false;

  // bench
  int bench_count = 20;
  std::string bench_kind = "linear";  // linear|unit|signed|pwl|quad
  int bench_jobs = 1;
};

/// Executes the configured pipeline. Deterministic payload goes to `out`
/// (or the output path); diagnostics and timings go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// argv front end over run().
int main_cli(int argc, const char* const* argv);

}  // namespace cflow
