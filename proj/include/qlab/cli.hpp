#ifndef QLAB_CLI_HPP
#define QLAB_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qlab {

// One randomized property inside a verify suite: how many trials passed, the
// worst residual seen against the fixed threshold, and a reproduction config
// for every failing trial.
struct property_result {
  std::string name;
  int trials = 0;
  int passes = 0;
  double worst_residual = 0.0;
  double threshold = 0.0;
  std::vector<std::string> counterexamples;

  bool passed() const { return passes == trials; }
};

struct suite_result {
  std::string suite;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<property_result> properties;

  bool passed() const;
};

// Suites runnable individually; "all" concatenates them in this order.
const std::vector<std::string>& verify_suite_names();

// Executes `trials` randomized instances of every property in the suite.
// Throws error for an unknown suite name or trials < 1.
suite_result run_verify_suite(const std::string& suite, int trials,
                              std::uint64_t seed);

// Full command-line entry point, callable in-process for tests. Returns the
// process exit status: 0 all checks passed, 1 a check or property failed
// (artifacts are still written), 2 usage or configuration error.
int run_main(const std::vector<std::string>& args);
int run_main(int argc, const char* const* argv);

}  // namespace qlab

#endif
