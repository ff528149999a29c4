#pragma once

// Command-line front end. Everything the `qcap` binary does goes through run_cli so it can be
// driven in-process by tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcap/rational.hpp"

namespace qcap {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 2;
inline constexpr int usage = 64;
inline constexpr int data = 65;
inline constexpr int dimension = 70;
}  // namespace exit_code

/// Runs one invocation. `args` excludes the program name. The report goes to `out`,
/// diagnostics and progress to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Rounds to 9 significant digits, the precision of every float the CLI prints.
double round_sig9(double x);
std::string format_sig9(double x);

// ---------------------------------------------------------------------------
// Property suites behind `qcap verify`.

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 200;           // random states / ensembles per sampled property
  std::size_t mc_samples = 200000;     // Haar Monte Carlo draws
  std::optional<int> n;                // lower-bound suite; unset runs the default grid
  std::size_t d = 2;
  Rational p{1, 4};
  std::optional<int> uses;
  std::size_t threads = 1;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double value = 0;
  double reference = 0;
  double tolerance = 0;
  nlohmann::json details = nlohmann::json::object();
};

/// Suite names accepted by run_verify_suite.
const std::vector<std::string>& verify_suite_names();

/// Runs "lemma1", "lemma2-appendix", "lemma3", "lower-bound" or "all". Progress lines go to
/// `progress`. Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_verify_suite(const std::string& suite, const VerifyOptions& opts,
                                          std::ostream& progress);

}  // namespace qcap
