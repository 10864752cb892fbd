#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sympopt::check {

// Debug fault injection for exercising the failure path of the suites.
enum class Fault { kNone, kGammaSign };

struct CheckOptions {
  int n_max = 3;
  std::uint64_t seed = 1;
  Fault fault = Fault::kNone;
};

struct CheckItem {
  std::string name;
  double worst = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string detail;  // worst-case seed or sample description
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckItem> items;

  bool pass() const {
    for (const auto& item : items)
      if (!item.pass) return false;
    return true;
  }
};

SuiteResult run_gradient_checks(const CheckOptions& opts);
SuiteResult run_hessian_checks(const CheckOptions& opts);
SuiteResult run_retraction_checks(const CheckOptions& opts);

// `which` is one of "gradients", "hessians", "retraction", "all". Suites may
// execute concurrently (capped by SYMPOPT_THREADS); results are returned
// sorted by suite name.
std::vector<SuiteResult> run_suites(const std::string& which, const CheckOptions& opts);

}  // namespace sympopt::check
