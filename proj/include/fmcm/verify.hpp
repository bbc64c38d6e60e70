#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fmcm/config.hpp"

namespace fmcm {

/**
 * One verification check: pass/fail, the signed headroom against the
 * check's threshold (nonnegative exactly when passing), measured values in
 * detail, and wall-clock runtime.  Checks that share one expensive
 * computation report the shared runtime.
 */
struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
    double seconds = 0.0;
};

/// Gradient bound, concavity, viscous-eikonal identity, and operator sign
/// of phi_star over randomized measures and sample points (one shared pass).
std::vector<CheckResult> run_subsolution_suite(const VerifyConfig& cfg);

/// Cone profile expansion coefficients, cone-vs-subsolution matching with
/// the reference constant, and the aperture-angle asymptotics.
std::vector<CheckResult> run_cone_suite(const VerifyConfig& cfg);

/// Scaled remainder of the concentration asymptotics over a radius table.
std::vector<CheckResult> run_laplace_suite(const VerifyConfig& cfg);

/// Dirichlet solves sandwiched between phi_star and the plane envelope,
/// gap decay with edge distance, and the two-initial-guess uniqueness probe.
std::vector<CheckResult> run_sandwich_suite(const VerifyConfig& cfg);

/// All suites, ordered as the acceptance list.
std::vector<CheckResult> run_all_suites(const VerifyConfig& cfg);

/// One aligned "[PASS]/[FAIL] name margin detail [time]" line per check.
void print_check_results(std::ostream& os, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace fmcm
