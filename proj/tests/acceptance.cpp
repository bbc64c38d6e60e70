// Runs every acceptance check at its pinned tolerance and prints one
// pass/fail line per criterion.  Exit code is the number of failures.
#include <cstdio>
#include <iostream>

#include "fmcm/config.hpp"
#include "fmcm/verify.hpp"

int main() {
    fmcm::VerifyConfig cfg;
    const std::vector<fmcm::CheckResult> results = fmcm::run_all_suites(cfg);
    fmcm::print_check_results(std::cout, results);

    int failures = 0;
    for (const fmcm::CheckResult& r : results) {
        if (!r.pass) ++failures;
    }
    std::printf("%zu/%zu criteria passed\n", results.size() - failures,
                results.size());
    return failures;
}
