// Acceptance gate: runs the ten cross-validation criteria in a fixed order
// and prints exactly one [PASS]/[FAIL] line per criterion, then a summary.
// Exit status is 0 iff every criterion passed.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "aqrm/validate.hpp"

int main() {
    using aqrm::validate::CheckResult;
    const std::vector<std::function<CheckResult()>> criteria = {
        aqrm::validate::criterion_closed_form_delta0,
        aqrm::validate::criterion_closed_form_g0,
        aqrm::validate::criterion_series_vs_oracle,
        aqrm::validate::criterion_trotter_convergence,
        aqrm::validate::criterion_eps_parity,
        aqrm::validate::criterion_z2_identities,
        aqrm::validate::criterion_zeta_consistency,
        aqrm::validate::criterion_zeta_residue,
        aqrm::validate::criterion_weyl_law,
        aqrm::validate::criterion_self_consistency,
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        CheckResult r;
        try {
            r = criteria[i]();
        } catch (const std::exception& e) {
            r.name = "criterion-" + std::to_string(i + 1);
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (!r.passed) ++failed;
        std::printf("[%s] %02zu %-24s metric=%-12.4g bound=%-10.3g time=%6.2fs  %s\n",
                    r.passed ? "PASS" : "FAIL", i + 1, r.name.c_str(), r.metric,
                    r.tolerance, r.seconds, r.detail.c_str());
        std::fflush(stdout);
    }

    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
