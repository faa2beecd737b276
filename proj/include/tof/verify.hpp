#ifndef TOF_VERIFY_HPP
#define TOF_VERIFY_HPP

#include <string>
#include <vector>

// Self-contained validation battery: propagates a reduced-scale
// configuration with the split-step stepper and compares it against the
// closed-form state, plus internal consistency checks (current
// decomposition, phase identities, continuity convergence).
//
// Quick mode shortens the propagation and relaxes the comparison
// thresholds tenfold; it is meant for CI smoke runs.  Tamper mode
// deliberately scales the analytic reference by 1 + 1e-3 so the
// comparison provably can fail; it exists as a negative control and is
// reached through the TOF_VERIFY_TAMPER environment variable.

namespace tof {

struct VerifyCheck {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerifyReport {
    bool quick = false;
    bool tampered = false;
    std::vector<VerifyCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return !checks.empty();
    }
};

VerifyReport run_verification(bool quick, bool tamper);

}  // namespace tof

#endif  // TOF_VERIFY_HPP
