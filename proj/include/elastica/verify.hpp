#ifndef ELASTICA_VERIFY_HPP
#define ELASTICA_VERIFY_HPP

#include <string>
#include <vector>

namespace elastica {

// Built-in self checks, runnable from the command line.
//   level 1: closed-form layer (classification lattice, amplitude laws,
//            criticality roots, case boundaries)
//   level 2: discretization layer (round-state residual, Jacobian vs finite
//            differences, second-order consistency)
//   level 3: end-to-end (onset direction and amplitude law on the presets,
//            reflection symmetry of solved states)
// Levels accumulate: verify(2) runs 1 and 2.
struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    int level = 0;
    std::vector<VerifyCheck> checks;
    bool all_passed() const;
};

VerifyReport verify(int level);

std::string report_to_json(const VerifyReport& report);

} // namespace elastica

#endif
