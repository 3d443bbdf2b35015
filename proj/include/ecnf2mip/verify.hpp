#pragma once

#include <string>
#include <vector>

#include "ecnf2mip/bnb.hpp"
#include "ecnf2mip/linearize.hpp"
#include "ecnf2mip/oracle.hpp"

namespace ecnf2mip {

// Extends a model of the theory to a full point of the translated MIP by
// giving every auxiliary column the value its defining semantics dictates
// (equality splits from the sum value, witnesses from a fired disjunct,
// conditional copies from their guard, levels from derivation depth).
std::vector<double> build_witness(const Theory& t, const MipModel& model, const Assignment& a);

struct VerifyReport {
    bool optimum_equal = false;
    bool soundness = false;
    bool completeness = false;
    std::string detail;

    bool all_passed() const { return optimum_equal && soundness && completeness; }
};

// Cross-checks encoder plus solver against the brute-force oracle:
//  - optimum equality (status and objective of oracle vs branch-and-bound),
//  - soundness (assignments rejected by the oracle admit no integral
//    extension of the MIP, and model assignments admit none that flips a
//    defined atom),
//  - completeness (every oracle model's witness point is feasible).
// The model is a parameter so corrupted translations can be checked too.
VerifyReport verify_translation(const Theory& t, const MipModel& model,
                                const SolveLimits& limits = {},
                                Int space_limit = kDefaultSpaceLimit);

}  // namespace ecnf2mip
