#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "ecnf2mip/theory.hpp"

namespace ecnf2mip {

// Total assignment over a theory's atoms and integer variables.
struct Assignment {
    std::vector<char> atom;    // indexed by atom id
    std::vector<Int> int_var;  // indexed by int var id

    bool operator==(const Assignment&) const = default;
};

struct OracleOutcome {
    std::vector<Assignment> models;
    std::optional<Int> optimum;  // present iff sat and the theory has an objective
    bool sat = false;
};

struct SpaceTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WfmResult {
    bool total = false;
    std::vector<char> value;  // indexed by atom id; meaningful for heads of d
    std::vector<int> depth;   // derivation round of each true head, 1-based
};

// Parametrized well-founded model of one definition, given values for every
// non-head atom occurring in its bodies (alternating fixpoint). When the
// model is not total, `value`/`depth` only cover the decided heads.
WfmResult well_founded_model(const Theory& t, const Definition& d,
                             const std::vector<char>& atom_values);

// True iff every constraint holds under `a` and each definition's
// well-founded model is total and matches `a` on its heads.
bool is_model(const Theory& t, const Assignment& a);

Int objective_value(const Theory& t, const Assignment& a);

inline constexpr Int kDefaultSpaceLimit = Int(1) << 20;

// Full enumeration over open atoms and integer boxes; defined atoms are
// derived, not enumerated (heads of cyclically dependent definitions fall
// back to enumeration). Throws SpaceTooLargeError past the guard rail.
OracleOutcome enumerate_models(const Theory& t, Int space_limit = kDefaultSpaceLimit);

struct BruteForceResult {
    bool sat = false;
    std::optional<Int> optimum;
};

BruteForceResult brute_force_optimum(const Theory& t, Int space_limit = kDefaultSpaceLimit);

}  // namespace ecnf2mip
