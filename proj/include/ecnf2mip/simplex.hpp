#pragma once

#include <stdexcept>
#include <vector>

#include "ecnf2mip/mip_model.hpp"

namespace ecnf2mip {

struct LpOptions {
    double feas_tol = 1e-7;
    double cost_tol = 1e-7;
    double pivot_tol = 1e-10;
    int max_iters = 200000;
    // consecutive degenerate steps before switching to Bland's rule
    int degeneracy_limit = 30;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> point;  // structural columns only, sized like model.columns
    double objective = 0;       // includes the model's objective constant
    int iterations = 0;
};

struct NumericBreakdownError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Primal simplex over the LP relaxation with the given column bounds
// (integrality is ignored). Two phases with an artificial starting basis;
// all structural lower bounds must be finite.
LpResult simplex_solve(const MipModel& model, const std::vector<double>& lower,
                       const std::vector<double>& upper, const LpOptions& options = {});

// Relaxation over the model's own column bounds.
LpResult simplex_solve(const MipModel& model, const LpOptions& options = {});

}  // namespace ecnf2mip
