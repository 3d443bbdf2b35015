#pragma once

#include <optional>
#include <vector>

#include "ecnf2mip/mip_model.hpp"
#include "ecnf2mip/simplex.hpp"

namespace ecnf2mip {

struct SolveLimits {
    long long max_nodes = 1'000'000;
    double max_seconds = 60.0;
};

// One pruning decision, recorded when an audit log is attached.
struct PruneRecord {
    double node_bound;
    double incumbent;
};

struct BnbOptions {
    double int_tol = 1e-6;
    LpOptions lp;
    std::vector<PruneRecord>* audit_log = nullptr;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<std::vector<double>> point;  // incumbent, integral columns snapped
    double objective = 0;
    long long nodes = 0;
    long long lp_iterations = 0;
    std::optional<double> root_lp_objective;
};

// Best-bound branch and bound over the integral columns; branches on the
// value nearest 0.5 fractional (ties to the lowest column index).
SolveResult branch_and_bound(const MipModel& model, const SolveLimits& limits = {},
                             const BnbOptions& options = {});

struct Tolerances {
    double row_tol = 1e-6;
    double bound_tol = 1e-6;
    double int_tol = 1e-6;
};

enum class FeasViolationKind { Row, Bound, Integrality };

struct FeasViolation {
    FeasViolationKind kind;
    int index;  // row or column
    double magnitude;
};

// Every row/bound/integrality violation of the point; empty means feasible.
std::vector<FeasViolation> check_feasible(const MipModel& model, const std::vector<double>& point,
                                          const Tolerances& tols = {});

}  // namespace ecnf2mip
