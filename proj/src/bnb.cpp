#include "ecnf2mip/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace ecnf2mip {

namespace {

struct Node {
    double bound;
    long long id;
    // bound tightenings along the path from the root: (column, lower, upper)
    std::vector<std::tuple<int, double, double>> tightenings;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;                                // then oldest first
    }
};

double snapped_objective(const MipModel& model, const std::vector<double>& point) {
    double obj = model.objective_constant;
    for (const auto& [coeff, col] : model.objective) obj += coeff * point[col];
    return obj;
}

}  // namespace

SolveResult branch_and_bound(const MipModel& model, const SolveLimits& limits,
                             const BnbOptions& options) {
    SolveResult result;
    auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    std::vector<double> root_lo(model.num_cols()), root_up(model.num_cols());
    for (int j = 0; j < model.num_cols(); ++j) {
        root_lo[j] = model.columns[j].lower;
        root_up[j] = model.columns[j].upper;
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long long next_id = 0;
    open.push(Node{-std::numeric_limits<double>::infinity(), next_id++, {}});

    bool have_incumbent = false;
    std::vector<double> incumbent;
    double incumbent_obj = std::numeric_limits<double>::infinity();
    bool out_of_budget = false;

    std::vector<double> lo, up;
    while (!open.empty()) {
        if (result.nodes >= limits.max_nodes || elapsed() > limits.max_seconds) {
            out_of_budget = true;
            break;
        }
        Node node = open.top();
        open.pop();
        if (have_incumbent && node.bound >= incumbent_obj - 1e-9) {
            if (options.audit_log)
                options.audit_log->push_back({node.bound, incumbent_obj});
            continue;
        }

        lo = root_lo;
        up = root_up;
        for (const auto& [col, l, u] : node.tightenings) {
            lo[col] = std::max(lo[col], l);
            up[col] = std::min(up[col], u);
        }
        LpResult lp = simplex_solve(model, lo, up, options.lp);
        ++result.nodes;
        result.lp_iterations += lp.iterations;
        if (node.id == 0 && lp.status == LpStatus::Optimal)
            result.root_lp_objective = lp.objective;

        if (lp.status == LpStatus::Infeasible) continue;
        if (lp.status == LpStatus::Unbounded) {
            result.status = SolveStatus::Unbounded;
            return result;
        }
        if (have_incumbent && lp.objective >= incumbent_obj - 1e-9) {
            if (options.audit_log)
                options.audit_log->push_back({lp.objective, incumbent_obj});
            continue;
        }

        // Branch on the integral column nearest 0.5 fractional.
        int branch_col = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < model.num_cols(); ++j) {
            if (!model.columns[j].integral()) continue;
            double v = lp.point[j];
            double frac = v - std::floor(v);
            if (frac <= options.int_tol || frac >= 1 - options.int_tol) continue;
            double dist = std::abs(frac - 0.5);
            if (dist < best_dist - 1e-12) {
                best_dist = dist;
                branch_col = j;
            }
        }

        if (branch_col < 0) {
            // Integral: snap and take as the new incumbent.
            std::vector<double> point = lp.point;
            for (int j = 0; j < model.num_cols(); ++j)
                if (model.columns[j].integral()) point[j] = std::round(point[j]);
            double obj = snapped_objective(model, point);
            if (!have_incumbent || obj < incumbent_obj) {
                have_incumbent = true;
                incumbent = std::move(point);
                incumbent_obj = obj;
            }
            continue;
        }

        double v = lp.point[branch_col];
        Node down{lp.objective, next_id++, node.tightenings};
        down.tightenings.emplace_back(branch_col, root_lo[branch_col], std::floor(v));
        Node upnode{lp.objective, next_id++, node.tightenings};
        upnode.tightenings.emplace_back(branch_col, std::ceil(v), root_up[branch_col]);
        for (Node* child : {&down, &upnode}) {
            if (have_incumbent && child->bound >= incumbent_obj - 1e-9) {
                if (options.audit_log)
                    options.audit_log->push_back({child->bound, incumbent_obj});
                continue;
            }
            open.push(std::move(*child));
        }
    }

    if (out_of_budget) {
        result.status = SolveStatus::Limit;
        if (have_incumbent) {
            result.point = std::move(incumbent);
            result.objective = incumbent_obj;
        }
        return result;
    }
    if (have_incumbent) {
        result.status = SolveStatus::Optimal;
        result.point = std::move(incumbent);
        result.objective = incumbent_obj;
    } else {
        result.status = SolveStatus::Infeasible;
    }
    return result;
}

std::vector<FeasViolation> check_feasible(const MipModel& model, const std::vector<double>& point,
                                          const Tolerances& tols) {
    std::vector<FeasViolation> out;
    for (int i = 0; i < model.num_rows(); ++i) {
        const Row& r = model.rows[i];
        double act = row_activity(r, point);
        double over = 0;
        switch (r.sense) {
            case RowSense::Leq: over = act - r.rhs; break;
            case RowSense::Geq: over = r.rhs - act; break;
            case RowSense::Eq: over = std::abs(act - r.rhs); break;
        }
        if (over > tols.row_tol) out.push_back({FeasViolationKind::Row, i, over});
    }
    for (int j = 0; j < model.num_cols(); ++j) {
        const Column& c = model.columns[j];
        double v = point[j];
        double over = std::max(c.lower - v, v - c.upper);
        if (over > tols.bound_tol) out.push_back({FeasViolationKind::Bound, j, over});
        if (c.integral()) {
            double gap = std::abs(v - std::round(v));
            if (gap > tols.int_tol) out.push_back({FeasViolationKind::Integrality, j, gap});
        }
    }
    return out;
}

}  // namespace ecnf2mip
