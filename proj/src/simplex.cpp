#include "ecnf2mip/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecnf2mip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState { Basic, AtLower, AtUpper };

// Dense tableau simplex with explicit bounds on every variable. Variables
// are laid out as [structural | slack | artificial]; the tableau T is kept
// as B^-1 A by Gauss-Jordan pivots, beta holds the basic variable values.
class Simplex {
  public:
    Simplex(const MipModel& model, const std::vector<double>& lower,
            const std::vector<double>& upper, const LpOptions& opt)
        : opt_(opt),
          m_(model.num_rows()),
          n_struct_(model.num_cols()),
          n_total_(model.num_cols() + 2 * model.num_rows()) {
        lo_.assign(n_total_, 0);
        up_.assign(n_total_, 0);
        for (int j = 0; j < n_struct_; ++j) {
            lo_[j] = lower[j];
            up_[j] = upper[j];
        }
        for (int i = 0; i < m_; ++i) {
            int s = slack(i);
            switch (model.rows[i].sense) {
                case RowSense::Leq: lo_[s] = 0; up_[s] = kInf; break;
                case RowSense::Geq: lo_[s] = -kInf; up_[s] = 0; break;
                case RowSense::Eq: lo_[s] = 0; up_[s] = 0; break;
            }
            lo_[art(i)] = 0;
            up_[art(i)] = kInf;
        }

        tab_.assign(m_, std::vector<double>(n_total_, 0.0));
        rhs_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            for (const auto& [coeff, col] : model.rows[i].terms) tab_[i][col] += coeff;
            tab_[i][slack(i)] = 1;
            rhs_[i] = model.rows[i].rhs;
        }

        state_.assign(n_total_, VarState::AtLower);
        val_.assign(n_total_, 0.0);
        for (int j = 0; j < n_total_; ++j) {
            if (lo_[j] > -kInf) {
                val_[j] = lo_[j];
                state_[j] = VarState::AtLower;
            } else {
                val_[j] = up_[j];
                state_[j] = VarState::AtUpper;
            }
        }

        // Artificial starting basis: the artificial of row i absorbs the
        // residual left by the nonbasic values, with its sign chosen to
        // keep it nonnegative.
        basis_.resize(m_);
        beta_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            double residual = rhs_[i];
            for (int j = 0; j < n_struct_; ++j)
                if (tab_[i][j] != 0) residual -= tab_[i][j] * val_[j];
            // slacks start at value 0, contributing nothing
            double sign = residual >= 0 ? 1.0 : -1.0;
            tab_[i][art(i)] = sign;
            if (sign < 0) {
                for (int j = 0; j < n_total_; ++j) tab_[i][j] = -tab_[i][j];
                rhs_[i] = -rhs_[i];
            }
            basis_[i] = art(i);
            state_[art(i)] = VarState::Basic;
            beta_[i] = std::abs(residual);
        }
    }

    LpResult run(const MipModel& model) {
        // Phase 1: drive the artificials to zero.
        std::vector<double> cost(n_total_, 0.0);
        for (int i = 0; i < m_; ++i) cost[art(i)] = 1;
        bool unbounded = iterate(cost, /*phase1=*/true);
        (void)unbounded;  // phase 1 cost is bounded below; flagged inside

        double infeas = 0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_struct_ + m_) infeas += beta_[i];
        LpResult result;
        result.iterations = iterations_;
        if (infeas > opt_.feas_tol * std::max(1.0, norm_)) {
            result.status = LpStatus::Infeasible;
            return result;
        }

        // Phase 2: artificials are pinned at zero and never re-enter.
        for (int i = 0; i < m_; ++i) up_[art(i)] = 0;
        std::fill(cost.begin(), cost.end(), 0.0);
        for (const auto& [coeff, col] : model.objective) cost[col] += coeff;
        if (iterate(cost, /*phase1=*/false)) {
            result.status = LpStatus::Unbounded;
            result.iterations = iterations_;
            return result;
        }

        result.status = LpStatus::Optimal;
        result.iterations = iterations_;
        result.point.assign(n_struct_, 0.0);
        for (int j = 0; j < n_struct_; ++j) result.point[j] = val_[j];
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_struct_) result.point[basis_[i]] = beta_[i];
        result.objective = model.objective_constant;
        for (const auto& [coeff, col] : model.objective)
            result.objective += coeff * result.point[col];
        return result;
    }

  private:
    int slack(int i) const { return n_struct_ + i; }
    int art(int i) const { return n_struct_ + m_ + i; }

    // Runs pricing/ratio/pivot until optimal (returns false) or an
    // unbounded direction is found (returns true, phase 2 only).
    bool iterate(const std::vector<double>& cost, bool phase1) {
        int degenerate_run = 0;
        std::vector<double> reduced(n_total_);
        for (;;) {
            if (++iterations_ > opt_.max_iters)
                throw NumericBreakdownError("simplex iteration limit exceeded");
            bool bland = degenerate_run >= opt_.degeneracy_limit;

            // Reduced costs d = c - c_B^T T, recomputed from the tableau.
            std::fill(reduced.begin(), reduced.end(), 0.0);
            for (int i = 0; i < m_; ++i) {
                double cb = cost[basis_[i]];
                if (cb == 0) continue;
                const std::vector<double>& row = tab_[i];
                for (int j = 0; j < n_total_; ++j) reduced[j] -= cb * row[j];
            }
            for (int j = 0; j < n_total_; ++j) reduced[j] += cost[j];

            int entering = -1;
            double best_score = opt_.cost_tol;
            int limit = phase1 ? n_total_ : n_struct_ + m_;  // no artificials in phase 2
            for (int j = 0; j < limit; ++j) {
                if (state_[j] == VarState::Basic || lo_[j] == up_[j]) continue;
                double score = 0;
                if (state_[j] == VarState::AtLower && reduced[j] < -opt_.cost_tol)
                    score = -reduced[j];
                else if (state_[j] == VarState::AtUpper && reduced[j] > opt_.cost_tol)
                    score = reduced[j];
                else
                    continue;
                if (bland) {
                    entering = j;
                    break;
                }
                if (score > best_score) {
                    best_score = score;
                    entering = j;
                }
            }
            if (entering < 0) return false;  // optimal for this phase

            double dir = state_[entering] == VarState::AtLower ? 1.0 : -1.0;

            // Ratio test: the entering variable moves by t in direction dir,
            // basic variable i moves by -dir * T[i][entering] * t.
            double best_t = kInf;
            bool flip_limit = false;
            if (lo_[entering] > -kInf && up_[entering] < kInf) {
                best_t = up_[entering] - lo_[entering];
                flip_limit = true;
            }
            int leaving_row = -1;
            double leaving_pivot = 0;
            for (int i = 0; i < m_; ++i) {
                double delta = -dir * tab_[i][entering];
                if (std::abs(delta) <= opt_.pivot_tol) continue;
                int b = basis_[i];
                double t;
                if (delta > 0) {
                    if (up_[b] == kInf) continue;
                    t = (up_[b] - beta_[i]) / delta;
                } else {
                    if (lo_[b] == -kInf) continue;
                    t = (lo_[b] - beta_[i]) / delta;
                }
                if (t < 0) t = 0;  // bound already reached within tolerance
                if (t < best_t - 1e-12) {
                    best_t = t;
                    leaving_row = i;
                    leaving_pivot = tab_[i][entering];
                    flip_limit = false;
                } else if (!flip_limit && leaving_row >= 0 && t <= best_t + 1e-12) {
                    bool better = bland ? basis_[i] < basis_[leaving_row]
                                        : std::abs(tab_[i][entering]) > std::abs(leaving_pivot);
                    if (better) {
                        leaving_row = i;
                        leaving_pivot = tab_[i][entering];
                    }
                }
            }

            if (best_t == kInf) {
                if (phase1)
                    throw NumericBreakdownError("phase 1 detected an unbounded direction");
                return true;
            }
            degenerate_run = best_t <= 1e-9 ? degenerate_run + 1 : 0;

            if (flip_limit || leaving_row < 0) {
                // Bound flip: the entering variable crosses to its other bound.
                for (int i = 0; i < m_; ++i) beta_[i] -= dir * best_t * tab_[i][entering];
                val_[entering] = state_[entering] == VarState::AtLower ? up_[entering] : lo_[entering];
                state_[entering] =
                    state_[entering] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
                continue;
            }

            if (std::abs(leaving_pivot) < opt_.pivot_tol)
                throw NumericBreakdownError("pivot magnitude below tolerance with no alternative");

            pivot(leaving_row, entering, dir, best_t);
        }
    }

    void pivot(int row, int entering, double dir, double t) {
        int leaving = basis_[row];
        double delta = -dir * tab_[row][entering];
        // Leaving variable settles on the bound it ran into.
        if (delta > 0) {
            state_[leaving] = VarState::AtUpper;
            val_[leaving] = up_[leaving];
        } else {
            state_[leaving] = VarState::AtLower;
            val_[leaving] = lo_[leaving];
        }
        if (leaving >= n_struct_ + m_) up_[leaving] = 0;  // artificials never return
        double entering_value = val_[entering] + dir * t;
        for (int i = 0; i < m_; ++i)
            if (i != row) beta_[i] -= dir * t * tab_[i][entering];

        double p = tab_[row][entering];
        std::vector<double>& prow = tab_[row];
        for (int j = 0; j < n_total_; ++j) prow[j] /= p;
        rhs_[row] /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            double f = tab_[i][entering];
            if (f == 0) continue;
            std::vector<double>& irow = tab_[i];
            for (int j = 0; j < n_total_; ++j) irow[j] -= f * prow[j];
            rhs_[i] -= f * rhs_[row];
        }
        basis_[row] = entering;
        state_[entering] = VarState::Basic;
        beta_[row] = entering_value;
        norm_ = std::max(norm_, std::abs(entering_value));
        if (++pivots_ % 64 == 0) resync_basics();
    }

    // Recompute basic values from the pivoted tableau to shed incremental
    // rounding drift.
    void resync_basics() {
        for (int i = 0; i < m_; ++i) {
            double v = rhs_[i];
            const std::vector<double>& row = tab_[i];
            for (int j = 0; j < n_total_; ++j)
                if (state_[j] != VarState::Basic && val_[j] != 0) v -= row[j] * val_[j];
            beta_[i] = v;
        }
    }

    LpOptions opt_;
    int m_;
    int n_struct_;
    int n_total_;
    std::vector<std::vector<double>> tab_;
    std::vector<double> rhs_;
    std::vector<double> lo_, up_;
    std::vector<double> val_;
    std::vector<VarState> state_;
    std::vector<int> basis_;
    std::vector<double> beta_;
    double norm_ = 1.0;
    int iterations_ = 0;
    long long pivots_ = 0;
};

}  // namespace

LpResult simplex_solve(const MipModel& model, const std::vector<double>& lower,
                       const std::vector<double>& upper, const LpOptions& options) {
    for (int j = 0; j < model.num_cols(); ++j) {
        if (lower[j] == -kInf)
            throw NumericBreakdownError("column " + model.columns[j].name +
                                        " has no finite lower bound");
        if (lower[j] > upper[j] + 1e-12) {
            LpResult r;
            r.status = LpStatus::Infeasible;
            return r;
        }
    }
    Simplex s(model, lower, upper, options);
    return s.run(model);
}

LpResult simplex_solve(const MipModel& model, const LpOptions& options) {
    std::vector<double> lower(model.num_cols()), upper(model.num_cols());
    for (int j = 0; j < model.num_cols(); ++j) {
        lower[j] = model.columns[j].lower;
        upper[j] = model.columns[j].upper;
    }
    return simplex_solve(model, lower, upper, options);
}

}  // namespace ecnf2mip
