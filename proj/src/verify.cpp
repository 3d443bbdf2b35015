#include "ecnf2mip/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ecnf2mip {

namespace {

bool eq_split_holds(const EqSplit& split, const std::vector<double>& point) {
    double sum = 0;
    for (const auto& [coeff, col] : split.terms) sum += coeff * point[col];
    return split.is_geq ? sum >= split.rhs - 1e-9 : sum <= split.rhs + 1e-9;
}

int origin_atom(const MipModel& model, int col) {
    return std::get<SourceAtom>(model.columns[col].origin).atom;
}

}  // namespace

std::vector<double> build_witness(const Theory& t, const MipModel& model, const Assignment& a) {
    // Derivation depth of every true head, per definition.
    std::vector<int> depth(t.atoms.size(), 0);
    for (const Definition& d : t.definitions) {
        WfmResult wfm = well_founded_model(t, d, a.atom);
        for (const Rule& r : d.rules)
            if (wfm.value[r.head]) depth[r.head] = wfm.depth[r.head];
    }

    std::vector<double> point(model.num_cols(), 0.0);
    for (int j = 0; j < model.num_cols(); ++j) {
        const Column& c = model.columns[j];
        if (const auto* sa = std::get_if<SourceAtom>(&c.origin)) {
            point[j] = a.atom[sa->atom] ? 1 : 0;
        } else if (const auto* sv = std::get_if<SourceIntVar>(&c.origin)) {
            point[j] = static_cast<double>(a.int_var[sv->int_var]);
        } else if (const auto* split = std::get_if<EqSplit>(&c.origin)) {
            point[j] = eq_split_holds(*split, point) ? 1 : 0;
        } else if (const auto* wit = std::get_if<DisjWitness>(&c.origin)) {
            bool head_true = point[wit->head_col] > 0.5;
            bool lit_true = wit->lit_positive ? point[wit->lit_col] > 0.5
                                              : point[wit->lit_col] < 0.5;
            bool level_ok = true;
            if (wit->same_def_head_atom >= 0) {
                int head_atom = origin_atom(model, wit->head_col);
                level_ok = depth[wit->same_def_head_atom] < depth[head_atom];
            }
            point[j] = head_true && lit_true && level_ok ? 1 : 0;
        } else if (const auto* copy = std::get_if<CondCopy>(&c.origin)) {
            bool guard_true = copy->guard_positive ? point[copy->guard_col] > 0.5
                                                   : point[copy->guard_col] < 0.5;
            point[j] = guard_true ? point[copy->src_col] : 0;
        } else if (const auto* level = std::get_if<Level>(&c.origin)) {
            point[j] = depth[level->atom];
        }
    }
    return point;
}

namespace {

// Solve the model with some columns pinned to decide whether any feasible
// integral extension exists.
SolveStatus probe_status(const MipModel& model, const std::vector<std::pair<int, double>>& pins,
                         const SolveLimits& limits) {
    MipModel probe = model;
    for (const auto& [col, v] : pins) {
        probe.columns[col].lower = v;
        probe.columns[col].upper = v;
    }
    return branch_and_bound(probe, limits).status;
}

}  // namespace

VerifyReport verify_translation(const Theory& t, const MipModel& model, const SolveLimits& limits,
                                Int space_limit) {
    VerifyReport report;
    OracleOutcome oracle = enumerate_models(t, space_limit);
    SolveResult solved = branch_and_bound(model, limits);

    // Optimum equality, including status.
    if (solved.status == SolveStatus::Limit) {
        report.detail = "branch and bound ran out of budget";
    } else if (oracle.sat != (solved.status == SolveStatus::Optimal)) {
        report.detail = oracle.sat ? "oracle is sat but the solver found no point"
                                   : "solver found a point but the oracle is unsat";
    } else if (oracle.sat && t.objective &&
               *oracle.optimum != static_cast<Int>(std::llround(solved.objective))) {
        report.detail = "objective mismatch: oracle " + std::to_string(*oracle.optimum) +
                        " vs solver " + std::to_string(solved.objective);
    } else {
        report.optimum_equal = true;
    }

    // Completeness: every oracle model extends to a feasible point.
    report.completeness = true;
    for (const Assignment& a : oracle.models) {
        std::vector<double> witness = build_witness(t, model, a);
        if (!check_feasible(model, witness).empty()) {
            report.completeness = false;
            report.detail = "witness of an oracle model is infeasible";
            break;
        }
    }

    // Soundness: no integral point projects onto a rejected assignment.
    report.soundness = true;
    std::vector<int> open_atoms, defined_atoms;
    for (size_t i = 0; i < t.atoms.size(); ++i)
        (t.atoms[i].defined() ? defined_atoms : open_atoms).push_back(static_cast<int>(i));
    std::vector<int> atom_col(t.atoms.size(), -1), iv_col(t.int_vars.size(), -1);
    for (int j = 0; j < model.num_cols(); ++j) {
        if (const auto* sa = std::get_if<SourceAtom>(&model.columns[j].origin))
            atom_col[sa->atom] = j;
        else if (const auto* sv = std::get_if<SourceIntVar>(&model.columns[j].origin))
            iv_col[sv->int_var] = j;
    }

    using OpenKey = std::pair<std::vector<char>, std::vector<Int>>;
    auto key_of = [&](const Assignment& a) {
        OpenKey key;
        for (int atom : open_atoms) key.first.push_back(a.atom[atom]);
        key.second = a.int_var;
        return key;
    };
    std::map<OpenKey, std::vector<const Assignment*>> by_opens;
    for (const Assignment& a : oracle.models) by_opens[key_of(a)].push_back(&a);

    Assignment probe;
    probe.atom.assign(t.atoms.size(), 0);
    probe.int_var.resize(t.int_vars.size());
    for (size_t i = 0; i < t.int_vars.size(); ++i) probe.int_var[i] = t.int_vars[i].lower;

    bool done = false;
    while (!done && report.soundness) {
        std::vector<std::pair<int, double>> pins;
        for (int atom : open_atoms) pins.emplace_back(atom_col[atom], probe.atom[atom] ? 1 : 0);
        for (size_t i = 0; i < t.int_vars.size(); ++i)
            pins.emplace_back(iv_col[i], static_cast<double>(probe.int_var[i]));

        auto fail_from = [&](SolveStatus status, const std::string& what) {
            if (status == SolveStatus::Infeasible) return false;
            report.soundness = false;
            report.detail = status == SolveStatus::Limit ? "soundness probe ran out of budget"
                                                         : what;
            return true;
        };
        auto it = by_opens.find(key_of(probe));
        if (it == by_opens.end()) {
            // No model has these opens: the MIP must have no extension.
            fail_from(probe_status(model, pins, limits),
                      "feasible point projects onto a non-model assignment");
        } else {
            // Models exist: no extension may flip a unanimously-valued head.
            for (int d_atom : defined_atoms) {
                bool all_true = std::all_of(it->second.begin(), it->second.end(),
                                            [&](const Assignment* m) { return m->atom[d_atom]; });
                bool all_false = std::all_of(it->second.begin(), it->second.end(),
                                             [&](const Assignment* m) { return !m->atom[d_atom]; });
                if (!all_true && !all_false) continue;
                auto flipped = pins;
                flipped.emplace_back(atom_col[d_atom], all_true ? 0 : 1);
                if (fail_from(probe_status(model, flipped, limits),
                              "feasible point disagrees with the oracle on a defined atom"))
                    break;
            }
        }

        // Next open assignment.
        size_t pos = 0;
        for (; pos < open_atoms.size(); ++pos) {
            if (!probe.atom[open_atoms[pos]]) {
                probe.atom[open_atoms[pos]] = 1;
                break;
            }
            probe.atom[open_atoms[pos]] = 0;
        }
        if (pos < open_atoms.size()) continue;
        size_t iv = 0;
        for (; iv < t.int_vars.size(); ++iv) {
            if (probe.int_var[iv] < t.int_vars[iv].upper) {
                ++probe.int_var[iv];
                break;
            }
            probe.int_var[iv] = t.int_vars[iv].lower;
        }
        done = iv == t.int_vars.size();
    }

    return report;
}

}  // namespace ecnf2mip
