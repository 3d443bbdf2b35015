#include "ecnf2mip/oracle.hpp"

#include <algorithm>
#include <set>

namespace ecnf2mip {

namespace {

// One-step least fixpoint: derive heads from the rules, evaluating negated
// head literals against `negative_context` (false iff the atom is in it) and
// everything else against `atom_values`. Records the derivation round.
struct GammaResult {
    std::vector<char> in;      // by atom id, heads only
    std::vector<int> round;    // 1-based derivation round
};

GammaResult gamma(const Theory& t, const Definition& d, const std::vector<char>& is_head,
                  const std::vector<char>& atom_values, const std::vector<char>& negative_context) {
    GammaResult out;
    out.in.assign(t.atoms.size(), 0);
    out.round.assign(t.atoms.size(), 0);

    auto body_lit_holds = [&](const Literal& l) {
        if (is_head[l.atom]) {
            if (l.positive) return out.in[l.atom] != 0;
            return negative_context[l.atom] == 0;
        }
        bool v = atom_values[l.atom] != 0;
        return l.positive ? v : !v;
    };

    bool changed = true;
    int round = 0;
    while (changed) {
        changed = false;
        ++round;
        for (const Rule& r : d.rules) {
            if (out.in[r.head]) continue;
            bool fires;
            if (r.conn == Connective::And) {
                fires = std::all_of(r.body.begin(), r.body.end(), body_lit_holds);
            } else {
                fires = std::any_of(r.body.begin(), r.body.end(), body_lit_holds);
            }
            if (fires) {
                out.in[r.head] = 1;
                out.round[r.head] = round;
                changed = true;
            }
        }
    }
    return out;
}

bool has_negative_head_literal(const Definition& d, const std::vector<char>& is_head) {
    for (const Rule& r : d.rules)
        for (const Literal& l : r.body)
            if (!l.positive && is_head[l.atom]) return true;
    return false;
}

}  // namespace

WfmResult well_founded_model(const Theory& t, const Definition& d,
                             const std::vector<char>& atom_values) {
    std::vector<char> is_head(t.atoms.size(), 0);
    for (const Rule& r : d.rules) is_head[r.head] = 1;

    if (!has_negative_head_literal(d, is_head)) {
        // Purely positive in its own heads: the least fixpoint is the model.
        GammaResult fix = gamma(t, d, is_head, atom_values, is_head /*unused*/);
        return {true, fix.in, fix.round};
    }

    // Alternating fixpoint: K underestimates the true heads, U = gamma(K)
    // overestimates them; total when they meet.
    std::vector<char> known(t.atoms.size(), 1);  // start from gamma(all heads)
    GammaResult k = gamma(t, d, is_head, atom_values, known);
    for (;;) {
        GammaResult u = gamma(t, d, is_head, atom_values, k.in);
        GammaResult k2 = gamma(t, d, is_head, atom_values, u.in);
        if (k2.in == k.in) {
            bool total = u.in == k.in;
            return {total, k.in, k.round};
        }
        k = std::move(k2);
    }
}

namespace {

bool literal_true(const Assignment& a, const Literal& l) {
    return (a.atom[l.atom] != 0) == l.positive;
}

Int var_value(const Assignment& a, const VarRef& v) {
    return v.kind == VarRef::Kind::Atom ? Int(a.atom[v.index]) : a.int_var[v.index];
}

bool compare(Int lhs, Comparator cmp, Int rhs) {
    switch (cmp) {
        case Comparator::Lt: return lhs < rhs;
        case Comparator::Leq: return lhs <= rhs;
        case Comparator::Eq: return lhs == rhs;
        case Comparator::Geq: return lhs >= rhs;
        case Comparator::Gt: return lhs > rhs;
        case Comparator::Neq: return lhs != rhs;
    }
    return false;
}

bool constraint_holds(const Constraint& c, const Assignment& a) {
    if (const auto* cl = std::get_if<Clause>(&c)) {
        return std::any_of(cl->literals.begin(), cl->literals.end(),
                           [&](const Literal& l) { return literal_true(a, l); });
    }
    if (const auto* eq = std::get_if<Equivalence>(&c)) {
        bool body = eq->conn == Connective::And
                        ? std::all_of(eq->body.begin(), eq->body.end(),
                                      [&](const Literal& l) { return literal_true(a, l); })
                        : std::any_of(eq->body.begin(), eq->body.end(),
                                      [&](const Literal& l) { return literal_true(a, l); });
        return (a.atom[eq->head] != 0) == body;
    }
    if (const auto* rs = std::get_if<ReifiedSum>(&c)) {
        Int sum = 0;
        for (const LinearTerm& term : rs->terms) sum += term.coeff * var_value(a, term.var);
        return literal_true(a, rs->head) == compare(sum, rs->cmp, rs->rhs);
    }
    const auto& cs = std::get<ConditionalReifiedSum>(c);
    Int sum = 0;
    for (const GuardedTerm& g : cs.terms)
        if (literal_true(a, g.guard)) sum += g.term.coeff * var_value(a, g.term.var);
    return literal_true(a, cs.head) == compare(sum, cs.cmp, cs.rhs);
}

}  // namespace

bool is_model(const Theory& t, const Assignment& a) {
    for (size_t i = 0; i < t.int_vars.size(); ++i)
        if (a.int_var[i] < t.int_vars[i].lower || a.int_var[i] > t.int_vars[i].upper) return false;
    for (const Definition& d : t.definitions) {
        WfmResult wfm = well_founded_model(t, d, a.atom);
        if (!wfm.total) return false;
        for (const Rule& r : d.rules)
            if ((wfm.value[r.head] != 0) != (a.atom[r.head] != 0)) return false;
    }
    for (const Constraint& c : t.constraints)
        if (!constraint_holds(c, a)) return false;
    return true;
}

Int objective_value(const Theory& t, const Assignment& a) {
    if (!t.objective) return 0;
    Int total = t.objective->constant;
    for (const LinearTerm& term : t.objective->terms) total += term.coeff * var_value(a, term.var);
    return total;
}

OracleOutcome enumerate_models(const Theory& t, Int space_limit) {
    // Order definitions so derived heads are available before any definition
    // that consumes them; definitions stuck in a dependency cycle get their
    // heads enumerated and merely checked.
    size_t ndefs = t.definitions.size();
    std::vector<std::set<int>> heads_of(ndefs);
    std::vector<int> head_owner(t.atoms.size(), -1);
    for (size_t d = 0; d < ndefs; ++d)
        for (const Rule& r : t.definitions[d].rules) {
            heads_of[d].insert(r.head);
            head_owner[r.head] = static_cast<int>(d);
        }
    std::vector<std::set<int>> depends_on(ndefs);
    for (size_t d = 0; d < ndefs; ++d)
        for (const Rule& r : t.definitions[d].rules)
            for (const Literal& l : r.body) {
                int owner = head_owner[l.atom];
                if (owner >= 0 && owner != static_cast<int>(d))
                    depends_on[d].insert(owner);
            }
    std::vector<int> derive_order;
    std::vector<char> placed(ndefs, 0);
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t d = 0; d < ndefs; ++d) {
            if (placed[d]) continue;
            bool ready = std::all_of(depends_on[d].begin(), depends_on[d].end(),
                                     [&](int dep) { return placed[dep] != 0; });
            if (ready) {
                placed[d] = 1;
                derive_order.push_back(static_cast<int>(d));
                progress = true;
            }
        }
    }
    std::vector<int> checked_defs;
    std::vector<int> enumerated_atoms;  // open atoms first, then stuck heads
    for (size_t i = 0; i < t.atoms.size(); ++i)
        if (head_owner[i] < 0) enumerated_atoms.push_back(static_cast<int>(i));
    for (size_t d = 0; d < ndefs; ++d)
        if (!placed[d]) {
            checked_defs.push_back(static_cast<int>(d));
            for (int h : heads_of[d]) enumerated_atoms.push_back(h);
        }
    std::sort(enumerated_atoms.begin(), enumerated_atoms.end());

    double space = 1;
    for (size_t i = 0; i < enumerated_atoms.size() && space < 2.0 * space_limit; ++i) space *= 2;
    for (const IntVar& v : t.int_vars) {
        if (space >= 2.0 * space_limit) break;
        space *= static_cast<double>(v.upper - v.lower + 1);
    }
    if (space >= static_cast<double>(space_limit))
        throw SpaceTooLargeError("enumeration space exceeds the guard rail");

    OracleOutcome out;
    Assignment a;
    a.atom.assign(t.atoms.size(), 0);
    a.int_var.resize(t.int_vars.size());
    for (size_t i = 0; i < t.int_vars.size(); ++i) a.int_var[i] = t.int_vars[i].lower;

    std::optional<Int> best;
    for (;;) {
        // Derive defined atoms, then check constraints and stuck definitions.
        bool viable = true;
        for (int d : derive_order) {
            WfmResult wfm = well_founded_model(t, t.definitions[d], a.atom);
            if (!wfm.total) {
                viable = false;
                break;
            }
            for (int h : heads_of[d]) a.atom[h] = wfm.value[h];
        }
        if (viable) {
            bool model = true;
            for (int d : checked_defs) {
                WfmResult wfm = well_founded_model(t, t.definitions[d], a.atom);
                if (!wfm.total) {
                    model = false;
                    break;
                }
                for (int h : heads_of[d])
                    if ((wfm.value[h] != 0) != (a.atom[h] != 0)) {
                        model = false;
                        break;
                    }
                if (!model) break;
            }
            if (model)
                model = std::all_of(t.constraints.begin(), t.constraints.end(),
                                    [&](const Constraint& c) { return constraint_holds(c, a); });
            if (model) {
                out.models.push_back(a);
                if (t.objective) {
                    Int obj = objective_value(t, a);
                    if (!best || obj < *best) best = obj;
                }
            }
        }

        // Odometer step: atoms as bits, then the int boxes.
        size_t pos = 0;
        for (; pos < enumerated_atoms.size(); ++pos) {
            int atom = enumerated_atoms[pos];
            if (!a.atom[atom]) {
                a.atom[atom] = 1;
                break;
            }
            a.atom[atom] = 0;
        }
        if (pos < enumerated_atoms.size()) continue;
        size_t iv = 0;
        for (; iv < t.int_vars.size(); ++iv) {
            if (a.int_var[iv] < t.int_vars[iv].upper) {
                ++a.int_var[iv];
                break;
            }
            a.int_var[iv] = t.int_vars[iv].lower;
        }
        if (iv == t.int_vars.size()) break;
    }

    out.sat = !out.models.empty();
    out.optimum = best;
    return out;
}

BruteForceResult brute_force_optimum(const Theory& t, Int space_limit) {
    OracleOutcome outcome = enumerate_models(t, space_limit);
    return {outcome.sat, outcome.optimum};
}

}  // namespace ecnf2mip
