#include "ecnf2mip/theory.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ecnf2mip {

const char* comparator_text(Comparator c) {
    switch (c) {
        case Comparator::Lt: return "<";
        case Comparator::Leq: return "<=";
        case Comparator::Eq: return "=";
        case Comparator::Geq: return ">=";
        case Comparator::Gt: return ">";
        case Comparator::Neq: return "!=";
    }
    return "?";
}

int Theory::add_atom(const std::string& name) {
    atoms.push_back(Atom{name, -1});
    return static_cast<int>(atoms.size()) - 1;
}

int Theory::add_int_var(const std::string& name, Int lower, Int upper) {
    int_vars.push_back(IntVar{name, lower, upper});
    return static_cast<int>(int_vars.size()) - 1;
}

int Theory::find_atom(const std::string& name) const {
    for (size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i].name == name) return static_cast<int>(i);
    return -1;
}

int Theory::find_int_var(const std::string& name) const {
    for (size_t i = 0; i < int_vars.size(); ++i)
        if (int_vars[i].name == name) return static_cast<int>(i);
    return -1;
}

namespace {

bool atom_ok(const Theory& t, int a) { return a >= 0 && a < static_cast<int>(t.atoms.size()); }

bool var_ok(const Theory& t, const VarRef& v) {
    if (v.kind == VarRef::Kind::Atom) return atom_ok(t, v.index);
    return v.index >= 0 && v.index < static_cast<int>(t.int_vars.size());
}

void check_literals(const Theory& t, const std::vector<Literal>& lits, const std::string& where,
                    ValidationReport& out) {
    for (const Literal& l : lits)
        if (!atom_ok(t, l.atom))
            out.violations.push_back({ViolationKind::DanglingReference, where,
                                      "literal references unknown atom in " + where});
}

void check_terms(const Theory& t, const std::vector<LinearTerm>& terms, const std::string& where,
                 ValidationReport& out) {
    for (const LinearTerm& term : terms)
        if (!var_ok(t, term.var))
            out.violations.push_back({ViolationKind::DanglingReference, where,
                                      "term references unknown variable in " + where});
}

}  // namespace

ValidationReport validate_theory(const Theory& t) {
    ValidationReport out;

    std::map<std::string, int> names;
    for (const Atom& a : t.atoms) {
        if (++names[a.name] == 2)
            out.violations.push_back({ViolationKind::DuplicateId, a.name, "duplicate id " + a.name});
    }
    for (const IntVar& v : t.int_vars) {
        if (++names[v.name] == 2)
            out.violations.push_back({ViolationKind::DuplicateId, v.name, "duplicate id " + v.name});
        if (!v.bounded())
            out.violations.push_back({ViolationKind::UnboundedVariable, v.name,
                                      "int var " + v.name + " has no finite bounds"});
        else if (v.lower > v.upper)
            out.violations.push_back({ViolationKind::BadBounds, v.name,
                                      "int var " + v.name + " has lower > upper"});
    }

    // Heads across definitions must be disjoint: rules for one atom in two
    // definitions cannot be merged by normalization.
    std::map<int, int> head_def;  // atom -> definition that heads it
    for (size_t d = 0; d < t.definitions.size(); ++d) {
        for (const Rule& r : t.definitions[d].rules) {
            if (!atom_ok(t, r.head)) {
                out.violations.push_back({ViolationKind::DanglingReference, "definition",
                                          "rule head references unknown atom"});
                continue;
            }
            auto [it, inserted] = head_def.emplace(r.head, static_cast<int>(d));
            if (!inserted && it->second != static_cast<int>(d))
                out.violations.push_back({ViolationKind::DuplicateRuleHead, t.atoms[r.head].name,
                                          "atom " + t.atoms[r.head].name +
                                              " heads rules in two definitions"});
            check_literals(t, r.body, "rule body", out);
        }
    }

    for (size_t i = 0; i < t.atoms.size(); ++i) {
        const Atom& a = t.atoms[i];
        auto it = head_def.find(static_cast<int>(i));
        int actual = it == head_def.end() ? -1 : it->second;
        if (a.def_id != actual)
            out.violations.push_back({ViolationKind::InconsistentAtomKind, a.name,
                                      "atom " + a.name + " kind does not match its rules"});
    }

    for (size_t c = 0; c < t.constraints.size(); ++c) {
        const std::string where = "constraint " + std::to_string(c);
        if (const auto* cl = std::get_if<Clause>(&t.constraints[c])) {
            check_literals(t, cl->literals, where, out);
        } else if (const auto* eq = std::get_if<Equivalence>(&t.constraints[c])) {
            if (!atom_ok(t, eq->head))
                out.violations.push_back(
                    {ViolationKind::DanglingReference, where, "equivalence head unknown"});
            else if (t.atoms[eq->head].defined())
                out.violations.push_back({ViolationKind::EquivalenceHeadDefined,
                                          t.atoms[eq->head].name,
                                          "defined atom " + t.atoms[eq->head].name +
                                              " used as equivalence head"});
            if (eq->body.empty())
                out.violations.push_back(
                    {ViolationKind::EmptyEquivalenceBody, where, "equivalence body is empty"});
            check_literals(t, eq->body, where, out);
        } else if (const auto* rs = std::get_if<ReifiedSum>(&t.constraints[c])) {
            if (!atom_ok(t, rs->head.atom))
                out.violations.push_back(
                    {ViolationKind::DanglingReference, where, "sum head unknown"});
            check_terms(t, rs->terms, where, out);
        } else if (const auto* cs = std::get_if<ConditionalReifiedSum>(&t.constraints[c])) {
            if (!atom_ok(t, cs->head.atom))
                out.violations.push_back(
                    {ViolationKind::DanglingReference, where, "sum head unknown"});
            for (const GuardedTerm& g : cs->terms) {
                if (!atom_ok(t, g.guard.atom))
                    out.violations.push_back(
                        {ViolationKind::DanglingReference, where, "guard references unknown atom"});
                if (!var_ok(t, g.term.var))
                    out.violations.push_back(
                        {ViolationKind::DanglingReference, where, "term references unknown variable"});
            }
        }
    }

    if (t.objective) check_terms(t, t.objective->terms, "objective", out);
    return out;
}

namespace {

std::vector<LinearTerm> drop_zero_terms(const std::vector<LinearTerm>& terms) {
    std::vector<LinearTerm> out;
    out.reserve(terms.size());
    for (const LinearTerm& term : terms)
        if (term.coeff != 0) out.push_back(term);
    return out;
}

std::string fresh_name(const Theory& t, int& counter) {
    for (;;) {
        std::string candidate = "_h" + std::to_string(++counter);
        if (t.find_atom(candidate) < 0 && t.find_int_var(candidate) < 0) return candidate;
    }
}

}  // namespace

Theory normalize_theory(const Theory& t) {
    Theory out = t;

    std::set<int> rule_heads;
    for (const Definition& d : t.definitions)
        for (const Rule& r : d.rules) rule_heads.insert(r.head);
    for (const Constraint& c : t.constraints)
        if (const auto* eq = std::get_if<Equivalence>(&c))
            if (rule_heads.count(eq->head))
                throw MalformedTheoryError("defined atom " + t.atoms[eq->head].name +
                                           " also heads an equivalence");

    // (a) one rule per head, merging same-head rules into a disjunction.
    int aux_counter = 0;
    for (size_t d = 0; d < out.definitions.size(); ++d) {
        std::vector<Rule> merged;
        std::vector<int> head_order;
        std::map<int, std::vector<Rule>> by_head;
        for (const Rule& r : out.definitions[d].rules) {
            if (!by_head.count(r.head)) head_order.push_back(r.head);
            by_head[r.head].push_back(r);
        }
        for (int head : head_order) {
            auto& rules = by_head[head];
            if (rules.size() == 1) {
                merged.push_back(rules[0]);
                continue;
            }
            bool all_single = std::all_of(rules.begin(), rules.end(),
                                          [](const Rule& r) { return r.body.size() == 1; });
            Rule combined{head, Connective::Or, {}};
            if (all_single) {
                for (const Rule& r : rules) combined.body.push_back(r.body[0]);
            } else {
                for (const Rule& r : rules) {
                    if (r.body.size() == 1) {
                        combined.body.push_back(r.body[0]);
                        continue;
                    }
                    int aux = out.add_atom(fresh_name(out, aux_counter));
                    out.atoms[aux].def_id = static_cast<int>(d);
                    merged.push_back(Rule{aux, r.conn, r.body});
                    combined.body.push_back(Literal{aux, true});
                }
            }
            merged.push_back(combined);
        }
        out.definitions[d].rules = std::move(merged);
    }

    // (b) drop zero-coefficient terms.
    for (Constraint& c : out.constraints) {
        if (auto* rs = std::get_if<ReifiedSum>(&c)) {
            rs->terms = drop_zero_terms(rs->terms);
        } else if (auto* cs = std::get_if<ConditionalReifiedSum>(&c)) {
            std::vector<GuardedTerm> kept;
            for (const GuardedTerm& g : cs->terms)
                if (g.term.coeff != 0) kept.push_back(g);
            cs->terms = std::move(kept);
        }
    }
    if (out.objective) out.objective->terms = drop_zero_terms(out.objective->terms);

    // (c) deduplicate clause literals; drop tautological clauses.
    std::vector<Constraint> kept;
    kept.reserve(out.constraints.size());
    for (Constraint& c : out.constraints) {
        if (auto* cl = std::get_if<Clause>(&c)) {
            std::vector<Literal> lits;
            bool tautology = false;
            for (const Literal& l : cl->literals) {
                if (std::find(lits.begin(), lits.end(), l) != lits.end()) continue;
                if (std::find(lits.begin(), lits.end(), l.negated()) != lits.end()) {
                    tautology = true;
                    break;
                }
                lits.push_back(l);
            }
            if (tautology) continue;
            cl->literals = std::move(lits);
        }
        kept.push_back(std::move(c));
    }
    out.constraints = std::move(kept);
    return out;
}

bool is_normalized(const Theory& t) { return normalize_theory(t) == t; }

}  // namespace ecnf2mip
