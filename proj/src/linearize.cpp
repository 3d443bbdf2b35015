#include "ecnf2mip/linearize.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ecnf2mip {

namespace {

// Merge duplicate columns and drop zero coefficients, keeping first-seen
// order. M derivation and the emitted rows always work on merged terms so
// that the box bound matches the row as written.
std::vector<ColTerm> merge_terms(const std::vector<ColTerm>& terms) {
    std::vector<ColTerm> out;
    for (const auto& [coeff, col] : terms) {
        bool found = false;
        for (auto& entry : out) {
            if (entry.second == col) {
                entry.first += coeff;
                found = true;
                break;
            }
        }
        if (!found) out.emplace_back(coeff, col);
    }
    std::erase_if(out, [](const ColTerm& t) { return t.first == 0.0; });
    return out;
}

}  // namespace

double bound_of_sum(const MipModel& m, const std::vector<ColTerm>& terms, BoundDir dir) {
    double total = 0;
    for (const auto& [coeff, col] : terms) {
        const Column& c = m.columns[col];
        bool take_upper = (coeff > 0) == (dir == BoundDir::Max);
        total += coeff * (take_upper ? c.upper : c.lower);
    }
    return total;
}

Linearizer::Linearizer(const Theory& t, TranslateOptions options)
    : theory_(t), options_(options) {
    model_.name = t.name;
    atom_cols_.reserve(t.atoms.size());
    for (const Atom& a : t.atoms) {
        atom_cols_.push_back(model_.num_cols());
        model_.columns.push_back(
            Column{a.name, ColKind::Binary, 0, 1, SourceAtom{static_cast<int>(atom_cols_.size()) - 1}});
    }
    int_var_cols_.reserve(t.int_vars.size());
    for (size_t i = 0; i < t.int_vars.size(); ++i) {
        const IntVar& v = t.int_vars[i];
        int_var_cols_.push_back(model_.num_cols());
        model_.columns.push_back(Column{v.name, ColKind::Integer, static_cast<double>(v.lower),
                                        static_cast<double>(v.upper),
                                        SourceIntVar{static_cast<int>(i)}});
    }
    model_.constraint_rows.resize(t.constraints.size());
    model_.definition_rows.resize(t.definitions.size());
}

int Linearizer::add_aux_column(std::string base, ColKind kind, double lower, double upper,
                               ColOrigin origin) {
    auto taken = [&](const std::string& name) {
        return std::any_of(model_.columns.begin(), model_.columns.end(),
                           [&](const Column& c) { return c.name == name; });
    };
    std::string name = base;
    for (int suffix = 2; taken(name); ++suffix) name = base + "_" + std::to_string(suffix);
    model_.columns.push_back(Column{name, kind, lower, upper, std::move(origin)});
    return model_.num_cols() - 1;
}

int Linearizer::add_row(std::vector<ColTerm> terms, RowSense sense, double rhs, RowSource source,
                        const std::string& tag) {
    Row row{merge_terms(terms), sense, rhs, source, tag, std::nullopt};
    model_.rows.push_back(std::move(row));
    int idx = model_.num_rows() - 1;
    if (source.kind == RowSource::Kind::Constraint)
        model_.constraint_rows[source.index].push_back(idx);
    else if (source.kind == RowSource::Kind::Definition)
        model_.definition_rows[source.index].push_back(idx);
    return idx;
}

int Linearizer::add_implication(ColLit guard, std::vector<ColTerm> terms, RowSense sense,
                                double rhs, RowSource source, const std::string& tag) {
    std::vector<ColTerm> merged = merge_terms(terms);
    double big_m = sense == RowSense::Geq ? rhs - bound_of_sum(model_, merged, BoundDir::Min)
                                          : bound_of_sum(model_, merged, BoundDir::Max) - rhs;
    if (big_m <= 0) {
        // The consequent holds at every box point; the guard is irrelevant.
        return add_row(std::move(merged), sense, rhs, source, tag);
    }

    Guard info{guard.col, guard.positive, big_m, sense, merged, rhs};
    std::vector<ColTerm> row_terms = merged;
    double row_rhs = rhs;
    if (sense == RowSense::Geq) {
        // guard* = v: sum - M v >= rhs - M;  guard* = 1 - v: sum + M v >= rhs.
        row_terms.emplace_back(guard.positive ? -big_m : big_m, guard.col);
        if (guard.positive) row_rhs -= big_m;
    } else {
        // guard* = v: sum + M v <= rhs + M;  guard* = 1 - v: sum - M v <= rhs.
        row_terms.emplace_back(guard.positive ? big_m : -big_m, guard.col);
        if (guard.positive) row_rhs += big_m;
    }
    int idx = add_row(std::move(row_terms), sense, row_rhs, source, tag);
    model_.rows[idx].guard = std::move(info);
    return idx;
}

// sum of l* over the literals: negative literals contribute (1 - v), whose
// constant is folded into rhs.
std::vector<ColTerm> Linearizer::literal_sum(const std::vector<Literal>& lits, double& rhs) const {
    std::vector<ColTerm> terms;
    terms.reserve(lits.size());
    for (const Literal& l : lits) {
        if (l.positive) {
            terms.emplace_back(1, atom_col(l.atom));
        } else {
            terms.emplace_back(-1, atom_col(l.atom));
            rhs -= 1;
        }
    }
    return terms;
}

ColTerm Linearizer::term_of(const LinearTerm& t) const {
    int col = t.var.kind == VarRef::Kind::Atom ? atom_col(t.var.index) : int_var_col(t.var.index);
    return {static_cast<double>(t.coeff), col};
}

void Linearizer::add_clause(const Clause& c, RowSource source) {
    if (c.literals.empty()) {
        model_.trivially_infeasible = true;
        add_row({}, RowSense::Geq, 1, source, "clause");
        return;
    }
    double rhs = 1;
    std::vector<ColTerm> terms = literal_sum(c.literals, rhs);
    add_row(std::move(terms), RowSense::Geq, rhs, source, "clause");
}

void Linearizer::add_equivalence(const Equivalence& e, RowSource source) {
    double need = e.conn == Connective::And ? static_cast<double>(e.body.size()) : 1;
    double rhs_true = need;
    std::vector<ColTerm> terms = literal_sum(e.body, rhs_true);
    double shift = rhs_true - need;  // constant folded out of the literal sum
    add_implication({atom_col(e.head), true}, terms, RowSense::Geq, rhs_true, source, "equiv");
    add_implication({atom_col(e.head), false}, terms, RowSense::Leq, need - 1 + shift, source,
                    "equiv");
}

void Linearizer::reify_column_sum(Literal head, const std::vector<ColTerm>& terms, Comparator cmp,
                                  double rhs, RowSource source, const std::string& tag) {
    switch (cmp) {
        case Comparator::Gt:
            reify_column_sum(head, terms, Comparator::Geq, rhs + 1, source, tag);
            return;
        case Comparator::Lt:
            reify_column_sum(head, terms, Comparator::Leq, rhs - 1, source, tag);
            return;
        case Comparator::Geq:
            add_implication(lit(head), terms, RowSense::Geq, rhs, source, tag);
            add_implication(lit(head.negated()), terms, RowSense::Leq, rhs - 1, source, tag);
            return;
        case Comparator::Leq:
            add_implication(lit(head), terms, RowSense::Leq, rhs, source, tag);
            add_implication(lit(head.negated()), terms, RowSense::Geq, rhs + 1, source, tag);
            return;
        case Comparator::Neq:
            reify_column_sum(head.negated(), terms, Comparator::Eq, rhs, source, tag);
            return;
        case Comparator::Eq: {
            // Split into two inequalities through fresh booleans:
            // w1 <=> sum >= rhs, w2 <=> sum <= rhs, head <=> w1 and w2.
            int w1 = add_aux_column("_w1_" + std::to_string(aux_serial_), ColKind::Binary, 0, 1,
                                    EqSplit{true, terms, rhs});
            int w2 = add_aux_column("_w2_" + std::to_string(aux_serial_), ColKind::Binary, 0, 1,
                                    EqSplit{false, terms, rhs});
            ++aux_serial_;
            add_implication({w1, true}, terms, RowSense::Geq, rhs, source, tag);
            add_implication({w1, false}, terms, RowSense::Leq, rhs - 1, source, tag);
            add_implication({w2, true}, terms, RowSense::Leq, rhs, source, tag);
            add_implication({w2, false}, terms, RowSense::Geq, rhs + 1, source, tag);
            std::vector<ColTerm> both{{1, w1}, {1, w2}};
            add_implication(lit(head), both, RowSense::Geq, 2, source, tag);
            add_implication(lit(head.negated()), both, RowSense::Leq, 1, source, tag);
            return;
        }
    }
}

void Linearizer::add_reified_sum(const ReifiedSum& r, RowSource source) {
    std::vector<ColTerm> terms;
    terms.reserve(r.terms.size());
    for (const LinearTerm& t : r.terms) terms.push_back(term_of(t));
    reify_column_sum(r.head, terms, r.cmp, static_cast<double>(r.rhs), source, "sum");
}

void Linearizer::add_conditional_sum(const ConditionalReifiedSum& c, RowSource source) {
    std::vector<ColTerm> terms;
    terms.reserve(c.terms.size());
    for (const GuardedTerm& g : c.terms) {
        ColTerm src = term_of(g.term);
        const Column& src_col = model_.columns[src.second];
        // The copy ranges over the source box extended with 0 so that the
        // guard-false case x' = 0 is always inside the bounds.
        int copy = add_aux_column("_xc" + std::to_string(aux_serial_++), ColKind::Integer,
                                  std::min(src_col.lower, 0.0), std::max(src_col.upper, 0.0),
                                  CondCopy{atom_col(g.guard.atom), g.guard.positive, src.second});
        ColLit on = lit(g.guard);
        ColLit off = lit(g.guard.negated());
        std::vector<ColTerm> tie{{1, copy}, {-1, src.second}};
        add_implication(on, tie, RowSense::Geq, 0, source, "csum-copy");
        add_implication(on, tie, RowSense::Leq, 0, source, "csum-copy");
        std::vector<ColTerm> zero{{1, copy}};
        add_implication(off, zero, RowSense::Geq, 0, source, "csum-zero");
        add_implication(off, zero, RowSense::Leq, 0, source, "csum-zero");
        terms.emplace_back(src.first, copy);
    }
    reify_column_sum(c.head, terms, c.cmp, static_cast<double>(c.rhs), source, "csum");
}

void Linearizer::add_definition(const Definition& d, int def_id) {
    RowSource source = RowSource::definition(def_id);

    // Clark completion: head and body are equivalent.
    for (const Rule& r : d.rules) {
        if (r.body.empty()) {
            // An empty conjunction is true, an empty disjunction false.
            if (r.conn == Connective::And)
                add_row({{1, atom_col(r.head)}}, RowSense::Geq, 1, source, "completion");
            else
                add_row({{1, atom_col(r.head)}}, RowSense::Leq, 0, source, "completion");
            continue;
        }
        double need = r.conn == Connective::And ? static_cast<double>(r.body.size()) : 1;
        double rhs_true = need;
        std::vector<ColTerm> terms = literal_sum(r.body, rhs_true);
        double shift = rhs_true - need;
        add_implication({atom_col(r.head), true}, terms, RowSense::Geq, rhs_true, source,
                        "completion");
        add_implication({atom_col(r.head), false}, terms, RowSense::Leq, need - 1 + shift, source,
                        "completion");
    }

    if (!options_.level_maps) return;

    // Level mapping: every true head must be derived from strictly lower
    // levels, which rules out positive loops inside the definition.
    int height = static_cast<int>(d.rules.size());
    std::map<int, int> z_col;  // head atom -> level column
    for (const Rule& r : d.rules)
        z_col[r.head] = add_aux_column(
            "_z_" + theory_.atoms[r.head].name,
            options_.integer_levels ? ColKind::Integer : ColKind::Continuous, 0, height,
            Level{r.head, def_id});

    for (const Rule& r : d.rules) {
        if (r.body.empty()) continue;
        int head_c = atom_col(r.head);
        if (r.conn == Connective::And) {
            for (const Literal& l : r.body) {
                if (!l.positive || !z_col.count(l.atom)) continue;
                std::vector<ColTerm> diff{{1, z_col[r.head]}, {-1, z_col[l.atom]}};
                add_implication({head_c, true}, diff, RowSense::Geq, 1, source, "level");
            }
        } else {
            std::vector<int> witnesses;
            witnesses.reserve(r.body.size());
            for (const Literal& l : r.body) {
                bool recursive = l.positive && z_col.count(l.atom);
                witnesses.push_back(add_aux_column(
                    "_wit" + std::to_string(aux_serial_++), ColKind::Binary, 0, 1,
                    DisjWitness{def_id, head_c, atom_col(l.atom), l.positive,
                                recursive ? l.atom : -1}));
            }
            std::vector<ColTerm> some;
            some.reserve(witnesses.size());
            for (int w : witnesses) some.emplace_back(1, w);
            add_implication({head_c, true}, some, RowSense::Geq, 1, source, "level");
            for (size_t i = 0; i < r.body.size(); ++i) {
                const Literal& l = r.body[i];
                // w_i => l_i, as the clause (!w_i or l_i).
                if (l.positive)
                    add_row({{1, atom_col(l.atom)}, {-1, witnesses[i]}}, RowSense::Geq, 0, source,
                            "level");
                else
                    add_row({{-1, atom_col(l.atom)}, {-1, witnesses[i]}}, RowSense::Geq, -1, source,
                            "level");
                if (l.positive && z_col.count(l.atom)) {
                    std::vector<ColTerm> diff{{1, z_col[r.head]}, {-1, z_col[l.atom]}};
                    add_implication({witnesses[i], true}, diff, RowSense::Geq, 1, source, "level");
                }
            }
        }
    }
}

MipModel translate_theory(const Theory& t, const TranslateOptions& options) {
    ValidationReport report = validate_theory(t);
    if (!report.ok())
        throw MalformedTheoryError("invalid theory: " + report.violations.front().message);
    if (!is_normalized(t)) throw MalformedTheoryError("theory is not normalized");

    Linearizer lin(t, options);
    for (size_t i = 0; i < t.constraints.size(); ++i) {
        RowSource source = RowSource::constraint(static_cast<int>(i));
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, Clause>) lin.add_clause(c, source);
                else if constexpr (std::is_same_v<T, Equivalence>) lin.add_equivalence(c, source);
                else if constexpr (std::is_same_v<T, ReifiedSum>) lin.add_reified_sum(c, source);
                else lin.add_conditional_sum(c, source);
            },
            t.constraints[i]);
    }
    for (size_t d = 0; d < t.definitions.size(); ++d)
        lin.add_definition(t.definitions[d], static_cast<int>(d));

    std::vector<ColTerm> obj;
    double obj_constant = 0;
    if (t.objective) {
        obj.reserve(t.objective->terms.size());
        for (const LinearTerm& term : t.objective->terms) {
            int col = term.var.kind == VarRef::Kind::Atom ? lin.atom_col(term.var.index)
                                                          : lin.int_var_col(term.var.index);
            obj.emplace_back(static_cast<double>(term.coeff), col);
        }
        obj = merge_terms(obj);
        obj_constant = static_cast<double>(t.objective->constant);
    }
    MipModel model = lin.take();
    model.objective = std::move(obj);
    model.objective_constant = obj_constant;
    return model;
}

}  // namespace ecnf2mip
