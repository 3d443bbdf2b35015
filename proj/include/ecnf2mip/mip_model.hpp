#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecnf2mip/theory.hpp"

namespace ecnf2mip {

enum class ColKind { Binary, Integer, Continuous };
enum class RowSense { Leq, Geq, Eq };

// (coefficient, column index); rows and objectives keep these merged, one
// entry per column.
using ColTerm = std::pair<double, int>;

// Column origins. The auxiliary kinds carry enough of their defining
// semantics to reconstruct a feasible value from a model of the source
// theory (see build_witness).
struct SourceAtom {
    int atom;
    bool operator==(const SourceAtom&) const = default;
};
struct SourceIntVar {
    int int_var;
    bool operator==(const SourceIntVar&) const = default;
};
// w1 (is_geq) / w2 split of a reified equality: w <=> sum(terms) >= / <= rhs.
struct EqSplit {
    bool is_geq;
    std::vector<ColTerm> terms;
    double rhs;
    bool operator==(const EqSplit&) const = default;
};
// Witness for one disjunct of a disjunctive rule's level encoding.
struct DisjWitness {
    int def_id;
    int head_col;                // column of the rule head
    int lit_col;                 // column of the disjunct's atom
    bool lit_positive;
    int same_def_head_atom = -1;  // atom index when the disjunct heads the same definition
    bool operator==(const DisjWitness&) const = default;
};
// Copy x' of a conditionally-summed variable: guard => x' = x, !guard => x' = 0.
struct CondCopy {
    int guard_col;
    bool guard_positive;
    int src_col;
    bool operator==(const CondCopy&) const = default;
};
// Level variable of a defined head.
struct Level {
    int atom;
    int def_id;
    bool operator==(const Level&) const = default;
};

using ColOrigin = std::variant<SourceAtom, SourceIntVar, EqSplit, DisjWitness, CondCopy, Level>;

struct Column {
    std::string name;
    ColKind kind = ColKind::Continuous;
    double lower = 0;
    double upper = 0;
    ColOrigin origin = SourceAtom{-1};

    bool integral() const { return kind != ColKind::Continuous; }
    bool is_source() const {
        return std::holds_alternative<SourceAtom>(origin) ||
               std::holds_alternative<SourceIntVar>(origin);
    }
};

struct RowSource {
    enum class Kind { None, Constraint, Definition };
    Kind kind = Kind::None;
    int index = -1;

    static RowSource constraint(int i) { return {Kind::Constraint, i}; }
    static RowSource definition(int i) { return {Kind::Definition, i}; }
    bool operator==(const RowSource&) const = default;
};

// Metadata of a big-M guarded row, kept so tests can re-derive the row for
// any alternative M. The emitted row is: consequent terms plus the guard
// term, with constants folded into rhs (see big_m_implication).
struct Guard {
    int col;
    bool positive;  // polarity of the guard literal
    double big_m;
    RowSense sense;                  // sense of the guarded consequent
    std::vector<ColTerm> consequent;  // merged terms of the consequent
    double consequent_rhs;
};

struct Row {
    std::vector<ColTerm> terms;
    RowSense sense = RowSense::Leq;
    double rhs = 0;
    RowSource source;
    std::string tag;  // which translation rule produced the row
    std::optional<Guard> guard;
};

struct MipModel {
    std::string name = "model";
    std::vector<Column> columns;
    std::vector<Row> rows;
    std::vector<ColTerm> objective;
    double objective_constant = 0;
    bool trivially_infeasible = false;  // an empty clause was translated

    // provenance: source constraint / definition -> emitted row indices
    std::vector<std::vector<int>> constraint_rows;
    std::vector<std::vector<int>> definition_rows;

    int num_cols() const { return static_cast<int>(columns.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
};

// Row activity at a point.
double row_activity(const Row& r, const std::vector<double>& point);
bool row_satisfied(const Row& r, const std::vector<double>& point, double tol);

// Structural equality of the mathematical content (columns, rows,
// objective), ignoring provenance and guard metadata. Column names are
// compared through `sanitize`; a Binary column equals an Integer column
// with bounds [0,1] since the MPS form cannot tell them apart.
bool model_equivalent(const MipModel& a, const MipModel& b);

}  // namespace ecnf2mip
