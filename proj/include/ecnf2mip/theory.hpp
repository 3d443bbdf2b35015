#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// In-memory model of an ECNF theory: bounded integer variables, boolean
// atoms (open or defined by exactly one inductive definition), four
// constraint kinds, definitions in rule form, and an optional minimization
// objective. Everything is plain value types; structural equality is the
// equality notion used throughout the tests.

namespace ecnf2mip {

using Int = long long;

enum class Connective { And, Or };
enum class Comparator { Lt, Leq, Eq, Geq, Gt, Neq };

const char* comparator_text(Comparator c);

struct Literal {
    int atom = -1;
    bool positive = true;

    Literal() = default;
    Literal(int a, bool pos) : atom(a), positive(pos) {}
    Literal negated() const { return {atom, !positive}; }
    bool operator==(const Literal&) const = default;
};

// Reference to either an integer variable or an atom used arithmetically
// (an atom contributes its 0/1 value to a sum).
struct VarRef {
    enum class Kind { IntVar, Atom };
    Kind kind = Kind::IntVar;
    int index = -1;

    static VarRef int_var(int i) { return {Kind::IntVar, i}; }
    static VarRef atom(int i) { return {Kind::Atom, i}; }
    bool operator==(const VarRef&) const = default;
};

struct LinearTerm {
    Int coeff = 0;
    VarRef var;
    bool operator==(const LinearTerm&) const = default;
};

struct Atom {
    std::string name;
    int def_id = -1;  // >= 0 when the atom heads a rule of that definition

    bool defined() const { return def_id >= 0; }
    bool operator==(const Atom&) const = default;
};

struct IntVar {
    static constexpr Int kNoLower = -((Int(1) << 62));
    static constexpr Int kNoUpper = (Int(1) << 62);

    std::string name;
    Int lower = kNoLower;
    Int upper = kNoUpper;

    bool bounded() const { return lower > kNoLower && upper < kNoUpper; }
    bool operator==(const IntVar&) const = default;
};

struct Clause {
    std::vector<Literal> literals;
    bool operator==(const Clause&) const = default;
};

struct Equivalence {
    int head = -1;  // must be an open atom
    Connective conn = Connective::And;
    std::vector<Literal> body;
    bool operator==(const Equivalence&) const = default;
};

struct ReifiedSum {
    Literal head;
    std::vector<LinearTerm> terms;
    Comparator cmp = Comparator::Leq;
    Int rhs = 0;
    bool operator==(const ReifiedSum&) const = default;
};

struct GuardedTerm {
    Literal guard;
    LinearTerm term;
    bool operator==(const GuardedTerm&) const = default;
};

// head <=> sum of the terms whose guard literal is true, compared to rhs.
struct ConditionalReifiedSum {
    Literal head;
    std::vector<GuardedTerm> terms;
    Comparator cmp = Comparator::Leq;
    Int rhs = 0;
    bool operator==(const ConditionalReifiedSum&) const = default;
};

using Constraint = std::variant<Clause, Equivalence, ReifiedSum, ConditionalReifiedSum>;

struct Rule {
    int head = -1;
    Connective conn = Connective::And;
    // Empty And body means "head is true"; empty Or body means "head is false".
    std::vector<Literal> body;
    bool operator==(const Rule&) const = default;
};

struct Definition {
    std::vector<Rule> rules;
    bool operator==(const Definition&) const = default;
};

struct Objective {
    std::vector<LinearTerm> terms;
    Int constant = 0;  // sense is always minimize
    bool operator==(const Objective&) const = default;
};

struct Theory {
    std::string name = "t";
    std::vector<Atom> atoms;
    std::vector<IntVar> int_vars;
    std::vector<Constraint> constraints;
    std::vector<Definition> definitions;
    std::optional<Objective> objective;

    int add_atom(const std::string& name);
    int add_int_var(const std::string& name, Int lower, Int upper);
    int find_atom(const std::string& name) const;     // -1 when absent
    int find_int_var(const std::string& name) const;  // -1 when absent

    bool operator==(const Theory&) const = default;
};

struct MalformedTheoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ViolationKind {
    DanglingReference,
    DuplicateId,
    DuplicateRuleHead,   // a head with rules that cannot be merged into one definition
    UnboundedVariable,
    BadBounds,           // lower > upper
    EquivalenceHeadDefined,
    InconsistentAtomKind,  // def_id does not match the rules that mention the atom
    EmptyEquivalenceBody,
};

struct Violation {
    ViolationKind kind;
    std::string symbol;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Reports every violation found; never throws.
ValidationReport validate_theory(const Theory& t);

// Rewrites the theory into the form the linearizer expects:
//  - every defined atom heads exactly one rule (same-head rules merge into a
//    disjunctive rule, multi-literal bodies via fresh auxiliary heads),
//  - zero-coefficient terms are dropped everywhere,
//  - clause literals are deduplicated and tautological clauses removed.
// Models projected onto the original symbols are preserved.
// Throws MalformedTheoryError when a defined atom heads an Equivalence.
Theory normalize_theory(const Theory& t);

// True when t is its own normal form (what translate_theory requires).
bool is_normalized(const Theory& t);

}  // namespace ecnf2mip
