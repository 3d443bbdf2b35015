#pragma once

#include "ecnf2mip/mip_model.hpp"
#include "ecnf2mip/theory.hpp"

namespace ecnf2mip {

struct TranslateOptions {
    bool level_maps = true;      // emit level-mapping rows for definitions
    bool integer_levels = false; // make level columns integer instead of continuous
};

enum class BoundDir { Min, Max };

// A literal over a column: value `positive ? x : 1 - x`.
struct ColLit {
    int col = -1;
    bool positive = true;
};

// Exact box bound of a merged linear expression over column bounds.
double bound_of_sum(const MipModel& m, const std::vector<ColTerm>& terms, BoundDir dir);

// Translates one ECNF theory into a mixed-integer model. Columns are created
// in declaration order (atoms, then int vars), auxiliary columns in the order
// the translation reaches them; rows follow constraint order, then definition
// order. The whole pass is deterministic.
class Linearizer {
  public:
    Linearizer(const Theory& t, TranslateOptions options = {});

    // guard => sum(terms) sense rhs, emitted as one row with M derived from
    // the box bounds of the merged terms. When M <= 0 the consequent already
    // holds everywhere, so the row is emitted unguarded.
    int add_implication(ColLit guard, std::vector<ColTerm> terms, RowSense sense, double rhs,
                        RowSource source, const std::string& tag);
    // Unconditional sum(terms) sense rhs.
    int add_row(std::vector<ColTerm> terms, RowSense sense, double rhs, RowSource source,
                const std::string& tag);

    void add_clause(const Clause& c, RowSource source);
    void add_equivalence(const Equivalence& e, RowSource source);
    void add_reified_sum(const ReifiedSum& r, RowSource source);
    void add_conditional_sum(const ConditionalReifiedSum& c, RowSource source);
    void add_definition(const Definition& d, int def_id);

    int atom_col(int atom) const { return atom_cols_.at(atom); }
    int int_var_col(int iv) const { return int_var_cols_.at(iv); }

    const MipModel& model() const { return model_; }
    MipModel take() { return std::move(model_); }

  private:
    friend MipModel translate_theory(const Theory&, const TranslateOptions&);

    std::vector<ColTerm> literal_sum(const std::vector<Literal>& lits, double& rhs) const;
    ColTerm term_of(const LinearTerm& t) const;
    int add_aux_column(std::string base, ColKind kind, double lower, double upper,
                       ColOrigin origin);
    // head <=> sum(terms) cmp rhs over columns; shared by reified and
    // conditional sums.
    void reify_column_sum(Literal head, const std::vector<ColTerm>& terms, Comparator cmp,
                          double rhs, RowSource source, const std::string& tag);
    ColLit lit(const Literal& l) const { return {atom_col(l.atom), l.positive}; }

    const Theory& theory_;
    TranslateOptions options_;
    MipModel model_;
    std::vector<int> atom_cols_;
    std::vector<int> int_var_cols_;
    int aux_serial_ = 0;
};

// Requires a valid, normalized theory (MalformedTheoryError otherwise).
MipModel translate_theory(const Theory& t, const TranslateOptions& options = {});

}  // namespace ecnf2mip
