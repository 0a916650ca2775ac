#pragma once

#include <string>
#include <vector>

#include "teamcount/formula.hpp"
#include "teamcount/structure.hpp"

namespace teamcount {

struct InterpretedRelation {
  std::string name;
  std::size_t arity = 0;
  VarTuple vars;  // k·arity variables: block j is the j-th target argument
  FormulaPtr formula;
};

/// Width-k first-order interpretation. The target domain is the set of
/// k-tuples satisfying `domain` (null: every k-tuple), in row-major order.
struct FOInterpretation {
  std::size_t k = 1;
  VarTuple domain_vars;
  FormulaPtr domain;
  std::vector<InterpretedRelation> relations;

  Vocabulary target_vocabulary() const;
  /// Relation symbols used by the defining formulas.
  Vocabulary source_vocabulary() const;
};

/// Checks widths, free variables and that every formula is first-order.
void validate(const FOInterpretation& interp);

/// Identity interpretation (k = 1) for a vocabulary.
FOInterpretation identity_interpretation(const Vocabulary& vocabulary);

/// v#1..v#k
VarTuple block_vars(const std::string& var, std::size_t k);
VarTuple block_vars(const VarTuple& vars, std::size_t k);

/// Tuples of the source domain forming the target domain, in element order.
std::vector<Tuple> interpretation_domain(const FOInterpretation& interp, const Structure& source);

/// Target structure. Element labels are the tuples read as numerals in base
/// label_base()^k, so the tuple built-ins agree with the source k-blocks.
Structure apply_interpretation(const FOInterpretation& interp, const Structure& source);

/// Team over `target_vars` from a source team over their k-blocks.
Team interpret_team(const FOInterpretation& interp, const Structure& source, const Team& team,
                    const VarTuple& target_vars);
/// Inverse of interpret_team: a target team as a source team over blocks.
Team lift_team(const FOInterpretation& interp, const Structure& source, const Team& target_team);

/// Source formula over the k-blocks of φ's variables such that source ⊨_X ψ
/// iff target ⊨_{I(X)} φ, for teams X of domain tuples.
FormulaPtr translate_formula(const FOInterpretation& interp, const FormulaPtr& phi);

}  // namespace teamcount
