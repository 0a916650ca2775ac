#pragma once

// Team-logic formulas in negation normal form: first-order literals,
// dependence / independence / inclusion atoms, generalized atoms, lax
// connectives and quantifiers.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace teamcount {

enum class NodeKind {
  Rel,     // R(x̄) or ¬R(x̄); also the built-ins "<=", "+", "*"
  Eq,      // x = y or x ≠ y
  Dep,     // =(x̄, y)
  Indep,   // ȳ ⊥_x̄ z̄
  Incl,    // x̄ ⊆ ȳ
  Gen,     // registered generalized atom
  And,
  Or,
  Exists,
  Forall,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;
using VarTuple = std::vector<std::string>;
/// Relation name -> arity.
using Vocabulary = std::map<std::string, std::size_t>;

/// Immutable AST node. Atom arguments live in `args`:
///   Rel    {args}          Eq    {{x, y}}
///   Dep    {x̄, {y}}        Indep {ȳ, x̄, z̄}
///   Incl   {x̄, ȳ}          Gen   {x̄₁, ..., x̄ₙ}
/// Quantifiers keep the bound variable in `name` and the body in `left`.
struct Formula {
  NodeKind kind;
  bool negated = false;
  std::string name;
  std::vector<VarTuple> args;
  FormulaPtr left;
  FormulaPtr right;

  const FormulaPtr& body() const { return left; }
  bool is_atom() const { return kind < NodeKind::And; }
  bool is_quantifier() const {
    return kind == NodeKind::Exists || kind == NodeKind::Forall;
  }
};

// Builders.
FormulaPtr rel(std::string name, VarTuple args, bool negated = false);
FormulaPtr eq(std::string x, std::string y, bool negated = false);
FormulaPtr dep(VarTuple determiners, std::string dependent);
FormulaPtr indep(VarTuple ys, VarTuple xs, VarTuple zs);
FormulaPtr incl(VarTuple xs, VarTuple ys);
FormulaPtr gen_atom(std::string name, std::vector<VarTuple> tuples);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
/// Left-nested conjunction/disjunction; the vector must be nonempty.
FormulaPtr conj(const std::vector<FormulaPtr>& parts);
FormulaPtr disj(const std::vector<FormulaPtr>& parts);
FormulaPtr exists(std::string var, FormulaPtr body);
FormulaPtr forall(std::string var, FormulaPtr body);
FormulaPtr exists(const VarTuple& vars, FormulaPtr body);
FormulaPtr forall(const VarTuple& vars, FormulaPtr body);

bool is_builtin_relation(const std::string& name);

/// Which non-first-order atoms occur in a formula.
struct AtomUsage {
  bool dependence = false;
  bool independence = false;
  bool inclusion = false;
  bool generalized = false;

  bool first_order() const {
    return !dependence && !independence && !inclusion && !generalized;
  }
  /// FO(=(...)): closed downwards.
  bool dependence_logic() const {
    return !independence && !inclusion && !generalized;
  }
  /// FO(⊆): closed under unions.
  bool inclusion_logic() const {
    return !dependence && !independence && !generalized;
  }
};

AtomUsage atom_usage(const Formula& f);
std::set<std::string> free_variables(const Formula& f);
/// Free variables in order of first occurrence (left to right).
VarTuple free_variables_ordered(const Formula& f);
/// Names used anywhere (free, bound, or quantified).
std::set<std::string> all_variables(const Formula& f);

bool structurally_equal(const Formula& a, const Formula& b);

/// DSL rendering; `parse_team_formula(to_string(f))` rebuilds `f` exactly.
std::string to_string(const Formula& f);

/// Negation pushed to the atoms. Only defined for first-order formulas.
FormulaPtr negate(const Formula& f);

/// Simultaneous capture-avoiding renaming of free variables.
FormulaPtr rename_free(const FormulaPtr& f,
                       const std::map<std::string, std::string>& renaming);

/// Relation symbols (name -> arity) used by a formula, excluding built-ins.
std::map<std::string, std::size_t> relation_symbols(const Formula& f);

}  // namespace teamcount
