#pragma once

// Propositional CNF with an existential prefix (Σ₁ formulas). Variables are
// 1..num_vars; a literal is a nonzero int, negative for negated occurrences.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace teamcount {

using Clause = std::vector<int>;

struct ClassFlags {
  bool cnf_plus = false;   // free variables occur only positively
  bool cnf_minus = false;  // free variables occur only negatively
  bool dual_horn = false;  // at most one negative literal per clause
  bool quantifier_free = false;
  std::size_t width = 0;   // longest clause

  bool is_kcnf(std::size_t k) const { return width <= k; }
  bool operator==(const ClassFlags&) const = default;
};

class QBFormula {
 public:
  QBFormula() = default;
  explicit QBFormula(int num_vars);

  int num_vars() const { return static_cast<int>(bound_.size()) - 1; }
  /// Adds a fresh variable and returns its id.
  int add_var(bool bound = false, std::string name = {});
  /// Grows the variable range to at least `n` (new variables are free).
  void reserve_vars(int n);

  bool is_bound(int var) const { return bound_.at(static_cast<std::size_t>(var)); }
  void set_bound(int var, bool bound = true);
  std::vector<int> free_vars() const;
  std::vector<int> bound_vars() const;

  /// Normalizes (sorts by variable, drops repeated literals) and appends.
  void add_clause(Clause c);
  const std::vector<Clause>& clauses() const { return clauses_; }

  const std::string& name(int var) const;
  void set_name(int var, std::string name);
  bool has_names() const;

  std::vector<std::string>& comments() { return comments_; }
  const std::vector<std::string>& comments() const { return comments_; }

 private:
  std::vector<bool> bound_ = {false};
  std::vector<std::string> names_ = {""};
  std::vector<Clause> clauses_;
  std::vector<std::string> comments_;
};

Clause normalize_clause(Clause c);
bool is_tautology(const Clause& c);

ClassFlags classify(const QBFormula& f);

/// DIMACS with an optional single `e v1 v2 ... 0` prefix line. Variables not
/// listed in the prefix are free. Comment lines `c var ID NAME` carry
/// variable names.
QBFormula parse_cnf(std::string_view text);
std::string to_dimacs(const QBFormula& f);

/// Conjunction of `a` and `b` under the merged existential prefix. Free
/// variables are shared by id. When a variable is bound in one formula and
/// also used by the other, the bound copy is moved to a fresh id if `rename`
/// is set; otherwise a PreconditionError is raised.
QBFormula prenex_conjoin(const QBFormula& a, const QBFormula& b, bool rename = true);

/// Literals of `c` whose variable is in `vars` (sorted ids).
Clause clause_restrict(const Clause& c, const std::vector<int>& vars);

}  // namespace teamcount
