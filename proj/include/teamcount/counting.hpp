#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "teamcount/eval.hpp"
#include "teamcount/formula.hpp"
#include "teamcount/qbf.hpp"
#include "teamcount/structure.hpp"

namespace teamcount {

struct CountStats {
  std::uint64_t nodes = 0;         // candidates or search nodes visited
  std::uint64_t oracle_calls = 0;  // SAT / evaluator / oracle invocations
};

struct CountResult {
  mpz_class count;
  CountStats stats;
};

struct CountOptions {
  std::uint64_t budget = std::uint64_t{1} << 24;  // enumeration steps
  int jobs = 0;                                   // 0: OpenMP default
  const AtomRegistry* registry = nullptr;
  bool closure_pruning = true;
};

/// Number of nonempty teams over `vars` satisfying `f`. For downward-closed
/// formulas the search skips supersets of failing teams.
CountResult count_teams(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                        CountOptions options = {});
/// Single-threaded plain enumeration of all 2^(n^|vars|) - 1 candidates.
CountResult count_teams_serial(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                               CountOptions options = {});
/// Enumeration of all nonempty teams with the definitional evaluator.
CountResult count_teams_reference(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                                  CountOptions options = {});

/// A first-order formula with free relation symbols, free individual
/// variables and an optional ∃S̄ second-order prefix.
struct RelationQuery {
  std::vector<std::pair<std::string, std::size_t>> free_relations;
  std::vector<std::pair<std::string, std::size_t>> exists_relations;
  VarTuple free_individuals;
  FormulaPtr body;
};

/// |{(R̄, c̄) : A ⊨ ∃S̄ body(R̄, c̄)}|; with `nonempty_only` the tuples whose
/// free relations are all empty are skipped.
CountResult count_relations(const Structure& s, const RelationQuery& q, bool nonempty_only,
                            CountOptions options = {});
CountResult count_relations_serial(const Structure& s, const RelationQuery& q,
                                   bool nonempty_only, CountOptions options = {});

enum class CountMode { All, Star, Projected };

CountMode parse_count_mode(const std::string& text);
const char* to_string(CountMode mode);

/// All: satisfying assignments to every variable. Projected: free-variable
/// assignments with a satisfying extension to the bound variables. Star:
/// projected without the all-0 free assignment.
CountResult count_assignments(const QBFormula& f, CountMode mode, CountOptions options = {});
CountResult count_assignments_serial(const QBFormula& f, CountMode mode,
                                     CountOptions options = {});

/// Teams reachable from the maximal satisfying team by repeatedly dropping
/// one assignment and re-maximizing, deduplicated.
CountResult count_inclusion_teams(const Structure& s, const FormulaPtr& f, const VarTuple& vars,
                                  CountOptions options = {});

/// Whether some nonempty team over `vars` satisfies an FO(⊆) formula.
bool inclusion_team_exists(const Structure& s, const FormulaPtr& f, const VarTuple& vars);

/// Free-variable assignments of a Σ₁DualHorn formula with a satisfiable
/// residual, by branching on free variables (0 first) with a DualHorn SAT
/// check at every node.
CountResult count_sigma1_dualhorn(const QBFormula& f, CountOptions options = {});

}  // namespace teamcount
