#pragma once

// Small exact SAT / #SAT routines used by the counters and oracles.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "teamcount/qbf.hpp"

namespace teamcount {

/// Partial assignment indexed by variable id: -1 unassigned, 0 false, 1 true.
using PartialAssignment = std::vector<std::int8_t>;

PartialAssignment empty_assignment(int num_vars);

/// DPLL with unit propagation; `fixed` is extended in place on success.
bool satisfiable(const std::vector<Clause>& clauses, PartialAssignment& fixed);
bool satisfiable(const std::vector<Clause>& clauses, int num_vars);

/// Number of total assignments to variables 1..num_vars extending `fixed`
/// that satisfy every clause.
mpz_class count_models(const std::vector<Clause>& clauses, int num_vars,
                       const PartialAssignment& fixed);

/// Satisfiability of a clause set with at most one negative literal per
/// clause, by propagation downwards from the all-ones assignment.
/// Literals on variables fixed in `fixed` are simplified first.
bool dualhorn_sat(const std::vector<Clause>& clauses, int num_vars,
                  const PartialAssignment& fixed);
bool dualhorn_sat(const QBFormula& f);

}  // namespace teamcount
