#include "teamcount/sat.hpp"

#include <cstdlib>

#include "teamcount/error.hpp"

namespace teamcount {

namespace {

enum class Status { Sat, Conflict, Open };

std::int8_t value_of(int lit, const PartialAssignment& a) {
  const std::int8_t v = a[static_cast<std::size_t>(std::abs(lit))];
  if (v < 0) return -1;
  return lit > 0 ? v : static_cast<std::int8_t>(1 - v);
}

// Unit propagation to fixpoint. On Open, `branch` receives an unassigned
// variable from the first unresolved clause.
Status propagate(const std::vector<Clause>& clauses, PartialAssignment& a, int& branch) {
  bool changed = true;
  while (changed) {
    changed = false;
    branch = 0;
    bool all_sat = true;
    for (const auto& c : clauses) {
      int unassigned = 0, last = 0;
      bool sat = false;
      for (int lit : c) {
        const auto v = value_of(lit, a);
        if (v == 1) {
          sat = true;
          break;
        }
        if (v < 0) {
          ++unassigned;
          last = lit;
        }
      }
      if (sat) continue;
      if (unassigned == 0) return Status::Conflict;
      if (unassigned == 1) {
        a[static_cast<std::size_t>(std::abs(last))] = last > 0 ? 1 : 0;
        changed = true;
        continue;
      }
      all_sat = false;
      if (!branch) branch = std::abs(last);
    }
    if (!changed && all_sat) return Status::Sat;
  }
  return Status::Open;
}

bool dpll(const std::vector<Clause>& clauses, PartialAssignment& a) {
  int branch = 0;
  switch (propagate(clauses, a, branch)) {
    case Status::Sat: return true;
    case Status::Conflict: return false;
    case Status::Open: break;
  }
  for (std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
    PartialAssignment trial = a;
    trial[static_cast<std::size_t>(branch)] = value;
    if (dpll(clauses, trial)) {
      a = std::move(trial);
      return true;
    }
  }
  return false;
}

mpz_class count_rec(const std::vector<Clause>& clauses, PartialAssignment a) {
  int branch = 0;
  switch (propagate(clauses, a, branch)) {
    case Status::Conflict: return 0;
    case Status::Sat: {
      mpz_class free_count = 1;
      for (std::size_t v = 1; v < a.size(); ++v)
        if (a[v] < 0) free_count *= 2;
      return free_count;
    }
    case Status::Open: break;
  }
  mpz_class total = 0;
  for (std::int8_t value : {std::int8_t{0}, std::int8_t{1}}) {
    PartialAssignment trial = a;
    trial[static_cast<std::size_t>(branch)] = value;
    total += count_rec(clauses, std::move(trial));
  }
  return total;
}

}  // namespace

PartialAssignment empty_assignment(int num_vars) {
  return PartialAssignment(static_cast<std::size_t>(num_vars) + 1, -1);
}

bool satisfiable(const std::vector<Clause>& clauses, PartialAssignment& fixed) {
  return dpll(clauses, fixed);
}

bool satisfiable(const std::vector<Clause>& clauses, int num_vars) {
  auto a = empty_assignment(num_vars);
  return dpll(clauses, a);
}

mpz_class count_models(const std::vector<Clause>& clauses, int num_vars,
                       const PartialAssignment& fixed) {
  PartialAssignment a = fixed;
  a.resize(static_cast<std::size_t>(num_vars) + 1, -1);
  return count_rec(clauses, std::move(a));
}

bool dualhorn_sat(const std::vector<Clause>& clauses, int num_vars,
                  const PartialAssignment& fixed) {
  // zero[v]: v is forced to 0. Variables fixed to 0 start forced; variables
  // fixed to 1 can never be forced.
  std::vector<char> zero(static_cast<std::size_t>(num_vars) + 1, 0);
  std::vector<char> one(static_cast<std::size_t>(num_vars) + 1, 0);
  for (std::size_t v = 1; v < fixed.size() && v < zero.size(); ++v) {
    if (fixed[v] == 0) zero[v] = 1;
    if (fixed[v] == 1) one[v] = 1;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : clauses) {
      int negative = 0;
      std::size_t negatives = 0;
      bool satisfied = false;
      for (int lit : c) {
        const auto v = static_cast<std::size_t>(std::abs(lit));
        if (lit > 0) {
          if (!zero[v]) {
            satisfied = true;
            break;
          }
        } else {
          ++negatives;
          if (zero[v]) {
            satisfied = true;
            break;
          }
          negative = -lit;
        }
      }
      if (negatives > 1) throw PreconditionError("clause with two negative literals");
      if (satisfied) continue;
      if (negative == 0) return false;
      const auto v = static_cast<std::size_t>(negative);
      if (one[v]) return false;
      zero[v] = 1;
      changed = true;
    }
  }
  return true;
}

bool dualhorn_sat(const QBFormula& f) {
  if (!classify(f).dual_horn) throw PreconditionError("formula is not DualHorn");
  return dualhorn_sat(f.clauses(), f.num_vars(), empty_assignment(f.num_vars()));
}

}  // namespace teamcount
