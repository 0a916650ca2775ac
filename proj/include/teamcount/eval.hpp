#pragma once

// Lax team semantics.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "teamcount/formula.hpp"
#include "teamcount/structure.hpp"

namespace teamcount {

/// Value tuples of one atom argument, sorted and unique.
using TupleSet = std::vector<Tuple>;

struct GeneralizedAtomDef {
  std::string name;
  std::vector<std::size_t> type;  // arities i₁..iₙ
  std::function<bool(std::size_t domain_size, std::span<const TupleSet> relations)> evaluator;
};

/// Registry of generalized atoms. Registrants are responsible for their
/// evaluator being deterministic and closed under isomorphisms.
class AtomRegistry {
 public:
  std::size_t register_atom(GeneralizedAtomDef def);
  const GeneralizedAtomDef* find(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<GeneralizedAtomDef> defs_;
  std::map<std::string, std::size_t> index_;
};

using Assignment = std::map<std::string, Element>;

struct EvalOptions {
  const AtomRegistry* registry = nullptr;
  std::uint64_t budget = std::uint64_t{1} << 24;  // enumeration steps per query
};

/// Encoded team: each assignment over the scope (v₀..v_{k-1}) is the base-n
/// numeral v₀v₁..v_{k-1}; teams are sorted vectors of codes.
using Code = std::uint64_t;
using CodeTeam = std::vector<Code>;

/// Compiled evaluator for one formula over a fixed team domain. Not
/// thread-safe; create one instance per worker.
class Evaluator {
 public:
  Evaluator(const Structure& s, const FormulaPtr& f, const VarTuple& team_vars,
            EvalOptions options = {});
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  bool satisfies(const CodeTeam& team);
  bool satisfies(const Team& team);

  /// Union of all subteams satisfying the formula; requires an FO(⊆) formula.
  CodeTeam max_subteam(const CodeTeam& team);
  Team max_subteam(const Team& team);

  /// Pointwise evaluation of a dependency-free formula.
  bool tarski(Code assignment);

  Code encode(const Tuple& row) const;
  Tuple decode(Code c) const;
  CodeTeam encode(const Team& team) const;
  Team decode(const CodeTeam& team) const;

  bool downward_closed() const;
  bool union_closed() const;
  bool first_order() const;
  std::uint64_t steps() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool eval(const Structure& s, const Team& team, const FormulaPtr& f,
          EvalOptions options = {});

/// Tarskian truth of a first-order formula (no dependency atoms).
bool eval_tarski(const Structure& s, const Assignment& a, const Formula& f);

/// Definitional evaluator: enumerates every cover for ∨ and every
/// supplementing function for ∃. Exponential; used as a test oracle.
bool eval_reference(const Structure& s, const Team& team, const FormulaPtr& f,
                    EvalOptions options = {});

Team max_subteam(const Structure& s, const Team& team, const FormulaPtr& f);
/// Union of all satisfying subteams found by exhaustive enumeration with
/// eval_reference.
Team max_subteam_reference(const Structure& s, const Team& team, const FormulaPtr& f,
                           EvalOptions options = {});

/// Registry with two standard atoms: "nonempty" (type 1) and "subset"
/// (type 1,1; the first relation is contained in the second).
AtomRegistry standard_registry();

}  // namespace teamcount
