#pragma once

#include <cstdint>
#include <functional>

#include <gmpxx.h>

#include "teamcount/counting.hpp"
#include "teamcount/normal_form.hpp"
#include "teamcount/qbf.hpp"
#include "teamcount/structure.hpp"

namespace teamcount {

/// Numbering of the propositional variables X_s for s ∈ A^m ∪ … ∪ A^{m+depth}.
/// Layer i holds the n^{m+i} assignments of length m+i; ids start at
/// offset(i) = 1 + Σ_{j<i} n^{m+j} and follow the row-major rank of s.
class PropVarIndex {
 public:
  PropVarIndex(std::size_t n, std::size_t m, std::size_t depth);

  std::size_t domain_size() const { return n_; }
  std::size_t layers() const { return offsets_.size() - 1; }
  std::uint64_t layer_size(std::size_t layer) const;
  int offset(std::size_t layer) const { return offsets_.at(layer); }
  int total() const { return offsets_.back() - 1; }

  int id(std::size_t layer, std::uint64_t rank) const;
  int id(const Tuple& s) const;
  /// Inverse of id: the partial assignment s.
  Tuple index(int id) const;
  std::size_t layer_of(int id) const;

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<int> offsets_;
};

/// Γ for a dependence normal form: the nonempty teams X over x̄ satisfying
/// the formula correspond to the nonzero free assignments S(X_s) = [s ∈ X]
/// that extend to a model. Free variables are layer 0 and occur only
/// negatively.
QBFormula dep_to_sigma1cnf_neg(const Structure& s, const NormalFormDescriptor& d);

/// Γ for an inclusion normal form ∀ȳ∃z̄(⋀ inclusion atoms ∧ θ). Every clause
/// has at most one negative literal. Each deeper X_s implies the variable of
/// its parent assignment, so Γ is exact under the same correspondence.
QBFormula incl_to_sigma1_dualhorn(const Structure& s, const NormalFormDescriptor& d);

/// Layer summary emitted into the DIMACS comment block.
std::vector<std::string> layer_comments(const PropVarIndex& index);

using StarOracle = std::function<mpz_class(const QBFormula&)>;

/// Star count via count_assignments(·, Star).
StarOracle brute_force_star_oracle(CountOptions options = {});

struct StarTuringResult {
  CountResult result;
  mpz_class probe_answer;
  QBFormula probe;
};

/// Projected count of a Σ₁CNF⁻ formula from a star-count oracle: the probe
/// φ′ ∧ (¬a ∨ ¬b), with φ′ the formula under the all-0 free assignment and
/// a, b fresh free variables, has star count 0 or 2. Any other answer raises
/// OracleFault.
StarTuringResult star_turing_reduction(const QBFormula& f, const StarOracle& oracle);

}  // namespace teamcount
