#pragma once

#include <vector>

#include "teamcount/error.hpp"
#include "teamcount/formula.hpp"

namespace teamcount {

enum class AtomKind { Dependence, Inclusion };

/// ∀y₁..y_k ∃y_{k+1}..y_{k+l} (⋀ atoms ∧ θ) over free variables x₁..x_m.
struct NormalFormDescriptor {
  AtomKind kind = AtomKind::Dependence;
  VarTuple free_vars;
  VarTuple universal;
  VarTuple existential;
  std::vector<FormulaPtr> atoms;
  FormulaPtr matrix;  // quantifier-free first-order θ; null means no θ

  std::size_t m() const { return free_vars.size(); }
  std::size_t k() const { return universal.size(); }
  std::size_t l() const { return existential.size(); }
  /// x̄ followed by y₁..y_{k+l}.
  VarTuple all_vars() const;
};

class NotInNormalForm : public PreconditionError {
 public:
  NotInNormalForm(const std::string& what, FormulaPtr offending)
      : PreconditionError(what + ": " + to_string(*offending)), offending_(std::move(offending)) {}
  const FormulaPtr& offending() const { return offending_; }

 private:
  FormulaPtr offending_;
};

/// Recognizes the normal form. `free_order` fixes x̄ (it must list every
/// free variable); by default x̄ is the free variables in order of first
/// occurrence.
NormalFormDescriptor check_normal_form(const FormulaPtr& f, AtomKind kind,
                                       const VarTuple* free_order = nullptr);

/// Inverse of check_normal_form.
FormulaPtr build_normal_form(const NormalFormDescriptor& d);

}  // namespace teamcount
