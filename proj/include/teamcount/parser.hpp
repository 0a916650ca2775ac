#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "teamcount/formula.hpp"

namespace teamcount {

/// Parses the team-logic DSL:
///
///   R(x,y)  !R(x,y)  x=y  x!=y  dep(x1,...;y)  inc(x1,...;y1,...)
///   ind(y...|x...|z...)  atom NAME(t1;t2;...)  <=(..)  +(..)  *(..)
///   φ & ψ   φ | ψ   A x. φ   E x. φ   φ -> ψ   ( φ )
///
/// `&` binds tighter than `|`, both associate to the left, quantifier bodies
/// extend as far right as possible and `->` (first-order antecedent only) is
/// right associative with the lowest precedence. When `vocabulary` is given,
/// relation arities are checked against it.
FormulaPtr parse_team_formula(std::string_view text, const Vocabulary* vocabulary = nullptr);

}  // namespace teamcount
