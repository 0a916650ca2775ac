#pragma once

// Binary encodings of structures and the fixed structure encodings of
// Boolean formulas over τ_2CNF⁺ = {C/2}, τ_Σ₁CNF⁻ = {F/1, B/1, P/2, N/2} and
// τ_DualHorn = {C/1, P/2, N/2}.

#include <string>
#include <vector>

#include "teamcount/qbf.hpp"
#include "teamcount/structure.hpp"

namespace teamcount {

/// enc_σ: relations in vocabulary order, each row-major over n^arity.
std::string encode_structure(const Structure& s);

/// Variable order used as element order by the formula encodings: variables
/// in order of first occurrence in the clause list, then the remaining
/// declared variables by id.
std::vector<int> occurrence_order(const QBFormula& f);

Structure encode_2cnf_plus(const QBFormula& f);
Structure encode_sigma1cnf_neg(const QBFormula& f);
Structure encode_dualhorn(const QBFormula& f);

/// Structural well-formedness of a τ_Σ₁CNF⁻ structure.
bool validate_sigma1cnf_neg_structure(const Structure& s);

/// Inverse of encode_sigma1cnf_neg up to variable renaming: elements in F∪B
/// become variables 1.. in element order, the remaining elements clauses.
QBFormula decode_sigma1cnf_neg(const Structure& s);

/// Inverse of encode_2cnf_plus up to variable renaming (elements are
/// variables 1..n, each pair in C a clause, (x,x) a unit).
QBFormula decode_2cnf_plus(const Structure& s);

}  // namespace teamcount
