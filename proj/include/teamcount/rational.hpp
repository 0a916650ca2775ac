#pragma once

#include <vector>

#include <gmpxx.h>

namespace teamcount {

using RationalMatrix = std::vector<std::vector<mpq_class>>;

/// Solves A·x = b exactly by Gaussian elimination with partial pivoting on
/// nonzero entries. Throws PreconditionError if A is not square or singular.
std::vector<mpq_class> solve_linear(RationalMatrix a, std::vector<mpq_class> b);

/// A·x - b.
std::vector<mpq_class> residual(const RationalMatrix& a, const std::vector<mpq_class>& x,
                                const std::vector<mpq_class>& b);

/// Rows (node^0, node^1, ..., node^(size-1)) for each node.
RationalMatrix vandermonde(const std::vector<mpq_class>& nodes);

}  // namespace teamcount
