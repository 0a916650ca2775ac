#include "teamcount/rational.hpp"

#include "teamcount/error.hpp"

namespace teamcount {

std::vector<mpq_class> solve_linear(RationalMatrix a, std::vector<mpq_class> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw PreconditionError("right-hand side has the wrong length");
  for (const auto& row : a)
    if (row.size() != n) throw PreconditionError("linear system is not square");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw PreconditionError("singular linear system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<mpq_class> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

std::vector<mpq_class> residual(const RationalMatrix& a, const std::vector<mpq_class>& x,
                                const std::vector<mpq_class>& b) {
  std::vector<mpq_class> out(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    mpq_class sum = 0;
    for (std::size_t c = 0; c < x.size(); ++c) sum += a[r][c] * x[c];
    out[r] = sum - b[r];
  }
  return out;
}

RationalMatrix vandermonde(const std::vector<mpq_class>& nodes) {
  RationalMatrix m(nodes.size(), std::vector<mpq_class>(nodes.size()));
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    mpq_class power = 1;
    for (std::size_t c = 0; c < nodes.size(); ++c) {
      m[r][c] = power;
      power *= nodes[r];
    }
  }
  return m;
}

}  // namespace teamcount
