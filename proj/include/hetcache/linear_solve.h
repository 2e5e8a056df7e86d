#ifndef HETCACHE_LINEAR_SOLVE_H_
#define HETCACHE_LINEAR_SOLVE_H_

#include <array>
#include <cstddef>
#include <optional>
#include <utility>

namespace hetcache {

template <typename Scalar, std::size_t Dim>
using SquareMatrix = std::array<std::array<Scalar, Dim>, Dim>;

template <typename Scalar, std::size_t Dim>
using Vector = std::array<Scalar, Dim>;

// Solves a * x = b by Gaussian elimination. Scalar must be an exact field
// (pivots are any nonzero entry). Returns nullopt when a is singular.
template <typename Scalar, std::size_t Dim>
std::optional<Vector<Scalar, Dim>> SolveExact(SquareMatrix<Scalar, Dim> a,
                                              Vector<Scalar, Dim> b) {
  for (std::size_t col = 0; col < Dim; ++col) {
    std::size_t pivot = col;
    while (pivot < Dim && a[pivot][col] == 0) ++pivot;
    if (pivot == Dim) return std::nullopt;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t row = col + 1; row < Dim; ++row) {
      if (a[row][col] == 0) continue;
      const Scalar factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < Dim; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  Vector<Scalar, Dim> x;
  for (std::size_t i = Dim; i-- > 0;) {
    Scalar acc = b[i];
    for (std::size_t k = i + 1; k < Dim; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace hetcache

#endif  // HETCACHE_LINEAR_SOLVE_H_
