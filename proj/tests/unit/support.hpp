#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "lspec/linalg.hpp"
#include "lspec/operator_core.hpp"

namespace lspec::test {

// Lindblad right-hand side applied to one matrix, straight from the definition.
inline ComplexMatrix lindblad_action(const LindbladModel& m, const ComplexMatrix& rho) {
  const ComplexMatrix& h = m.hamiltonian();
  ComplexMatrix out = -kI * (h * rho - rho * h);
  for (const auto& j : m.jumps()) {
    const ComplexMatrix k = j.op.adjoint() * j.op;
    out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (k * rho + rho * k));
  }
  return out;
}

// Superoperator built column by column from the action on |a><b|.
inline ComplexMatrix brute_force_superoperator(const LindbladModel& m) {
  const Index d = m.dim();
  ComplexMatrix s(d * d, d * d);
  for (Index b = 0; b < d; ++b) {
    for (Index a = 0; a < d; ++a) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(a, b) = 1.0;
      s.col(a + d * b) = vectorize(lindblad_action(m, e));
    }
  }
  return s;
}

inline ComplexMatrix random_matrix(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = cplx{g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_density(Index n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, rng);
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline ComplexVector random_state(Index n, std::mt19937_64& rng) {
  ComplexVector v = random_matrix(n, rng).col(0);
  return v / v.norm();
}

// Largest distance after greedily matching each element of a to its nearest
// unused element of b.
inline double setwise_error(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const cplx& z : a) {
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(z - b[j]) < best) {
        best = std::abs(z - b[j]);
        arg = j;
      }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace lspec::test
