#pragma once

#include <vector>

#include "lspec/linalg.hpp"

namespace lspec {

struct JumpTerm {
  ComplexMatrix op;
  double rate = 0.0;  // inverse time, >= 0
};

/// Hamiltonian plus rated jump operators on a D-dimensional Hilbert space.
/// Validated on construction: H Hermitian to 1e-12, rates >= 0, all operators
/// D x D with finite entries. Inputs failing validation are rejected, never
/// symmetrized.
class LindbladModel {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  LindbladModel(ComplexMatrix hamiltonian, std::vector<JumpTerm> jumps);

  Index dim() const { return hamiltonian_.rows(); }
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<JumpTerm>& jumps() const { return jumps_; }

 private:
  ComplexMatrix hamiltonian_;
  std::vector<JumpTerm> jumps_;
};

enum class Vectorization { ColumnStacking };

/// D^2 x D^2 generator acting on vectorized density matrices. The
/// vectorization convention travels with the matrix.
class SuperoperatorMatrix {
 public:
  SuperoperatorMatrix(Index hilbert_dim, ComplexMatrix matrix,
                      Vectorization convention = Vectorization::ColumnStacking);

  Index hilbert_dim() const { return hilbert_dim_; }
  Index liouville_dim() const { return matrix_.rows(); }
  Vectorization convention() const { return convention_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Moves the matrix out (for consumers such as eigensolvers that work in place).
  ComplexMatrix release() && { return std::move(matrix_); }

  /// max_k |sum_i L_{(i,i),k}|: the row vec(I)^dagger L must vanish.
  double trace_preservation_defect() const;

 private:
  Index hilbert_dim_;
  ComplexMatrix matrix_;
  Vectorization convention_;
};

/// Column stacking: entry (i + D*j) holds rho(i, j).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v);

/// Kronecker product A (x) B with A as the outer index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Builds -i(I(x)H - H^T(x)I) + sum_j g_j [conj(L_j)(x)L_j - 1/2 I(x)K_j - 1/2 K_j^T(x)I],
/// K_j = L_j^dagger L_j, in place without Kronecker temporaries.
SuperoperatorMatrix assemble_superoperator(const LindbladModel& model);

/// Truncated bosonic annihilation operator on states 0..n_tr-1.
ComplexMatrix annihilation_operator(Index n_tr);

}  // namespace lspec
