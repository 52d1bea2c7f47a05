#pragma once

#include <complex>

#include <Eigen/Dense>

namespace lspec {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

bool all_finite(const ComplexMatrix& m);

/// Largest |m_ij - conj(m_ji)|.
double hermiticity_defect(const ComplexMatrix& m);

/// Matrix exponential by scaling and squaring with a [13/13] Pade approximant
/// (lower degrees when the 1-norm allows), following Higham's 2005 algorithm.
ComplexMatrix expm(const ComplexMatrix& a);

/// expm(scale * a) without materializing scale * a.
ComplexMatrix expm_scaled(const ComplexMatrix& a, double scale);

double norm1(const ComplexMatrix& a);

/// Singular values in descending order. The argument is consumed as LAPACK workspace.
RealVector singular_values(ComplexMatrix a);

double spectral_norm(const ComplexMatrix& a);

struct HermitianEigen {
  RealVector values;       // ascending
  ComplexMatrix vectors;   // orthonormal columns
};

/// Eigendecomposition of a Hermitian matrix. Only the lower triangle is read.
HermitianEigen hermitian_eigen(ComplexMatrix a);

struct GeneralEigen {
  ComplexVector values;
  ComplexMatrix left;    // columns: M^dagger z = conj(mu) z, unit 2-norm
  ComplexMatrix right;   // columns: M x = mu x, unit 2-norm
};

/// Dense nonsymmetric eigendecomposition (LAPACK zgeev). Left and right
/// eigenvectors come from the same Schur form, so column n of each belongs to
/// values[n]. Throws DecompositionError when QR iterations fail.
GeneralEigen general_eigen(ComplexMatrix a, bool want_vectors = true);

}  // namespace lspec
