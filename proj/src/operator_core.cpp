#include "lspec/operator_core.hpp"

#include <cmath>
#include <string>

#include "lspec/errors.hpp"

namespace lspec {

LindbladModel::LindbladModel(ComplexMatrix hamiltonian, std::vector<JumpTerm> jumps)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  const Index d = hamiltonian_.rows();
  if (hamiltonian_.cols() != d) {
    throw DimensionError("hamiltonian must be square, got " + std::to_string(d) + "x" +
                         std::to_string(hamiltonian_.cols()));
  }
  if (d < 1) throw DimensionError("hamiltonian must have dimension >= 1");
  if (!all_finite(hamiltonian_)) throw DomainError("hamiltonian has non-finite entries");
  const double defect = hermiticity_defect(hamiltonian_);
  if (defect > kHermiticityTolerance) {
    throw DomainError("hamiltonian is not Hermitian: max |H - H^dagger| = " + std::to_string(defect));
  }
  for (std::size_t j = 0; j < jumps_.size(); ++j) {
    const auto& term = jumps_[j];
    if (term.op.rows() != d || term.op.cols() != d) {
      throw DimensionError("jump operator " + std::to_string(j) + " is " +
                           std::to_string(term.op.rows()) + "x" + std::to_string(term.op.cols()) +
                           ", expected " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate)) {
      throw DomainError("jump rate " + std::to_string(j) + " must be finite and >= 0");
    }
    if (!all_finite(term.op)) throw DomainError("jump operator " + std::to_string(j) + " is not finite");
  }
}

SuperoperatorMatrix::SuperoperatorMatrix(Index hilbert_dim, ComplexMatrix matrix,
                                         Vectorization convention)
    : hilbert_dim_(hilbert_dim), matrix_(std::move(matrix)), convention_(convention) {
  const Index n = hilbert_dim_ * hilbert_dim_;
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("superoperator must be " + std::to_string(n) + "x" + std::to_string(n));
  }
}

double SuperoperatorMatrix::trace_preservation_defect() const {
  const Index d = hilbert_dim_;
  double worst = 0.0;
  for (Index k = 0; k < matrix_.cols(); ++k) {
    cplx s{};
    for (Index i = 0; i < d; ++i) s += matrix_(i + d * i, k);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw DimensionError("vectorize: density matrix must be square, got " +
                         std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()));
  }
  // Eigen's default storage is already column-major.
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvectorize(const ComplexVector& v) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) {
    throw DimensionError("unvectorize: length " + std::to_string(v.size()) + " is not a square");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SuperoperatorMatrix assemble_superoperator(const LindbladModel& model) {
  const Index d = model.dim();
  const ComplexMatrix& h = model.hamiltonian();

  ComplexMatrix k_total = ComplexMatrix::Zero(d, d);
  for (const auto& term : model.jumps()) {
    if (term.rate == 0.0) continue;
    k_total += term.rate * (term.op.adjoint() * term.op);
  }
  // Left action on rho (inner index) and right action (outer index).
  const ComplexMatrix left = -kI * h - 0.5 * k_total;
  const ComplexMatrix right = kI * h - 0.5 * k_total;

  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (Index l = 0; l < d; ++l) {
    for (Index j = 0; j < d; ++j) {
      auto block = m.block(j * d, l * d, d, d);
      if (j == l) block += left;
      const cplx diag = right(l, j);
      if (diag != cplx{}) block.diagonal().array() += diag;
      for (const auto& term : model.jumps()) {
        const cplx c = term.rate * std::conj(term.op(j, l));
        if (c != cplx{}) block += c * term.op;
      }
    }
  }
  return SuperoperatorMatrix(d, std::move(m), Vectorization::ColumnStacking);
}

ComplexMatrix annihilation_operator(Index n_tr) {
  if (n_tr < 2) throw DomainError("annihilation_operator: n_tr must be >= 2");
  ComplexMatrix a = ComplexMatrix::Zero(n_tr, n_tr);
  for (Index n = 0; n + 1 < n_tr; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return a;
}

}  // namespace lspec
