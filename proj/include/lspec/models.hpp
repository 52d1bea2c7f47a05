#pragma once

#include <vector>

#include "lspec/operator_core.hpp"

namespace lspec {

/// Driven damped oscillator: H = omega a^dag a + eta (a + a^dag), loss gamma1
/// via a, gain gamma2 via a^dag, Fock states 0..n_tr-1.
struct OscillatorParams {
  double omega = 0.0;
  double eta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Index n_tr = 2;

  double net_damping() const { return gamma1 - gamma2; }
};

enum class Boundary { Periodic, Open };

/// Tight-binding chain with hopping J and incoherent right (gamma1) / left
/// (gamma2) tunnelling.
struct ChainParams {
  double hopping = 1.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Index length = 2;
  Boundary boundary = Boundary::Open;
};

/// Displaced thermal state D(alpha) rho_th(nu) D(alpha)^dag.
struct GaussianOscState {
  cplx alpha{};
  double nu = 0.0;
};

/// Parameter sets used by the figure pipelines: omega = 0, eta = 1/(2 sqrt 2),
/// gamma2 = 0.05, gamma1 - gamma2 = 5e-5 for the oscillator; J = 1,
/// gamma1 = 2, gamma2 = 0.1 for the chain.
OscillatorParams reference_oscillator(Index n_tr);
ChainParams reference_chain(Index length, Boundary boundary = Boundary::Open);

void validate(const OscillatorParams& p);
void validate(const ChainParams& p);

LindbladModel build_oscillator(const OscillatorParams& p);
LindbladModel build_chain(const ChainParams& p);

/// mu_{n,m} = -(g/2)(n+m) + i omega (n-m) with g = gamma1 - gamma2, ordered
/// n-major (n = 0..max_n, m = 0..max_m). Requires gamma1 > gamma2.
std::vector<cplx> oscillator_analytic_spectrum(const OscillatorParams& p, Index max_n, Index max_m);

/// All L^2 values of the closed-form PBC spectrum over theta_j = 2 pi j / L,
/// ordered (j, k) row-major with theta = theta_j, theta~ = theta_k.
std::vector<cplx> chain_analytic_spectrum_pbc(const ChainParams& p);

/// Closed-form Gaussian evolution for t >= 0:
///   alpha' = -(i omega + (g1 - g2)/2) alpha - i eta,   nu' = -(g1 - g2) nu + g2.
GaussianOscState oscillator_gaussian_evolve(const OscillatorParams& p, const GaussianOscState& s0,
                                            double t);

/// Density matrix of a displaced thermal state on n_tr Fock levels, built with
/// 10 extra levels and projected back, renormalized to unit trace.
ComplexMatrix gaussian_to_density_matrix(const GaussianOscState& s, Index n_tr);

/// Exact PBC evolution: each Fourier mode |theta><theta~| evolves with its own
/// generator eigenvalue. Independent of the superoperator code path.
ComplexMatrix chain_pbc_fourier_evolve(const ChainParams& p, const ComplexMatrix& rho0, double t);

}  // namespace lspec
