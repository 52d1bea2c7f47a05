#include "lspec/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lspec/errors.hpp"
#include "lspec/log.hpp"

namespace lspec {

namespace {

// e^z - 1 without cancellation for small |z|.
cplx expm1(cplx z) {
  const double em1 = std::expm1(z.real());
  const double s = std::sin(0.5 * z.imag());
  return {em1 * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

void require_net_damping(const OscillatorParams& p, const char* who) {
  if (!(p.gamma1 > p.gamma2)) {
    throw DomainError(std::string(who) + ": requires gamma1 > gamma2 (net damping)");
  }
}

}  // namespace

OscillatorParams reference_oscillator(Index n_tr) {
  OscillatorParams p;
  p.omega = 0.0;
  p.eta = 1.0 / (2.0 * std::numbers::sqrt2);
  p.gamma2 = 0.05;
  p.gamma1 = 0.05 + 5e-5;
  p.n_tr = n_tr;
  return p;
}

ChainParams reference_chain(Index length, Boundary boundary) {
  ChainParams p;
  p.hopping = 1.0;
  p.gamma1 = 2.0;
  p.gamma2 = 0.1;
  p.length = length;
  p.boundary = boundary;
  return p;
}

void validate(const OscillatorParams& p) {
  if (p.n_tr < 2) throw DomainError("oscillator: n_tr must be >= 2");
  if (!(p.gamma1 >= 0.0) || !(p.gamma2 >= 0.0)) throw DomainError("oscillator: rates must be >= 0");
  if (!std::isfinite(p.omega) || !std::isfinite(p.eta) || !std::isfinite(p.gamma1) ||
      !std::isfinite(p.gamma2)) {
    throw DomainError("oscillator: parameters must be finite");
  }
}

void validate(const ChainParams& p) {
  if (p.length < 2) throw DomainError("chain: length must be >= 2");
  if (!(p.gamma1 >= 0.0) || !(p.gamma2 >= 0.0)) throw DomainError("chain: rates must be >= 0");
  if (!std::isfinite(p.hopping) || !std::isfinite(p.gamma1) || !std::isfinite(p.gamma2)) {
    throw DomainError("chain: parameters must be finite");
  }
}

LindbladModel build_oscillator(const OscillatorParams& p) {
  validate(p);
  const ComplexMatrix a = annihilation_operator(p.n_tr);
  const ComplexMatrix ad = a.adjoint();
  ComplexMatrix h = p.omega * (ad * a) + p.eta * (a + ad);
  std::vector<JumpTerm> jumps;
  jumps.push_back({a, p.gamma1});
  jumps.push_back({ad, p.gamma2});
  return LindbladModel(std::move(h), std::move(jumps));
}

LindbladModel build_chain(const ChainParams& p) {
  validate(p);
  const Index l = p.length;
  ComplexMatrix h = ComplexMatrix::Zero(l, l);
  ComplexMatrix hop = ComplexMatrix::Zero(l, l);
  const Index bonds = p.boundary == Boundary::Periodic ? l : l - 1;
  for (Index n = 0; n < bonds; ++n) {
    const Index next = (n + 1) % l;
    h(next, n) += -p.hopping;
    h(n, next) += -p.hopping;
    hop(n, next) += 1.0;
  }
  std::vector<JumpTerm> jumps;
  jumps.push_back({hop, p.gamma1});
  jumps.push_back({hop.adjoint(), p.gamma2});
  return LindbladModel(std::move(h), std::move(jumps));
}

std::vector<cplx> oscillator_analytic_spectrum(const OscillatorParams& p, Index max_n, Index max_m) {
  require_net_damping(p, "oscillator_analytic_spectrum");
  if (max_n < 0 || max_m < 0) throw DomainError("oscillator_analytic_spectrum: negative index bound");
  const double g = p.net_damping();
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>((max_n + 1) * (max_m + 1)));
  for (Index n = 0; n <= max_n; ++n) {
    for (Index m = 0; m <= max_m; ++m) {
      out.emplace_back(-0.5 * g * static_cast<double>(n + m), p.omega * static_cast<double>(n - m));
    }
  }
  return out;
}

std::vector<cplx> chain_analytic_spectrum_pbc(const ChainParams& p) {
  validate(p);
  if (p.boundary != Boundary::Periodic) {
    throw DomainError("chain_analytic_spectrum_pbc: no closed form for open boundaries");
  }
  const Index l = p.length;
  const double gsum = p.gamma1 + p.gamma2;
  const double gdiff = p.gamma1 - p.gamma2;
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(l * l));
  for (Index j = 0; j < l; ++j) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(l);
    for (Index k = 0; k < l; ++k) {
      const double tt = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(l);
      const double d = th - tt;
      out.emplace_back(-gsum * (1.0 - std::cos(d)),
                       gdiff * std::sin(d) - 2.0 * p.hopping * (std::cos(th) - std::cos(tt)));
    }
  }
  return out;
}

GaussianOscState oscillator_gaussian_evolve(const OscillatorParams& p, const GaussianOscState& s0,
                                            double t) {
  require_net_damping(p, "oscillator_gaussian_evolve");
  if (!(s0.nu >= 0.0)) throw DomainError("oscillator_gaussian_evolve: nu must be >= 0");
  if (!(t >= 0.0)) throw DomainError("oscillator_gaussian_evolve: t must be >= 0");
  const double kappa = p.net_damping();
  const cplx lambda{0.5 * kappa, p.omega};
  // 1 - e^{-lambda t} = -expm1(-lambda t)
  const cplx relax = -expm1(-lambda * t);
  GaussianOscState s;
  s.alpha = s0.alpha * (1.0 - relax) - kI * p.eta * relax / lambda;
  const double nu_ss = p.gamma2 / kappa;
  s.nu = s0.nu + (nu_ss - s0.nu) * (-std::expm1(-kappa * t));
  return s;
}

ComplexMatrix gaussian_to_density_matrix(const GaussianOscState& s, Index n_tr) {
  if (n_tr < 2) throw DomainError("gaussian_to_density_matrix: n_tr must be >= 2");
  if (!(s.nu >= 0.0)) throw DomainError("gaussian_to_density_matrix: nu must be >= 0");
  const double mean_n = std::norm(s.alpha) + s.nu;
  if (mean_n > 0.25 * static_cast<double>(n_tr)) {
    log_warning("gaussian_to_density_matrix: <n> = " + std::to_string(mean_n) +
                " exceeds n_tr/4; truncation error may be large");
  }
  const Index n_big = n_tr + 10;
  const ComplexMatrix a = annihilation_operator(n_big);
  const ComplexMatrix disp = expm(s.alpha * a.adjoint() - std::conj(s.alpha) * a);

  RealVector weights(n_big);
  const double ratio = s.nu / (1.0 + s.nu);
  double w = 1.0 / (1.0 + s.nu);
  for (Index n = 0; n < n_big; ++n) {
    weights(n) = w;
    w *= ratio;
  }
  const ComplexMatrix big = disp * weights.asDiagonal() * disp.adjoint();
  ComplexMatrix rho = big.topLeftCorner(n_tr, n_tr);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw DomainError("gaussian_to_density_matrix: no weight inside truncation");
  return rho / tr;
}

ComplexMatrix chain_pbc_fourier_evolve(const ChainParams& p, const ComplexMatrix& rho0, double t) {
  validate(p);
  const Index l = p.length;
  if (rho0.rows() != l || rho0.cols() != l) {
    throw DimensionError("chain_pbc_fourier_evolve: rho0 must be " + std::to_string(l) + "x" +
                         std::to_string(l));
  }
  // Columns of u are the normalized momentum states sum_n e^{i theta n}|n>.
  ComplexMatrix u(l, l);
  std::vector<double> theta(static_cast<std::size_t>(l));
  for (Index j = 0; j < l; ++j) {
    theta[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(l);
    for (Index n = 0; n < l; ++n) {
      u(n, j) = std::polar(1.0 / std::sqrt(static_cast<double>(l)),
                           theta[j] * static_cast<double>(n));
    }
  }
  ComplexMatrix modes = u.adjoint() * rho0 * u;
  const double gsum = p.gamma1 + p.gamma2;
  const double gdiff = p.gamma1 - p.gamma2;
  for (Index k = 0; k < l; ++k) {
    for (Index j = 0; j < l; ++j) {
      // |theta_j><theta_k| picks up e^{i D} from L.L^dag-sandwiching and
      // -i(E_j - E_k) with E = -2J cos(theta).
      const double d = theta[j] - theta[k];
      const cplx rate{-gsum * (1.0 - std::cos(d)),
                      gdiff * std::sin(d) + 2.0 * p.hopping * (std::cos(theta[j]) - std::cos(theta[k]))};
      modes(j, k) *= std::exp(rate * t);
    }
  }
  return u * modes * u.adjoint();
}

}  // namespace lspec
