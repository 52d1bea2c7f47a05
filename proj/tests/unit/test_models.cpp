#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lspec/dynamics.hpp"
#include "lspec/errors.hpp"
#include "lspec/models.hpp"
#include "lspec/spectra.hpp"
#include "support.hpp"

using namespace lspec;

namespace {

ComplexMatrix super(const LindbladModel& m) { return assemble_superoperator(m).matrix(); }

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a * b - b * a).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("two-level decay spectrum") {
  OscillatorParams p{0.0, 0.0, 1.0, 0.0, 2};
  const auto ev = eigenvalues_only(super(build_oscillator(p)));
  CHECK(test::setwise_error(ev, {0.0, -0.5, -0.5, -1.0}) < 1e-14);
}

TEST_CASE("reference parameters build at the largest figure size") {
  const OscillatorParams p = reference_oscillator(135);
  CHECK(p.gamma1 - p.gamma2 == doctest::Approx(5e-5).epsilon(1e-9));
  CHECK(p.eta == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))));
  const LindbladModel m = build_oscillator(p);
  CHECK(m.dim() == 135);
  CHECK(build_chain(reference_chain(135)).dim() == 135);
}

TEST_CASE("pure decay relaxes to the vacuum") {
  OscillatorParams p{1.0, 0.0, 0.7, 0.0, 6};
  const SpectrumRecord rec = decompose(super(build_oscillator(p)));
  Index k0 = 0;
  for (Index k = 1; k < static_cast<Index>(rec.size()); ++k) {
    if (std::abs(rec.eigenvalues[k]) < std::abs(rec.eigenvalues[k0])) k0 = k;
  }
  ComplexMatrix rho = unvectorize(rec.right.col(k0));
  rho /= rho.trace();
  ComplexMatrix vac = ComplexMatrix::Zero(6, 6);
  vac(0, 0) = 1.0;
  CHECK((rho - vac).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("periodic chain operators commute") {
  const LindbladModel m = build_chain({1.0, 2.0, 0.1, 4, Boundary::Periodic});
  const ComplexMatrix& h = m.hamiltonian();
  for (const auto& j : m.jumps()) {
    CHECK(commutator_norm(h, j.op) == 0.0);
    CHECK(commutator_norm(j.op, j.op.adjoint()) == 0.0);
  }
}

TEST_CASE("open chain small cases") {
  SUBCASE("coherent dimer") {
    const auto ev = eigenvalues_only(super(build_chain({1.0, 0.0, 0.0, 2, Boundary::Open})));
    CHECK(test::setwise_error(ev, {0.0, 0.0, 2.0 * kI, -2.0 * kI}) < 1e-13);
  }
  SUBCASE("incoherent trimer against brute force") {
    const LindbladModel m = build_chain({0.0, 1.0, 0.0, 3, Boundary::Open});
    CHECK((super(m) - test::brute_force_superoperator(m)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("reference trimer against brute force") {
    const LindbladModel m = build_chain(reference_chain(3));
    CHECK((super(m) - test::brute_force_superoperator(m)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(OscillatorParams{0.0, 0.0, -1.0, 0.0, 4}), DomainError);
  CHECK_THROWS_AS(validate(OscillatorParams{0.0, 0.0, 1.0, 0.0, 1}), DomainError);
  CHECK_THROWS_AS(validate(ChainParams{1.0, 2.0, -0.1, 5, Boundary::Open}), DomainError);
  CHECK_THROWS_AS(validate(ChainParams{1.0, 2.0, 0.1, 1, Boundary::Open}), DomainError);
  CHECK_THROWS_AS(validate(ChainParams{std::nan(""), 2.0, 0.1, 5, Boundary::Open}), DomainError);
}

TEST_CASE("oscillator closed-form spectrum") {
  OscillatorParams p{1.0, 0.0, 0.15, 0.05, 10};
  const auto mu = oscillator_analytic_spectrum(p, 2, 2);
  CHECK(mu[0] == cplx(0.0));
  // (n, m) = (1, 0) sits at n * (max_m + 1) + m
  CHECK(std::abs(mu[3] - cplx(-0.05, 1.0)) < 1e-15);
  CHECK_THROWS_AS(oscillator_analytic_spectrum(OscillatorParams{1.0, 0.0, 0.05, 0.05, 10}, 1, 1), DomainError);
}

TEST_CASE("truncated oscillator reproduces the low-lying closed form") {
  OscillatorParams p{1.0, 0.0, 1.0, 0.01, 20};
  const auto ev = eigenvalues_only(super(build_oscillator(p)));
  const auto mu = oscillator_analytic_spectrum(p, 3, 3);
  for (Index n = 0; n <= 3; ++n) {
    for (Index m = 0; n + m <= 3; ++m) {
      const cplx target = mu[static_cast<std::size_t>(n * 4 + m)];
      double best = 1e300;
      for (const cplx& z : ev) best = std::min(best, std::abs(z - target));
      CHECK_MESSAGE(best < 1e-6, "n=" << n << " m=" << m);
    }
  }
}

TEST_CASE("periodic chain closed-form spectrum") {
  SUBCASE("diagonal momenta are stationary") {
    const auto mu = chain_analytic_spectrum_pbc(reference_chain(7, Boundary::Periodic));
    for (Index j = 0; j < 7; ++j) CHECK(std::abs(mu[static_cast<std::size_t>(j * 7 + j)]) == 0.0);
  }
  SUBCASE("dimer by substitution") {
    const auto mu = chain_analytic_spectrum_pbc(reference_chain(2, Boundary::Periodic));
    CHECK(std::abs(mu[1] - cplx(-4.2, -4.0)) < 1e-14);  // (theta, theta~) = (0, pi)
    CHECK(std::abs(mu[2] - cplx(-4.2, 4.0)) < 1e-14);   // (pi, 0)
  }
  SUBCASE("matches numerics at L = 6") {
    const ChainParams p = reference_chain(6, Boundary::Periodic);
    const auto ev = eigenvalues_only(super(build_chain(p)));
    CHECK(test::setwise_error(ev, chain_analytic_spectrum_pbc(p)) < 1e-10);
  }
  CHECK_THROWS_AS(chain_analytic_spectrum_pbc(reference_chain(6)), DomainError);
}

TEST_CASE("Gaussian oscillator state") {
  SUBCASE("vacuum is stationary under pure loss") {
    OscillatorParams p{1.0, 0.0, 0.3, 0.0, 10};
    for (double t : {0.0, 1.0, 50.0}) {
      const auto s = oscillator_gaussian_evolve(p, {}, t);
      CHECK(std::abs(s.alpha) == 0.0);
      CHECK(s.nu == 0.0);
    }
  }
  SUBCASE("thermal occupation approaches gamma2 / (gamma1 - gamma2)") {
    const OscillatorParams p = reference_oscillator(41);
    const auto s = oscillator_gaussian_evolve(p, {}, 1e7);
    CHECK(s.nu == doctest::Approx(1000.0).epsilon(1e-9));
  }
  SUBCASE("state ODE against dense propagation") {
    OscillatorParams p{1.0, 0.3, 0.2, 0.05, 40};
    const auto sup = assemble_superoperator(build_oscillator(p));
    ComplexMatrix rho0 = ComplexMatrix::Zero(40, 40);
    rho0(0, 0) = 1.0;
    // Dense reference: one exponential of the full generator.
    const ComplexMatrix rho_t = unvectorize(expm_scaled(sup.matrix(), 2.0) * vectorize(rho0));
    const ComplexMatrix rho_g = gaussian_to_density_matrix(oscillator_gaussian_evolve(p, {}, 2.0), 40);
    CHECK(uhlmann_fidelity(0.5 * (rho_t + rho_t.adjoint()), rho_g) > 1.0 - 1e-8);
  }
}

TEST_CASE("Gaussian density matrices") {
  SUBCASE("vacuum") {
    const ComplexMatrix rho = gaussian_to_density_matrix({0.0, 0.0}, 6);
    CHECK(std::abs(rho(0, 0) - 1.0) < 1e-15);
    CHECK(rho.cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("thermal weights are geometric") {
    const ComplexMatrix rho = gaussian_to_density_matrix({0.0, 1.0}, 60);
    for (Index n = 0; n < 6; ++n) CHECK(rho(n, n).real() == doctest::Approx(std::pow(0.5, n + 1)).epsilon(1e-12));
  }
  SUBCASE("coherent state series") {
    const Index n = 30;
    ComplexVector psi(n);
    double fact = 1.0;
    for (Index k = 0; k < n; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      psi(k) = std::exp(-0.5) / std::sqrt(fact);
    }
    const ComplexMatrix pure = psi * psi.adjoint();
    const ComplexMatrix rho = gaussian_to_density_matrix({1.0, 0.0}, n);
    CHECK(uhlmann_fidelity(rho, pure / pure.trace().real()) > 1.0 - 1e-10);
  }
}
