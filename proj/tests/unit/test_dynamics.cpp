#include <doctest.h>

#include <cmath>

#include "lspec/dynamics.hpp"
#include "lspec/errors.hpp"
#include "lspec/experiments.hpp"
#include "lspec/models.hpp"
#include "lspec/operator_core.hpp"
#include "lspec/spectra.hpp"
#include "support.hpp"

using namespace lspec;

namespace {

ComplexMatrix basis_state(Index d, Index k) {
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  rho(k, k) = 1.0;
  return rho;
}

SuperoperatorMatrix decay() {
  ComplexMatrix l = ComplexMatrix::Zero(2, 2);
  l(0, 1) = 1.0;
  return assemble_superoperator(LindbladModel(ComplexMatrix::Zero(2, 2), {{l, 1.0}}));
}

}  // namespace

TEST_CASE("matrix exponential") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = -1.0;
  const ComplexMatrix e = expm(a * 0.7);
  CHECK(std::abs(e(0, 0) - std::cos(0.7)) < 1e-15);
  CHECK(std::abs(e(0, 1) - std::sin(0.7)) < 1e-15);

  std::mt19937_64 rng(4);
  const ComplexMatrix m = test::random_matrix(8, rng);
  // exp(A) exp(A) = exp(2A) across the Pade degrees
  for (double s : {0.01, 0.2, 1.0, 3.0, 20.0}) {
    const ComplexMatrix x = expm_scaled(m, s);
    const ComplexMatrix y = expm_scaled(m, 2.0 * s);
    CHECK_MESSAGE(((x * x - y).norm() / y.norm()) < 1e-11, "scale " << s);
  }
  CHECK((expm(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("propagation") {
  SUBCASE("frozen generator") {
    const SuperoperatorMatrix zero(2, ComplexMatrix::Zero(4, 4));
    std::mt19937_64 rng(1);
    const ComplexMatrix rho0 = test::random_density(2, rng);
    const std::vector<double> t = {0.0, 1.0, 5.0};
    const auto r = propagate(zero, rho0, t);
    for (const auto& s : r.states) CHECK((s - rho0).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("two-level decay") {
    const std::vector<double> t = {1.0};
    const auto r = propagate(decay(), basis_state(2, 1), t);
    CHECK(std::abs(r.states[0](1, 1).real() - std::exp(-1.0)) < 1e-10);
    CHECK(r.trace_drift[0] < 1e-12);
  }
  SUBCASE("relaxation onto the zero mode") {
    const SpectrumRecord rec = decompose(decay().matrix());
    const Index k0 = nearest_to_zero(rec.eigenvalues);
    ComplexMatrix ss = unvectorize(rec.right.col(k0));
    ss /= ss.trace();
    const std::vector<double> t = {60.0};
    const auto r = propagate(decay(), basis_state(2, 1), t);
    CHECK((r.states[0] - ss).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("semigroup") {
    const auto sup = assemble_superoperator(build_chain(reference_chain(7)));
    const ComplexMatrix rho0 = basis_state(7, 3);
    const std::vector<double> both = {0.4, 1.1};
    const std::vector<double> first = {0.4}, second = {0.7};
    const auto direct = propagate(sup, rho0, both);
    const auto mid = propagate(sup, rho0, first);
    const auto rest = propagate(sup, mid.states[0], second);
    CHECK((direct.states[1] - rest.states[0]).cwiseAbs().maxCoeff() < 1e-8);
    for (double d : direct.trace_drift) CHECK(d < 1e-8);
    for (double h : direct.hermiticity_correction) CHECK(h < 1e-8);
    CHECK(direct.step_norm <= 0.95);
  }
  SUBCASE("periodic chain against Fourier evolution") {
    const ChainParams p = reference_chain(8, Boundary::Periodic);
    const ComplexMatrix rho0 = basis_state(8, 4);
    const std::vector<double> t = {0.5, 1.5};
    const auto r = propagate(assemble_superoperator(build_chain(p)), rho0, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const ComplexMatrix exact = chain_pbc_fourier_evolve(p, rho0, t[i]);
      CHECK((r.states[i].diagonal() - exact.diagonal()).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((r.states[i] - exact).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  SUBCASE("input validation") {
    const std::vector<double> bad = {1.0, 0.5};
    CHECK_THROWS_AS(propagate(decay(), basis_state(2, 1), bad), DomainError);
    const std::vector<double> t = {1.0};
    ComplexMatrix not_psd = basis_state(2, 1);
    not_psd(0, 0) = -0.5;
    not_psd(1, 1) = 1.5;
    CHECK_THROWS_AS(propagate(decay(), not_psd, t), DomainError);
    CHECK_THROWS_AS(propagate(decay(), basis_state(3, 1), t), DimensionError);
  }
  SUBCASE("trace drift is fatal") {
    // Non-trace-preserving generator: pure loss of the population.
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(3, 3) = -1.0;
    const std::vector<double> t = {1.0};
    CHECK_THROWS_AS(propagate(SuperoperatorMatrix(2, m), basis_state(2, 1), t), AccuracyError);
  }
}

TEST_CASE("Uhlmann fidelity") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix rho = test::random_density(4, rng);
    const ComplexMatrix sigma = test::random_density(4, rng);
    CHECK(std::abs(uhlmann_fidelity(rho, rho) - 1.0) < 1e-12);
    CHECK(std::abs(uhlmann_fidelity(rho, sigma) - uhlmann_fidelity(sigma, rho)) < 1e-10);
    CHECK(uhlmann_fidelity(rho, sigma) < 1.0 - 1e-8);
  }
  CHECK(uhlmann_fidelity(basis_state(3, 0), basis_state(3, 2)) < 1e-12);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexVector psi = test::random_state(3, rng);
    const ComplexVector phi = test::random_state(3, rng);
    const double expect = std::norm(psi.dot(phi));
    CHECK(std::abs(uhlmann_fidelity(psi * psi.adjoint(), phi * phi.adjoint()) - expect) < 1e-10);
  }
  ComplexMatrix neg = basis_state(2, 0) * 1.1;
  neg(1, 1) = -0.1;
  CHECK_THROWS_AS(uhlmann_fidelity(neg, basis_state(2, 0)), DomainError);
}

TEST_CASE("fidelity experiments at small sizes") {
  const std::vector<double> t = uniform_times(4.0, 9);
  SUBCASE("oscillator") {
    const FidelitySeries small = fidelity_experiment_oscillator(reference_oscillator(6), t);
    const FidelitySeries big = fidelity_experiment_oscillator(reference_oscillator(12), t);
    CHECK(small.fidelity[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(big.fidelity[i] >= small.fidelity[i] - 1e-12);
    CHECK(big.mean_n.back() == doctest::Approx(2.2).epsilon(1e-3));  // eta^2 t^2 + gamma2 t at t = 4
  }
  SUBCASE("chain") {
    const FidelitySeries small = fidelity_experiment_chain(reference_chain(7), t);
    const FidelitySeries big = fidelity_experiment_chain(reference_chain(15), t);
    CHECK(small.fidelity[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(first_crossing_time(big, 0.999) > first_crossing_time(small, 0.999));
    CHECK_THROWS_AS(fidelity_experiment_chain(reference_chain(8), t), DomainError);
  }
}
