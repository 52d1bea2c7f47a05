#include <doctest.h>

#include "lspec/errors.hpp"
#include "lspec/operator_core.hpp"
#include "lspec/spectra.hpp"
#include "support.hpp"

using namespace lspec;

TEST_CASE("vectorize stacks columns") {
  ComplexMatrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const ComplexVector v = vectorize(m);
  CHECK(v(0) == cplx(1.0));
  CHECK(v(1) == cplx(3.0));
  CHECK(v(2) == cplx(2.0));
  CHECK(v(3) == cplx(4.0));
  CHECK(unvectorize(v) == m);

  const ComplexVector id = vectorize(ComplexMatrix::Identity(2, 2));
  CHECK(id(0) == cplx(1.0));
  CHECK(id(1) == cplx(0.0));
  CHECK(id(2) == cplx(0.0));
  CHECK(id(3) == cplx(1.0));
}

TEST_CASE("vec(A rho B) = (B^T kron A) vec(rho)") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = test::random_matrix(3, rng);
  const ComplexMatrix rho = test::random_matrix(3, rng);
  const ComplexMatrix b = test::random_matrix(3, rng);
  const ComplexVector lhs = vectorize(a * rho * b);
  const ComplexVector rhs = kron(b.transpose(), a) * vectorize(rho);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("unvectorize rejects non-square lengths") {
  CHECK_THROWS_AS(unvectorize(ComplexVector::Zero(5)), DimensionError);
}

TEST_CASE("trivial generators") {
  SUBCASE("H = 0, no jumps") {
    const auto s = assemble_superoperator(LindbladModel(ComplexMatrix::Zero(3, 3), {}));
    CHECK(s.liouville_dim() == 9);
    CHECK(s.matrix().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two-level Bohr frequencies") {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;
    auto ev = eigenvalues_only(assemble_superoperator(LindbladModel(h, {})).matrix());
    CHECK(test::setwise_error(ev, {0.0, 0.0, kI, -kI}) < 1e-14);
  }
}

TEST_CASE("superoperator matches the action on basis matrices") {
  SUBCASE("two-level decay") {
    ComplexMatrix l = ComplexMatrix::Zero(2, 2);
    l(0, 1) = 1.0;
    const LindbladModel m(ComplexMatrix::Zero(2, 2), {{l, 1.0}});
    const ComplexMatrix diff = assemble_superoperator(m).matrix() - test::brute_force_superoperator(m);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("random Hamiltonian and two jumps") {
    std::mt19937_64 rng(11);
    const ComplexMatrix a = test::random_matrix(4, rng);
    const ComplexMatrix h = a + a.adjoint();
    const LindbladModel m(h, {{test::random_matrix(4, rng), 0.3}, {test::random_matrix(4, rng), 1.7}});
    const auto s = assemble_superoperator(m);
    const ComplexMatrix diff = s.matrix() - test::brute_force_superoperator(m);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(s.trace_preservation_defect() < 1e-12);
  }
}

TEST_CASE("model validation") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(LindbladModel(h, {}), DomainError);
  CHECK_THROWS_AS(LindbladModel(ComplexMatrix::Zero(2, 2), {{ComplexMatrix::Zero(2, 2), -1.0}}), DomainError);
  CHECK_THROWS_AS(LindbladModel(ComplexMatrix::Zero(2, 2), {{ComplexMatrix::Zero(3, 3), 1.0}}), DimensionError);
  CHECK_THROWS_AS(LindbladModel(ComplexMatrix::Zero(2, 3), {}), DimensionError);
}

TEST_CASE("annihilation operator") {
  ComplexMatrix two(2, 2);
  two << 0.0, 1.0, 0.0, 0.0;
  CHECK(annihilation_operator(2) == two);

  const ComplexMatrix a3 = annihilation_operator(3);
  const ComplexMatrix n3 = a3.adjoint() * a3;
  for (Index i = 0; i < 3; ++i) CHECK(std::abs(n3(i, i) - double(i)) < 1e-15);

  const ComplexMatrix a = annihilation_operator(5);
  ComplexMatrix expect = ComplexMatrix::Identity(5, 5);
  expect(4, 4) -= 5.0;
  const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
  CHECK((comm - expect).cwiseAbs().maxCoeff() < 1e-14);
}
