#include "lspec/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lspec/errors.hpp"

namespace lspec {

namespace {

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

lapack_int as_lapack(Index n) {
  if (n > static_cast<Index>(std::numeric_limits<lapack_int>::max())) {
    throw DimensionError("matrix dimension exceeds LAPACK integer range");
  }
  return static_cast<lapack_int>(n);
}

void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(who) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  const cplx* p = m.data();
  for (Index k = 0; k < m.size(); ++k) {
    if (!std::isfinite(p[k].real()) || !std::isfinite(p[k].imag())) return false;
  }
  return true;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

double norm1(const ComplexMatrix& a) {
  double best = 0.0;
  for (Index j = 0; j < a.cols(); ++j) best = std::max(best, a.col(j).cwiseAbs().sum());
  return best;
}

namespace {

// (den, num) -> den^{-1} num, both overwritten.
void solve_in_place(ComplexMatrix& den, ComplexMatrix& num) {
  const lapack_int n = as_lapack(den.rows());
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, as_lapack(num.cols()), lp(den.data()),
                                        n, ipiv.data(), lp(num.data()), n);
  if (info != 0) throw DecompositionError("expm: singular Pade denominator", info);
}

void add_identity(ComplexMatrix& m, double c) { m.diagonal().array() += c; }

}  // namespace

ComplexMatrix expm(const ComplexMatrix& a) { return expm_scaled(a, 1.0); }

ComplexMatrix expm_scaled(const ComplexMatrix& a, double scale) {
  require_square(a, "expm");
  const Index n = a.rows();
  if (!all_finite(a) || !std::isfinite(scale)) throw DomainError("expm: non-finite entries");

  static constexpr std::array<double, 4> b3 = {120., 60., 12., 1.};
  static constexpr std::array<double, 6> b5 = {30240., 15120., 3360., 420., 30., 1.};
  static constexpr std::array<double, 8> b7 = {17297280., 8648640., 1995840., 277200.,
                                               25200.,    1512.,    56.,      1.};
  static constexpr std::array<double, 10> b9 = {17643225600., 8821612800., 2075673600.,
                                                302702400.,   30270240.,   2162160.,
                                                110880.,      3960.,       90.,
                                                1.};
  static constexpr std::array<double, 14> b13 = {
      64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
      129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
      1323241920.,        40840800.,          960960.,           16380.,
      182.,               1.};
  static constexpr std::array<double, 4> theta = {1.495585217958292e-2, 2.539398330063230e-1,
                                                  9.504178996162932e-1, 2.097847961257068e0};
  constexpr double theta13 = 5.371920351148152e0;

  if (n == 0) return {};
  const double anorm = std::abs(scale) * norm1(a);

  // Powers of s*a are formed as s^k * (a^k) so the caller's matrix is never
  // copied; peak storage is five extra n x n buffers for degrees <= 9.
  auto pade_low = [&](const auto& b) -> ComplexMatrix {
    const std::size_t m = b.size() - 1;
    const double s2 = scale * scale;
    ComplexMatrix a2(n, n);
    a2.noalias() = s2 * (a * a);
    ComplexMatrix v = b[2] * a2;
    add_identity(v, b[0]);
    ComplexMatrix w = b[3] * a2;
    add_identity(w, b[1]);
    ComplexMatrix power = a2;
    ComplexMatrix tmp(n, n);
    for (std::size_t k = 4; k <= m; k += 2) {
      tmp.noalias() = power * a2;
      power.swap(tmp);
      v += b[k] * power;
      if (k + 1 <= m) w += b[k + 1] * power;
    }
    a2.resize(0, 0);
    power.resize(0, 0);
    tmp.noalias() = scale * (a * w);  // U
    w = v + tmp;
    v -= tmp;
    tmp.resize(0, 0);
    solve_in_place(v, w);
    return w;
  };

  if (anorm <= theta[0]) return pade_low(b3);
  if (anorm <= theta[1]) return pade_low(b5);
  if (anorm <= theta[2]) return pade_low(b7);
  if (anorm <= theta[3]) return pade_low(b9);

  int squarings = 0;
  if (anorm > theta13) squarings = static_cast<int>(std::ceil(std::log2(anorm / theta13)));
  const double s = std::ldexp(scale, -squarings);
  ComplexMatrix a2(n, n);
  a2.noalias() = (s * s) * (a * a);
  ComplexMatrix a4(n, n);
  a4.noalias() = a2 * a2;
  ComplexMatrix a6(n, n);
  a6.noalias() = a4 * a2;
  ComplexMatrix tmp = b13[13] * a6 + b13[11] * a4 + b13[9] * a2;
  ComplexMatrix w(n, n);
  w.noalias() = a6 * tmp;
  w += b13[7] * a6 + b13[5] * a4 + b13[3] * a2;
  add_identity(w, b13[1]);
  tmp = b13[12] * a6 + b13[10] * a4 + b13[8] * a2;
  ComplexMatrix v(n, n);
  v.noalias() = a6 * tmp;
  v += b13[6] * a6 + b13[4] * a4 + b13[2] * a2;
  add_identity(v, b13[0]);
  a2.resize(0, 0);
  a4.resize(0, 0);
  a6.resize(0, 0);
  tmp.noalias() = s * (a * w);  // U
  w = v + tmp;
  v -= tmp;
  solve_in_place(v, w);
  for (int k = 0; k < squarings; ++k) {
    tmp.noalias() = w * w;
    w.swap(tmp);
  }
  return w;
}

RealVector singular_values(ComplexMatrix a) {
  const lapack_int m = as_lapack(a.rows());
  const lapack_int n = as_lapack(a.cols());
  RealVector s(std::min(m, n));
  if (s.size() == 0) return s;
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(a.data()), m, s.data(),
                                         nullptr, 1, nullptr, 1);
  if (info != 0) throw DecompositionError("zgesdd failed to converge", info);
  return s;
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

HermitianEigen hermitian_eigen(ComplexMatrix a) {
  require_square(a, "hermitian_eigen");
  const lapack_int n = as_lapack(a.rows());
  HermitianEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, lp(a.data()), n, out.values.data());
  if (info != 0) throw DecompositionError("zheevd failed to converge", info);
  out.vectors = std::move(a);
  return out;
}

GeneralEigen general_eigen(ComplexMatrix a, bool want_vectors) {
  require_square(a, "general_eigen");
  if (!all_finite(a)) throw DomainError("general_eigen: non-finite entries");
  const lapack_int n = as_lapack(a.rows());
  GeneralEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const char job = want_vectors ? 'V' : 'N';
  if (want_vectors) {
    out.left.resize(n, n);
    out.right.resize(n, n);
  }
  cplx dummy{};
  cplx* vl = want_vectors ? out.left.data() : &dummy;
  cplx* vr = want_vectors ? out.right.data() : &dummy;
  const lapack_int ld = want_vectors ? n : 1;
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, job, job, n, lp(a.data()), n,
                                        lp(out.values.data()), lp(vl), ld, lp(vr), ld);
  if (info < 0) throw DecompositionError("zgeev: illegal argument", info);
  if (info > 0) {
    throw DecompositionError(
        "zgeev: QR algorithm failed; eigenvalues from index " + std::to_string(info) + " unconverged",
        info);
  }
  return out;
}

}  // namespace lspec
