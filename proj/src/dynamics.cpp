#include "lspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "lspec/errors.hpp"

namespace lspec {

namespace {

constexpr double kStateTolerance = 1e-10;
constexpr double kFidelityTraceTolerance = 1e-6;
constexpr double kFidelityHermiticityTolerance = 1e-8;

cplx trace_of_vec(const ComplexVector& v, Index d) {
  cplx s{};
  for (Index i = 0; i < d; ++i) s += v(i + d * i);
  return s;
}

void require_density_matrix(const ComplexMatrix& rho, const char* who) {
  if (rho.rows() != rho.cols()) throw DimensionError(std::string(who) + ": state must be square");
  if (!all_finite(rho)) throw DomainError(std::string(who) + ": state has non-finite entries");
  if (hermiticity_defect(rho) > kStateTolerance) {
    throw DomainError(std::string(who) + ": state is not Hermitian");
  }
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > kStateTolerance) {
    throw DomainError(std::string(who) + ": state does not have unit trace");
  }
  const HermitianEigen e = hermitian_eigen(rho);
  if (e.values(0) < -kStateTolerance) {
    throw DomainError(std::string(who) + ": state is not positive semidefinite (min eigenvalue " +
                      std::to_string(e.values(0)) + ")");
  }
}

// Eigenvalues of a Hermitian matrix with negatives clamped to zero.
HermitianEigen clamped_eigen(const ComplexMatrix& m, const char* which, double& clamp) {
  HermitianEigen e = hermitian_eigen(m);
  for (Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) < 0.0) {
      if (e.values(k) < -kStateTolerance) {
        throw DomainError(std::string("uhlmann_fidelity: ") + which +
                          " has eigenvalue " + std::to_string(e.values(k)) + " below -1e-10");
      }
      clamp = std::max(clamp, -e.values(k));
      e.values(k) = 0.0;
    }
  }
  return e;
}

}  // namespace

EvolutionResult propagate(const SuperoperatorMatrix& sup, const ComplexMatrix& rho0,
                          std::span<const double> times, const PropagateOptions& opts) {
  const Index d = sup.hilbert_dim();
  if (rho0.rows() != d || rho0.cols() != d) {
    throw DimensionError("propagate: initial state is " + std::to_string(rho0.rows()) + "x" +
                         std::to_string(rho0.cols()) + ", generator acts on " + std::to_string(d) +
                         "x" + std::to_string(d));
  }
  require_density_matrix(rho0, "propagate");
  if (!(opts.max_step_norm > 0.0) || !(opts.drift_tolerance > 0.0)) {
    throw DomainError("propagate: step norm and drift tolerance must be > 0");
  }
  if (times.empty()) throw DomainError("propagate: no times requested");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw DomainError("propagate: times must be finite and >= 0");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("propagate: times must be strictly increasing");
    }
  }

  const double lnorm = norm1(sup.matrix());
  const double gap_tol = 1e-12 * std::max(1.0, times.back());

  EvolutionResult res;
  ComplexVector v = vectorize(rho0);
  ComplexVector scratch(v.size());

  // One cached propagator; uniform time grids need exactly one exponential.
  struct Cached {
    double gap;
    Index substeps;
    ComplexMatrix step;
  };
  std::optional<Cached> cache;

  double prev = 0.0;
  for (double t : times) {
    const double gap = t - prev;
    if (gap > 0.0) {
      if (!cache || std::abs(cache->gap - gap) > gap_tol) {
        cache.reset();  // release before allocating the next one
        const auto q = std::max<Index>(1, static_cast<Index>(std::ceil(lnorm * gap / opts.max_step_norm)));
        const double dt = gap / static_cast<double>(q);
        cache = Cached{gap, q, expm_scaled(sup.matrix(), dt)};
        res.step_norm = std::max(res.step_norm, lnorm * dt);
      }
      for (Index s = 0; s < cache->substeps; ++s) {
        scratch.noalias() = cache->step * v;
        v.swap(scratch);
        ++res.steps;
        const double drift = std::abs(trace_of_vec(v, d) - cplx{1.0, 0.0});
        if (!(drift <= opts.drift_tolerance)) {
          throw AccuracyError("propagate: trace drift " + std::to_string(drift) + " at step " +
                                  std::to_string(res.steps) + " exceeds tolerance",
                              res.steps);
        }
      }
    }
    prev = t;
    ComplexMatrix rho = unvectorize(v);
    res.times.push_back(t);
    res.trace_drift.push_back(std::abs(rho.trace() - cplx{1.0, 0.0}));
    res.hermiticity_correction.push_back(0.5 * hermiticity_defect(rho));
    rho = (0.5 * (rho + rho.adjoint())).eval();
    res.states.push_back(std::move(rho));
  }
  return res;
}

double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma, FidelityDiagnostics* diag) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows()) {
    throw DimensionError("uhlmann_fidelity: states must be square and of equal size");
  }
  for (const ComplexMatrix* m : {&rho, &sigma}) {
    if (!all_finite(*m)) throw DomainError("uhlmann_fidelity: non-finite entries");
    if (hermiticity_defect(*m) > kFidelityHermiticityTolerance) {
      throw DomainError("uhlmann_fidelity: state is not Hermitian");
    }
    if (std::abs(m->trace() - cplx{1.0, 0.0}) > kFidelityTraceTolerance) {
      throw DomainError("uhlmann_fidelity: state does not have unit trace");
    }
  }
  double clamp = 0.0;
  const ComplexMatrix rho_h = 0.5 * (rho + rho.adjoint());
  const ComplexMatrix sigma_h = 0.5 * (sigma + sigma.adjoint());
  const HermitianEigen er = clamped_eigen(rho_h, "rho", clamp);
  const HermitianEigen es = clamped_eigen(sigma_h, "sigma", clamp);

  // sqrt(F) is the trace norm of sqrt(rho) sqrt(sigma). Taking singular values
  // of the product avoids the square roots of round-off-level eigenvalues that
  // the sqrt(sigma) rho sqrt(sigma) route has to take.
  const ComplexMatrix sqrt_rho = er.vectors * er.values.cwiseSqrt().asDiagonal() * er.vectors.adjoint();
  const ComplexMatrix sqrt_sigma = es.vectors * es.values.cwiseSqrt().asDiagonal() * es.vectors.adjoint();
  const double tr = singular_values(sqrt_rho * sqrt_sigma).sum();
  double f = tr * tr;
  double clip = 0.0;
  if (f > 1.0) {
    clip = f - 1.0;
    f = 1.0;
  } else if (f < 0.0) {
    clip = -f;
    f = 0.0;
  }
  if (diag != nullptr) {
    diag->negative_clamp = clamp;
    diag->clip = clip;
  }
  return f;
}

FidelitySeries fidelity_experiment_oscillator(const OscillatorParams& p, std::span<const double> times,
                                              const PropagateOptions& opts) {
  validate(p);
  if (!(p.gamma1 > p.gamma2)) {
    throw DomainError("fidelity_experiment_oscillator: requires gamma1 > gamma2");
  }
  const SuperoperatorMatrix sup = assemble_superoperator(build_oscillator(p));
  ComplexMatrix vacuum = ComplexMatrix::Zero(p.n_tr, p.n_tr);
  vacuum(0, 0) = 1.0;
  const EvolutionResult ev = propagate(sup, vacuum, times, opts);

  FidelitySeries out;
  out.size = p.n_tr;
  out.times.assign(times.begin(), times.end());
  std::vector<GaussianOscState> exact;
  double max_n = 0.0;
  for (double t : times) {
    exact.push_back(oscillator_gaussian_evolve(p, GaussianOscState{}, t));
    const double n = std::norm(exact.back().alpha) + exact.back().nu;
    out.mean_n.push_back(n);
    max_n = std::max(max_n, n);
  }
  // The exact state lives in the untruncated space: represent it on enough
  // levels that its own truncation is negligible and pad rho with zeros.
  const Index n_ref = std::max<Index>(p.n_tr, static_cast<Index>(std::ceil(4.0 * max_n)) + 40);
  out.reference_dim = n_ref;
  for (std::size_t i = 0; i < times.size(); ++i) {
    ComplexMatrix rho = ComplexMatrix::Zero(n_ref, n_ref);
    rho.topLeftCorner(p.n_tr, p.n_tr) = ev.states[i];
    const ComplexMatrix sigma = gaussian_to_density_matrix(exact[i], n_ref);
    FidelityDiagnostics diag;
    out.fidelity.push_back(uhlmann_fidelity(rho, sigma, &diag));
    out.max_negative_clamp = std::max(out.max_negative_clamp, diag.negative_clamp);
    out.max_trace_drift = std::max(out.max_trace_drift, ev.trace_drift[i]);
  }
  return out;
}

FidelitySeries fidelity_experiment_chain(const ChainParams& p, std::span<const double> times,
                                         const PropagateOptions& opts) {
  validate(p);
  if (p.length % 2 == 0) throw DomainError("fidelity_experiment_chain: length must be odd");
  ChainParams obc = p;
  obc.boundary = Boundary::Open;
  ChainParams pbc = p;
  pbc.boundary = Boundary::Periodic;
  const Index l = p.length;
  const Index c = (l - 1) / 2;
  ComplexMatrix rho0 = ComplexMatrix::Zero(l, l);
  rho0(c, c) = 1.0;

  const SuperoperatorMatrix sup = assemble_superoperator(build_chain(obc));
  const EvolutionResult ev = propagate(sup, rho0, times, opts);

  FidelitySeries out;
  out.size = l;
  out.reference_dim = l;
  out.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < times.size(); ++i) {
    ComplexMatrix sigma = chain_pbc_fourier_evolve(pbc, rho0, times[i]);
    sigma = (0.5 * (sigma + sigma.adjoint())).eval();
    FidelityDiagnostics diag;
    out.fidelity.push_back(uhlmann_fidelity(ev.states[i], sigma, &diag));
    out.max_negative_clamp = std::max(out.max_negative_clamp, diag.negative_clamp);
    out.max_trace_drift = std::max(out.max_trace_drift, ev.trace_drift[i]);
  }
  return out;
}

double first_crossing_time(const FidelitySeries& s, double threshold) {
  for (std::size_t i = 0; i < s.fidelity.size(); ++i) {
    if (s.fidelity[i] < threshold) return s.times[i];
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace lspec
