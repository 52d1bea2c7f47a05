#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lspec/models.hpp"
#include "lspec/operator_core.hpp"

namespace lspec {

struct PropagateOptions {
  double max_step_norm = 0.95;    // |L dt|_1 bound per step (<= 1)
  double drift_tolerance = 1e-6;  // |Tr rho - 1| allowed at any step
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;         // re-Hermitized
  std::vector<double> trace_drift;           // |Tr rho(t) - 1| before Hermitizing
  std::vector<double> hermiticity_correction;  // max |rho - (rho + rho^dag)/2|
  std::map<std::string, std::vector<double>> observables;
  std::size_t steps = 0;  // propagator applications
  double step_norm = 0.0; // largest |L dt|_1 used
};

/// rho(t_i) = unvec(exp(L t_i) vec(rho0)) by repeated application of
/// exp(L dt), each dt dividing the gap between consecutive requested times so
/// that |L dt|_1 <= max_step_norm. Times must be >= 0 and strictly increasing.
/// Throws AccuracyError (with the step index) when the trace drifts beyond tolerance.
EvolutionResult propagate(const SuperoperatorMatrix& sup, const ComplexMatrix& rho0,
                          std::span<const double> times, const PropagateOptions& opts = {});

struct FidelityDiagnostics {
  double negative_clamp = 0.0;  // largest |negative eigenvalue| set to zero
  double clip = 0.0;            // amount removed by clipping F into [0, 1]
};

/// Uhlmann fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2. Negative
/// eigenvalues down to -1e-10 are clamped; below that DomainError.
double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                        FidelityDiagnostics* diag = nullptr);

struct FidelitySeries {
  Index size = 0;  // n_tr or L
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> mean_n;  // oscillator only: <n>(t) of the analytic state
  double max_trace_drift = 0.0;
  double max_negative_clamp = 0.0;
  Index reference_dim = 0;     // Fock dimension of the analytic reference
};

/// Truncated numerics vs the closed-form Gaussian state, both from vacuum.
FidelitySeries fidelity_experiment_oscillator(const OscillatorParams& p, std::span<const double> times,
                                              const PropagateOptions& opts = {});

/// OBC numerics vs exact PBC evolution from the centre site; L must be odd.
FidelitySeries fidelity_experiment_chain(const ChainParams& p, std::span<const double> times,
                                         const PropagateOptions& opts = {});

/// First sampled time with F < threshold, or +inf.
double first_crossing_time(const FidelitySeries& s, double threshold);

}  // namespace lspec
