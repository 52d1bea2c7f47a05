#pragma once

// Composite diagnostics shared by the CLI figure pipelines and the
// acceptance suite.

#include <span>
#include <vector>

#include "lspec/levelstats.hpp"
#include "lspec/models.hpp"
#include "lspec/spectra.hpp"

namespace lspec {

struct ConditionSummary {
  Index size = 0;
  cplx steady_eigenvalue{};       // eigenvalue of smallest modulus
  double kappa_steady = 0.0;
  double kappa_bulk_median = 0.0; // median kappa over the density-selected bulk
  double kappa_max = 0.0;
  Index n_saturated = 0;
  NonNormality kappa_v;
  double max_relative_residual = 0.0;

  /// Per-eigenvalue saturation or a numerically singular eigenvector matrix.
  bool saturation_flag() const { return n_saturated > 0 || kappa_v.singular; }
};

ConditionSummary condition_summary(const SpectrumRecord& rec, Index size, double keep_fraction = 0.4);

/// Index of the eigenvalue with the smallest modulus.
Index nearest_to_zero(std::span<const cplx> eigenvalues);

/// Distance from z to the nearest member of a point set.
double distance_to_set(cplx z, std::span<const cplx> set);

/// Midpoints of nearest-neighbour pairs of bulk eigenvalues lying farther
/// than min_distance from every reference point; `count` of them, evenly
/// spread over the candidates in index order.
std::vector<cplx> pseudospectrum_probes(std::span<const cplx> eigenvalues,
                                        std::span<const cplx> reference, double min_distance,
                                        Index count);

struct SkinSummary {
  Index length = 0;
  double median_displacement = 0.0;  // median |com - (L-1)/2|
  Index numerical_rank = 0;
  double rank_fraction = 0.0;        // rank / L^2
  double median_ipr = 0.0;
};

SkinSummary chain_skin_summary(const ChainParams& p);

/// Random normal matrix U diag(d) U^dag with complex Gaussian d and Haar-like U.
ComplexMatrix random_normal_matrix(Index n, std::uint64_t seed, std::vector<cplx>* spectrum = nullptr);

/// Sampling windows of the fidelity figure: t in [0, t_end] at n points.
struct FidelityWindow {
  double t_end;
  Index n_times;
};
inline constexpr FidelityWindow kOscillatorFidelityWindow{32.0, 33};
inline constexpr FidelityWindow kChainFidelityWindow{11.0, 45};
inline constexpr Index kFidelitySizes[] = {21, 41, 61, 81};

/// Uniform grid 0, t_end/(n-1), ..., t_end.
std::vector<double> uniform_times(double t_end, Index n);

}  // namespace lspec
