#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lspec/kernels.hpp"
#include "lspec/linalg.hpp"

namespace lspec {

using UnfoldKernel = kernels::DensityKernel;

/// min(10^4, floor(N/4)), at least 1.
Index default_neighbor_count(Index n);

/// Indices of the ceil(keep_fraction * N) eigenvalues with the largest local
/// density 1/|mu_n - mu_n^(kNN)|, ties to the lower index; returned ascending.
std::vector<Index> select_bulk(std::span<const cplx> eigenvalues, Index k, double keep_fraction);

/// Nearest-neighbour distance of each selected eigenvalue within the full set.
std::vector<double> nn_spacings(std::span<const cplx> eigenvalues, std::span<const Index> indices);

/// sqrt(D_avg(mu_i)) s_i with a smoothed density of width sigma_factor * mean(s),
/// rescaled to unit mean.
std::vector<double> unfold(std::span<const cplx> eigenvalues, std::span<const Index> indices,
                           std::span<const double> spacings, double sigma_factor = 4.5,
                           UnfoldKernel kernel = UnfoldKernel::Printed);

struct CsrResult {
  std::vector<cplx> samples;
  std::vector<Index> indices;  // eigenvalue index of each kept sample
  Index discarded = 0;         // zero denominators
};

/// Complex spacing ratios z = (mu^NN - mu) / (mu^NNN - mu), neighbours over the full set.
CsrResult csr(std::span<const cplx> eigenvalues, std::span<const Index> indices);

double pdf_poisson2d(double s);
double cdf_poisson2d(double s);

inline constexpr int kGinueKMax = 200;

/// Ginibre (GinUE) nearest-neighbour spacing density, truncated at k_max.
double pdf_ginue(double s, int k_max = kGinueKMax);

/// Mean of pdf_ginue (about 1.1429), from a tabulated quadrature.
double ginue_mean_spacing();

/// m P(m s) with m = ginue_mean_spacing(): the same law rescaled to unit mean,
/// which is what unfolded spacings should follow.
double pdf_ginue_unit_mean(double s);
double cdf_ginue_unit_mean(double s);

/// n x n matrix of iid complex Gaussians with variance 1/n per entry.
ComplexMatrix ginue_matrix(Index n, std::uint64_t seed);

/// Eigenvalues of an n x n matrix of iid complex Gaussians (unit variance per
/// entry), scaled by 1/sqrt(n). Sorted like eigenvalues_only.
std::vector<cplx> sample_ginue(Index n, std::uint64_t seed);

/// n points uniform in the unit disk.
std::vector<cplx> sample_uniform_disk(Index n, std::uint64_t seed);

struct Histogram {
  std::vector<double> edges;
  std::vector<double> density;  // integrates to 1
};

/// Freedman-Diaconis binning when bins == 0.
Histogram histogram(std::span<const double> samples, Index bins = 0);

/// Kolmogorov-Smirnov distance sup |F_n - F|.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

struct Collapsed {
  std::vector<cplx> values;
  std::vector<Index> kept;  // original indices, ascending
  Index removed = 0;
};

/// Merges eigenvalues closer than rel_tol times the spectral diameter.
Collapsed collapse_degeneracies(std::span<const cplx> eigenvalues, double rel_tol = 1e-12);

struct LevelStatsOptions {
  Index k = 0;  // 0: default_neighbor_count
  double keep_fraction = 0.4;
  double sigma_factor = 4.5;
  UnfoldKernel kernel = UnfoldKernel::Printed;
  double degeneracy_tol = 1e-12;
  Index histogram_bins = 0;
};

struct LevelStatsReport {
  std::vector<cplx> eigenvalues;  // after degeneracy collapse
  Index degeneracies_removed = 0;
  Index k = 0;
  std::vector<Index> bulk_indices;
  std::vector<double> spacings_raw;
  std::vector<double> spacings_unfolded;
  std::vector<cplx> csr_samples;
  std::vector<Index> csr_indices;
  Index csr_discarded = 0;
  double mean_r = 0.0;
  double mean_minus_cos = 0.0;
  Histogram histogram;
  double ks_ginue = 0.0;    // against the unit-mean GinUE law
  double ks_poisson = 0.0;  // against the 2D Poisson law
};

void validate(const LevelStatsOptions& opts);

/// collapse -> select_bulk -> nn_spacings -> unfold -> histogram, plus CSR on the bulk.
LevelStatsReport analyze_level_statistics(std::span<const cplx> eigenvalues,
                                          const LevelStatsOptions& opts = {});

}  // namespace lspec
