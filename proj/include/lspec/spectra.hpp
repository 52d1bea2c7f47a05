#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lspec/linalg.hpp"

namespace lspec {

/// Per-eigenvalue condition numbers at or above this value are flagged as
/// saturated: the overlap |<left|right>| is then within a factor 100 of the
/// double-precision floor and carries no significant digits.
inline constexpr double kKappaSaturation = 1e-2 / std::numeric_limits<double>::epsilon();

struct SpectrumRecord {
  std::vector<cplx> eigenvalues;     // sorted by (Re, Im)
  ComplexMatrix right;               // unit-norm columns
  ComplexMatrix left;                // unit-norm columns, M^dag z = conj(mu) z
  std::vector<cplx> overlaps;        // <left_n|right_n>
  std::vector<double> condition_numbers;
  std::vector<bool> saturated;
  std::vector<double> right_residuals;  // |M x - mu x|_2
  std::vector<double> left_residuals;   // |M^dag z - conj(mu) z|_2
  double matrix_norm = 0.0;             // spectral norm of M

  std::size_t size() const { return eigenvalues.size(); }
  bool any_saturated() const;
};

/// Full decomposition with left/right eigenvectors and residuals.
SpectrumRecord decompose(const ComplexMatrix& m);

/// Eigenvalues only, sorted like decompose. Consumes its argument.
std::vector<cplx> eigenvalues_only(ComplexMatrix m);

/// Sort order used throughout: ascending Re; values whose real parts agree to
/// 1e-12 (relative to the largest modulus) form a group ordered by Im.
std::vector<Index> spectral_order(std::span<const cplx> values);

struct NonNormality {
  double kappa = 1.0;       // sigma_max / sigma_min of R; +inf when singular
  bool singular = false;    // sigma_min <= eps * sigma_max
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

/// kappa(V) from the extreme singular values of the unit-column right
/// eigenvector matrix.
NonNormality eigenvector_condition_number(const SpectrumRecord& rec);

struct Window {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

struct PseudospectrumGrid {
  std::vector<double> re_axis;
  std::vector<double> im_axis;
  RealMatrix sigma_min;  // (re index, im index)
  std::vector<double> epsilon_levels;

  /// Grid mask of the epsilon-pseudospectrum, sigma_min < eps.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> inside(double eps) const;
};

PseudospectrumGrid pseudospectrum(const ComplexMatrix& m, const Window& window, Index n_re,
                                  Index n_im, std::vector<double> epsilons = {});

/// sigma_min(zI - m) at arbitrary points.
std::vector<double> sigma_min_at_points(const ComplexMatrix& m, std::span<const cplx> points);

struct PerturbationSample {
  std::uint64_t seed = 0;
  std::vector<double> shifts;   // |delta mu_n| indexed like the unperturbed spectrum
  double hausdorff = 0.0;       // matching-free set distance
};

struct PerturbationReport {
  double epsilon = 0.0;
  std::vector<cplx> eigenvalues;   // unperturbed, sorted
  std::vector<double> bounds;      // kappa_n * epsilon
  std::vector<bool> saturated;
  std::vector<PerturbationSample> samples;
};

/// Complex Gaussian matrix with spectral norm 1, reproducible from seed.
ComplexMatrix random_unit_perturbation(Index n, std::uint64_t seed);

/// Per-sample seeds derived from the master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Greedy nearest-pair matching: returns for each a[i] the index into b,
/// pairs taken in ascending distance order with index tie-breaking.
std::vector<Index> greedy_match(std::span<const cplx> a, std::span<const cplx> b);

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

PerturbationReport perturbation_probe(const ComplexMatrix& m, double epsilon, Index n_samples,
                                      std::uint64_t seed);

/// Same probe reusing an existing decomposition of m.
PerturbationReport perturbation_probe(const ComplexMatrix& m, const SpectrumRecord& reference,
                                      double epsilon, Index n_samples, std::uint64_t seed);

struct LocalizationReport {
  std::vector<double> ipr;
  std::vector<double> center_of_mass;
  Index numerical_rank = 0;
  double rank_threshold = 0.0;  // relative to sigma_max
};

/// IPR and center of mass of each right eigenvector against the given
/// coordinates, plus the numerical rank of R at 1e-12 sigma_max.
LocalizationReport skin_localization_metrics(const SpectrumRecord& rec,
                                             std::span<const double> position_labels);

/// Label (i + j) / 2 for Liouville index i + D j.
std::vector<double> liouville_site_labels(Index hilbert_dim);

}  // namespace lspec
