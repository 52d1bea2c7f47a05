#include "lspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lspec/errors.hpp"
#include "lspec/kernels.hpp"
#include "lspec/log.hpp"
#include "lspec/threading.hpp"

namespace lspec {

namespace {

void require_square_finite(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
  if (!all_finite(m)) throw DomainError(std::string(who) + ": non-finite entries");
}

double norm_inf(const ComplexMatrix& a) {
  double best = 0.0;
  for (Index i = 0; i < a.rows(); ++i) best = std::max(best, a.row(i).cwiseAbs().sum());
  return best;
}

constexpr Index kResidualBlock = 256;

}  // namespace

bool SpectrumRecord::any_saturated() const {
  return std::any_of(saturated.begin(), saturated.end(), [](bool b) { return b; });
}

std::vector<Index> spectral_order(std::span<const cplx> values) {
  const auto n = static_cast<Index>(values.size());
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) idx[k] = k;
  double scale = 0.0;
  for (const cplx& v : values) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, std::numeric_limits<double>::min());

  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const cplx& x = values[a];
    const cplx& y = values[b];
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
    return a < b;
  });
  Index g = 0;
  while (g < n) {
    Index e = g + 1;
    while (e < n && values[idx[e]].real() - values[idx[e - 1]].real() <= tol) ++e;
    if (e - g > 1) {
      std::sort(idx.begin() + g, idx.begin() + e, [&](Index a, Index b) {
        const cplx& x = values[a];
        const cplx& y = values[b];
        if (x.imag() != y.imag()) return x.imag() < y.imag();
        if (x.real() != y.real()) return x.real() < y.real();
        return a < b;
      });
    }
    g = e;
  }
  return idx;
}

SpectrumRecord decompose(const ComplexMatrix& m) {
  require_square_finite(m, "decompose");
  const Index n = m.rows();
  GeneralEigen ge = general_eigen(m, true);
  const std::vector<cplx> raw(ge.values.data(), ge.values.data() + n);
  const std::vector<Index> order = spectral_order(raw);

  SpectrumRecord rec;
  rec.eigenvalues.resize(static_cast<std::size_t>(n));
  rec.right.resize(n, n);
  rec.left.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    rec.eigenvalues[k] = raw[order[k]];
    rec.right.col(k) = ge.right.col(order[k]).normalized();
    rec.left.col(k) = ge.left.col(order[k]).normalized();
  }
  ge = GeneralEigen{};

  rec.overlaps.resize(static_cast<std::size_t>(n));
  rec.condition_numbers.resize(static_cast<std::size_t>(n));
  rec.saturated.resize(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const cplx ov = rec.left.col(k).dot(rec.right.col(k));
    rec.overlaps[k] = ov;
    const double mag = std::abs(ov);
    const double kappa = mag > 0.0 ? 1.0 / mag : std::numeric_limits<double>::max();
    rec.condition_numbers[k] = kappa;
    rec.saturated[k] = kappa >= kKappaSaturation;
  }

  // 2-norm upper bound sqrt(|M|_1 |M|_inf); avoids an O(n^3) SVD here.
  rec.matrix_norm = std::sqrt(norm1(m) * norm_inf(m));
  rec.right_residuals.resize(static_cast<std::size_t>(n));
  rec.left_residuals.resize(static_cast<std::size_t>(n));
  ComplexMatrix work;
  for (Index c0 = 0; c0 < n; c0 += kResidualBlock) {
    const Index w = std::min(kResidualBlock, n - c0);
    Eigen::Map<const ComplexVector> mu(rec.eigenvalues.data() + c0, w);
    work.noalias() = m * rec.right.middleCols(c0, w);
    work -= rec.right.middleCols(c0, w) * mu.asDiagonal();
    for (Index k = 0; k < w; ++k) rec.right_residuals[c0 + k] = work.col(k).norm();
    work.noalias() = m.adjoint() * rec.left.middleCols(c0, w);
    work -= rec.left.middleCols(c0, w) * mu.conjugate().asDiagonal();
    for (Index k = 0; k < w; ++k) rec.left_residuals[c0 + k] = work.col(k).norm();
  }
  return rec;
}

std::vector<cplx> eigenvalues_only(ComplexMatrix m) {
  require_square_finite(m, "eigenvalues_only");
  const GeneralEigen ge = general_eigen(std::move(m), false);
  const std::vector<cplx> raw(ge.values.data(), ge.values.data() + ge.values.size());
  std::vector<cplx> out;
  out.reserve(raw.size());
  for (Index k : spectral_order(raw)) out.push_back(raw[k]);
  return out;
}

NonNormality eigenvector_condition_number(const SpectrumRecord& rec) {
  NonNormality out;
  if (rec.right.size() == 0) throw DimensionError("eigenvector_condition_number: empty record");
  const RealVector s = singular_values(rec.right);
  out.sigma_max = s(0);
  out.sigma_min = s(s.size() - 1);
  const double eps = std::numeric_limits<double>::epsilon();
  if (out.sigma_min < 1e-14 * out.sigma_max) {
    log_warning("eigenvector matrix is close to singular: sigma_min/sigma_max = " +
                std::to_string(out.sigma_min / out.sigma_max));
  }
  if (out.sigma_min <= eps * out.sigma_max) {
    out.singular = true;
    out.kappa = std::numeric_limits<double>::infinity();
  } else {
    out.kappa = std::max(1.0, out.sigma_max / out.sigma_min);
  }
  return out;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> PseudospectrumGrid::inside(double eps) const {
  return (sigma_min.array() < eps).matrix();
}

PseudospectrumGrid pseudospectrum(const ComplexMatrix& m, const Window& window, Index n_re,
                                  Index n_im, std::vector<double> epsilons) {
  require_square_finite(m, "pseudospectrum");
  if (n_re < 2 || n_im < 2) throw DomainError("pseudospectrum: resolution must be >= 2 per axis");
  if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min)) {
    throw DomainError("pseudospectrum: degenerate window");
  }
  for (double e : epsilons) {
    if (!(e > 0.0)) throw DomainError("pseudospectrum: epsilon levels must be > 0");
  }
  PseudospectrumGrid g;
  auto axis = [](double lo, double hi, Index n) {
    std::vector<double> a(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
      a[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return a;
  };
  g.re_axis = axis(window.re_min, window.re_max, n_re);
  g.im_axis = axis(window.im_min, window.im_max, n_im);
  g.sigma_min = kernels::sigma_min_grid(m, g.re_axis, g.im_axis);
  std::sort(epsilons.begin(), epsilons.end());
  g.epsilon_levels = std::move(epsilons);
  return g;
}

std::vector<double> sigma_min_at_points(const ComplexMatrix& m, std::span<const cplx> points) {
  require_square_finite(m, "sigma_min_at_points");
  std::vector<double> out(points.size());
  const auto np = static_cast<std::ptrdiff_t>(points.size());
  SingleThreadedBlas guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < np; ++k) out[k] = kernels::sigma_min_at(m, points[k]);
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix random_unit_perturbation(Index n, std::uint64_t seed) {
  if (n < 1) throw DomainError("random_unit_perturbation: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix p(n, n);
  for (Index k = 0; k < p.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    p.data()[k] = cplx{re, im};
  }
  return p / spectral_norm(p);
}

std::vector<Index> greedy_match(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionError("greedy_match: sets differ in size");
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  struct Pair {
    double d;
    std::int32_t i;
    std::int32_t j;
  };
  if (n > std::numeric_limits<std::int32_t>::max()) throw DimensionError("greedy_match: too large");
  std::vector<Pair> pairs(static_cast<std::size_t>(n * n));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      pairs[i * n + j] = {std::abs(a[i] - b[j]), static_cast<std::int32_t>(i),
                          static_cast<std::int32_t>(j)};
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<Index> match(static_cast<std::size_t>(n), -1);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  std::ptrdiff_t left = n;
  for (const Pair& p : pairs) {
    if (left == 0) break;
    if (match[p.i] >= 0 || taken[p.j]) continue;
    match[p.i] = p.j;
    taken[p.j] = true;
    --left;
  }
  return match;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) throw DomainError("hausdorff_distance: empty set");
  auto directed = [](std::span<const cplx> x, std::span<const cplx> y) {
    std::vector<double> nearest(x.size());
    const auto nx = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nx; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx& z : y) best = std::min(best, std::abs(x[i] - z));
      nearest[i] = best;
    }
    return *std::max_element(nearest.begin(), nearest.end());
  };
  return std::max(directed(a, b), directed(b, a));
}

PerturbationReport perturbation_probe(const ComplexMatrix& m, double epsilon, Index n_samples,
                                      std::uint64_t seed) {
  require_square_finite(m, "perturbation_probe");
  if (!(epsilon > 0.0)) throw DomainError("perturbation_probe: epsilon must be > 0");
  return perturbation_probe(m, decompose(m), epsilon, n_samples, seed);
}

PerturbationReport perturbation_probe(const ComplexMatrix& m, const SpectrumRecord& reference,
                                      double epsilon, Index n_samples, std::uint64_t seed) {
  require_square_finite(m, "perturbation_probe");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("perturbation_probe: epsilon must be > 0");
  }
  if (n_samples < 1) throw DomainError("perturbation_probe: n_samples must be >= 1");
  if (static_cast<Index>(reference.size()) != m.rows()) {
    throw DimensionError("perturbation_probe: reference spectrum does not match matrix");
  }
  PerturbationReport rep;
  rep.epsilon = epsilon;
  rep.eigenvalues = reference.eigenvalues;
  rep.saturated = reference.saturated;
  rep.bounds.reserve(reference.size());
  for (double k : reference.condition_numbers) rep.bounds.push_back(k * epsilon);

  for (Index s = 0; s < n_samples; ++s) {
    PerturbationSample sample;
    sample.seed = derive_seed(seed, static_cast<std::uint64_t>(s));
    ComplexMatrix perturbed = random_unit_perturbation(m.rows(), sample.seed);
    perturbed *= epsilon;
    perturbed += m;
    const std::vector<cplx> ev = eigenvalues_only(std::move(perturbed));
    const std::vector<Index> match = greedy_match(rep.eigenvalues, ev);
    sample.shifts.resize(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
      sample.shifts[i] = std::abs(ev[match[i]] - rep.eigenvalues[i]);
    }
    sample.hausdorff = hausdorff_distance(rep.eigenvalues, ev);
    rep.samples.push_back(std::move(sample));
  }
  return rep;
}

LocalizationReport skin_localization_metrics(const SpectrumRecord& rec,
                                             std::span<const double> position_labels) {
  const Index dim = rec.right.rows();
  if (static_cast<Index>(position_labels.size()) != dim) {
    throw DimensionError("skin_localization_metrics: " + std::to_string(position_labels.size()) +
                         " labels for vectors of length " + std::to_string(dim));
  }
  LocalizationReport out;
  const Index n = rec.right.cols();
  out.ipr.resize(static_cast<std::size_t>(n));
  out.center_of_mass.resize(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    double s2 = 0.0, s4 = 0.0, com = 0.0;
    for (Index i = 0; i < dim; ++i) {
      const double p = std::norm(rec.right(i, k));
      s2 += p;
      s4 += p * p;
      com += position_labels[i] * p;
    }
    out.ipr[k] = s4 / (s2 * s2);
    out.center_of_mass[k] = com / s2;
  }
  out.rank_threshold = 1e-12;
  const RealVector s = singular_values(rec.right);
  const double cut = out.rank_threshold * s(0);
  out.numerical_rank = static_cast<Index>((s.array() > cut).count());
  return out;
}

std::vector<double> liouville_site_labels(Index hilbert_dim) {
  if (hilbert_dim < 1) throw DomainError("liouville_site_labels: dimension must be >= 1");
  std::vector<double> labels(static_cast<std::size_t>(hilbert_dim * hilbert_dim));
  for (Index j = 0; j < hilbert_dim; ++j) {
    for (Index i = 0; i < hilbert_dim; ++i) {
      labels[i + hilbert_dim * j] = 0.5 * static_cast<double>(i + j);
    }
  }
  return labels;
}

}  // namespace lspec
