#include "lspec/levelstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "lspec/errors.hpp"
#include "lspec/spectra.hpp"
#include "lspec/special_functions.hpp"

namespace lspec {

namespace {

void check_indices(std::span<const cplx> ev, std::span<const Index> indices, const char* who) {
  for (Index i : indices) {
    if (i < 0 || i >= static_cast<Index>(ev.size())) {
      throw DimensionError(std::string(who) + ": index out of range");
    }
  }
}

// Tabulated GinUE law on [0, kTableMax]; beyond it the density is below 1e-30.
struct GinueTable {
  static constexpr double kTableMax = 6.0;
  static constexpr int kSteps = 6000;
  std::vector<double> cdf;  // of the raw law, normalized
  double mean = 0.0;

  GinueTable() {
    const double h = kTableMax / kSteps;
    std::vector<double> pdf(kSteps + 1);
    for (int i = 0; i <= kSteps; ++i) pdf[i] = pdf_ginue(h * i);
    cdf.assign(kSteps + 1, 0.0);
    double first = 0.0;
    for (int i = 1; i <= kSteps; ++i) {
      cdf[i] = cdf[i - 1] + 0.5 * h * (pdf[i - 1] + pdf[i]);
      first += 0.5 * h * (h * (i - 1) * pdf[i - 1] + h * i * pdf[i]);
    }
    const double total = cdf.back();
    for (double& c : cdf) c /= total;
    mean = first / total;
  }

  double raw_cdf(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= kTableMax) return 1.0;
    const double x = s / kTableMax * kSteps;
    const auto i = static_cast<int>(x);
    const double f = x - i;
    return cdf[i] + f * (cdf[i + 1] - cdf[i]);
  }
};

const GinueTable& ginue_table() {
  static const GinueTable table;
  return table;
}

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Index default_neighbor_count(Index n) { return std::max<Index>(1, std::min<Index>(10000, n / 4)); }

std::vector<Index> select_bulk(std::span<const cplx> eigenvalues, Index k, double keep_fraction) {
  const auto n = static_cast<Index>(eigenvalues.size());
  if (k < 1 || k >= n) {
    throw DomainError("select_bulk: need 1 <= k < N (k=" + std::to_string(k) +
                      ", N=" + std::to_string(n) + ")");
  }
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
    throw DomainError("select_bulk: keep_fraction must be in (0, 1]");
  }
  const std::vector<double> dk = kernels::kth_neighbor_distance(eigenvalues, k);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  // Largest density 1/d first is smallest d first.
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return dk[a] < dk[b]; });
  const auto keep = std::min<Index>(
      n, static_cast<Index>(std::ceil(keep_fraction * static_cast<double>(n) - 1e-9)));
  std::vector<Index> out(order.begin(), order.begin() + std::max<Index>(keep, 1));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> nn_spacings(std::span<const cplx> eigenvalues, std::span<const Index> indices) {
  if (eigenvalues.size() < 2) throw DomainError("nn_spacings: need at least 2 eigenvalues");
  check_indices(eigenvalues, indices, "nn_spacings");
  std::vector<double> out;
  out.reserve(indices.size());
  if (eigenvalues.size() == 2) {
    const double d = std::abs(eigenvalues[0] - eigenvalues[1]);
    for (std::size_t i = 0; i < indices.size(); ++i) out.push_back(d);
    return out;
  }
  for (const auto& t : kernels::two_nearest_bucketed(eigenvalues, indices)) out.push_back(t.d_nn);
  return out;
}

std::vector<double> unfold(std::span<const cplx> eigenvalues, std::span<const Index> indices,
                           std::span<const double> spacings, double sigma_factor,
                           UnfoldKernel kernel) {
  if (indices.size() != spacings.size()) {
    throw DimensionError("unfold: indices and spacings differ in length");
  }
  if (spacings.empty()) throw DomainError("unfold: no spacings");
  if (!(sigma_factor > 0.0)) throw DomainError("unfold: sigma_factor must be > 0");
  check_indices(eigenvalues, indices, "unfold");
  double sum = 0.0;
  for (double s : spacings) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("unfold: spacings must be >= 0");
    sum += s;
  }
  const double mean_raw = sum / static_cast<double>(spacings.size());
  if (!(mean_raw > 0.0)) throw DegenerateSpectrumError("unfold: all spacings are zero");
  const double sigma = sigma_factor * mean_raw;
  const std::vector<double> density = kernels::kernel_density(eigenvalues, indices, sigma, kernel);
  std::vector<double> out(spacings.size());
  double total = 0.0;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    out[i] = std::sqrt(density[i]) * spacings[i];
    total += out[i];
  }
  const double mean = total / static_cast<double>(out.size());
  for (double& s : out) s /= mean;
  return out;
}

CsrResult csr(std::span<const cplx> eigenvalues, std::span<const Index> indices) {
  if (eigenvalues.size() < 3) throw DomainError("csr: need at least 3 eigenvalues");
  check_indices(eigenvalues, indices, "csr");
  const auto nb = kernels::two_nearest_bucketed(eigenvalues, indices);
  CsrResult out;
  out.samples.reserve(indices.size());
  out.indices.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (nb[i].d_nnn == 0.0) {
      ++out.discarded;
      continue;
    }
    const cplx mu = eigenvalues[indices[i]];
    cplx z = (eigenvalues[nb[i].nn] - mu) / (eigenvalues[nb[i].nnn] - mu);
    // d_nn <= d_nnn holds exactly, but the quotient can round a hair above 1.
    if (std::abs(z) > 1.0) {
      z /= std::abs(z);
      while (std::abs(z) > 1.0) z *= 1.0 - std::numeric_limits<double>::epsilon();
    }
    out.samples.push_back(z);
    out.indices.push_back(indices[i]);
  }
  return out;
}

double pdf_poisson2d(double s) {
  if (!(s >= 0.0)) throw DomainError("pdf_poisson2d: s must be >= 0");
  return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

double cdf_poisson2d(double s) {
  if (s <= 0.0) return 0.0;
  return -std::expm1(-0.25 * std::numbers::pi * s * s);
}

double pdf_ginue(double s, int k_max) {
  if (!(s >= 0.0)) throw DomainError("pdf_ginue: s must be >= 0");
  if (k_max < 1) throw DomainError("pdf_ginue: k_max must be >= 1");
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return 0.0;
  const double x = s * s;
  const double log_s = std::log(s);
  double log_prod = 0.0;
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double log_q = log_gamma_q(k + 1.0, x);  // Gamma(1+k, x) / k!
    log_prod += log_q;
    sum += std::exp(std::numbers::ln2 + (2.0 * k + 1.0) * log_s - x - std::lgamma(k + 1.0) - log_q);
  }
  return std::exp(log_prod) * sum;
}

double ginue_mean_spacing() { return ginue_table().mean; }

double pdf_ginue_unit_mean(double s) {
  if (!(s >= 0.0)) throw DomainError("pdf_ginue_unit_mean: s must be >= 0");
  const double m = ginue_mean_spacing();
  return m * pdf_ginue(m * s);
}

double cdf_ginue_unit_mean(double s) {
  const auto& t = ginue_table();
  return t.raw_cdf(t.mean * s);
}

ComplexMatrix ginue_matrix(Index n, std::uint64_t seed) {
  if (n < 2) throw DomainError("ginue_matrix: n must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix g(n, n);
  for (Index k = 0; k < g.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    g.data()[k] = scale * cplx{re, im};
  }
  return g;
}

std::vector<cplx> sample_ginue(Index n, std::uint64_t seed) {
  if (n < 2) throw DomainError("sample_ginue: n must be >= 2");
  return eigenvalues_only(ginue_matrix(n, seed));
}

std::vector<cplx> sample_uniform_disk(Index n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_uniform_disk: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const double r = std::sqrt(u(rng));
    const double phi = 2.0 * std::numbers::pi * u(rng);
    out.push_back(std::polar(r, phi));
  }
  return out;
}

Histogram histogram(std::span<const double> samples, Index bins) {
  if (samples.empty()) throw DomainError("histogram: no samples");
  if (bins < 0) throw DomainError("histogram: bins must be >= 0");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted.front();
  double hi = sorted.back();
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (bins == 0) {
    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
    bins = width > 0.0 ? static_cast<Index>(std::ceil((hi - lo) / width)) : 1;
    bins = std::clamp<Index>(bins, 1, 10000);
  }
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins + 1));
  for (Index b = 0; b <= bins; ++b) {
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double s : sorted) {
    auto b = static_cast<Index>((s - lo) / width);
    counts[std::clamp<Index>(b, 0, bins - 1)] += 1.0;
  }
  h.density.resize(counts.size());
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * width);
  for (std::size_t b = 0; b < counts.size(); ++b) h.density[b] = counts[b] * norm;
  return h;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_distance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

Collapsed collapse_degeneracies(std::span<const cplx> eigenvalues, double rel_tol) {
  if (!(rel_tol >= 0.0)) throw DomainError("collapse_degeneracies: tolerance must be >= 0");
  const auto n = static_cast<std::ptrdiff_t>(eigenvalues.size());
  double diameter = 0.0;
#pragma omp parallel for reduction(max : diameter) schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      diameter = std::max(diameter, std::abs(eigenvalues[i] - eigenvalues[j]));
    }
  }
  const double tol = rel_tol * diameter;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (eigenvalues[a].real() != eigenvalues[b].real()) {
      return eigenvalues[a].real() < eigenvalues[b].real();
    }
    return a < b;
  });
  // Sweep in Re order; a point is a duplicate if a kept point within tol
  // exists among the trailing window |dRe| <= tol.
  std::vector<bool> keep(static_cast<std::size_t>(n), true);
  std::vector<Index> kept_sorted;
  for (Index p : order) {
    bool dup = false;
    for (auto it = kept_sorted.rbegin(); it != kept_sorted.rend(); ++it) {
      if (eigenvalues[p].real() - eigenvalues[*it].real() > tol) break;
      if (std::abs(eigenvalues[p] - eigenvalues[*it]) <= tol) {
        dup = true;
        break;
      }
    }
    if (dup) {
      keep[p] = false;
    } else {
      kept_sorted.push_back(p);
    }
  }
  Collapsed out;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (keep[i]) {
      out.kept.push_back(i);
      out.values.push_back(eigenvalues[i]);
    } else {
      ++out.removed;
    }
  }
  return out;
}

void validate(const LevelStatsOptions& opts) {
  if (opts.k < 0) throw ConfigError("levelstats: k must be >= 0 (0 selects the default)");
  if (!(opts.keep_fraction > 0.0) || opts.keep_fraction > 1.0) {
    throw ConfigError("levelstats: keep_fraction must be in (0, 1]");
  }
  if (!(opts.sigma_factor > 0.0) || !std::isfinite(opts.sigma_factor)) {
    throw ConfigError("levelstats: sigma_factor must be > 0");
  }
  if (!(opts.degeneracy_tol >= 0.0)) throw ConfigError("levelstats: degeneracy_tol must be >= 0");
  if (opts.histogram_bins < 0) throw ConfigError("levelstats: histogram_bins must be >= 0");
}

LevelStatsReport analyze_level_statistics(std::span<const cplx> eigenvalues,
                                          const LevelStatsOptions& opts) {
  validate(opts);
  LevelStatsReport rep;
  Collapsed c = collapse_degeneracies(eigenvalues, opts.degeneracy_tol);
  rep.eigenvalues = std::move(c.values);
  rep.degeneracies_removed = c.removed;
  const auto n = static_cast<Index>(rep.eigenvalues.size());
  if (n < 4) throw DegenerateSpectrumError("levelstats: fewer than 4 distinct eigenvalues");
  rep.k = opts.k > 0 ? opts.k : default_neighbor_count(n);
  rep.bulk_indices = select_bulk(rep.eigenvalues, rep.k, opts.keep_fraction);
  rep.spacings_raw = nn_spacings(rep.eigenvalues, rep.bulk_indices);
  rep.spacings_unfolded =
      unfold(rep.eigenvalues, rep.bulk_indices, rep.spacings_raw, opts.sigma_factor, opts.kernel);
  rep.histogram = histogram(rep.spacings_unfolded, opts.histogram_bins);

  CsrResult z = csr(rep.eigenvalues, rep.bulk_indices);
  rep.csr_samples = std::move(z.samples);
  rep.csr_indices = std::move(z.indices);
  rep.csr_discarded = z.discarded;
  if (rep.csr_samples.empty()) throw DegenerateSpectrumError("levelstats: no valid spacing ratios");
  double r = 0.0, cs = 0.0;
  for (const cplx& s : rep.csr_samples) {
    const double a = std::abs(s);
    r += a;
    cs += a > 0.0 ? s.real() / a : 0.0;
  }
  rep.mean_r = r / static_cast<double>(rep.csr_samples.size());
  rep.mean_minus_cos = -cs / static_cast<double>(rep.csr_samples.size());
  rep.ks_ginue = ks_distance(rep.spacings_unfolded, cdf_ginue_unit_mean);
  rep.ks_poisson = ks_distance(rep.spacings_unfolded, cdf_poisson2d);
  return rep;
}

}  // namespace lspec
