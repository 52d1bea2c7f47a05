#include "lspec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "lspec/errors.hpp"
#include "lspec/operator_core.hpp"

namespace lspec {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw DomainError("median of empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

Index nearest_to_zero(std::span<const cplx> eigenvalues) {
  if (eigenvalues.empty()) throw DomainError("nearest_to_zero: empty spectrum");
  Index best = 0;
  for (std::size_t k = 1; k < eigenvalues.size(); ++k) {
    if (std::abs(eigenvalues[k]) < std::abs(eigenvalues[best])) best = static_cast<Index>(k);
  }
  return best;
}

double distance_to_set(cplx z, std::span<const cplx> set) {
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& w : set) best = std::min(best, std::abs(z - w));
  return best;
}

ConditionSummary condition_summary(const SpectrumRecord& rec, Index size, double keep_fraction) {
  ConditionSummary out;
  out.size = size;
  const Index n = static_cast<Index>(rec.size());
  const Index s = nearest_to_zero(rec.eigenvalues);
  out.steady_eigenvalue = rec.eigenvalues[s];
  out.kappa_steady = rec.condition_numbers[s];
  out.kappa_max = *std::max_element(rec.condition_numbers.begin(), rec.condition_numbers.end());
  out.n_saturated = static_cast<Index>(std::count(rec.saturated.begin(), rec.saturated.end(), true));
  const std::vector<Index> bulk = select_bulk(rec.eigenvalues, default_neighbor_count(n), keep_fraction);
  std::vector<double> kb;
  kb.reserve(bulk.size());
  for (Index i : bulk) kb.push_back(rec.condition_numbers[i]);
  out.kappa_bulk_median = median(std::move(kb));
  out.kappa_v = eigenvector_condition_number(rec);
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const double r = std::max(rec.right_residuals[k], rec.left_residuals[k]) / rec.matrix_norm;
    out.max_relative_residual = std::max(out.max_relative_residual, r);
  }
  return out;
}

std::vector<cplx> pseudospectrum_probes(std::span<const cplx> eigenvalues,
                                        std::span<const cplx> reference, double min_distance,
                                        Index count) {
  if (count < 1) throw DomainError("pseudospectrum_probes: count must be >= 1");
  const auto n = static_cast<Index>(eigenvalues.size());
  const std::vector<Index> bulk = select_bulk(eigenvalues, default_neighbor_count(n), 0.4);
  const auto nb = kernels::two_nearest(eigenvalues, bulk);
  std::vector<cplx> candidates;
  for (std::size_t i = 0; i < bulk.size(); ++i) {
    const cplx mid = 0.5 * (eigenvalues[bulk[i]] + eigenvalues[nb[i].nn]);
    if (distance_to_set(mid, reference) > min_distance) candidates.push_back(mid);
  }
  if (static_cast<Index>(candidates.size()) < count) {
    throw DomainError("pseudospectrum_probes: only " + std::to_string(candidates.size()) +
                      " candidate points away from the reference set");
  }
  std::vector<cplx> out;
  const auto nc = static_cast<double>(candidates.size());
  for (Index k = 0; k < count; ++k) {
    const auto pos = static_cast<std::size_t>((static_cast<double>(k) + 0.5) * nc / static_cast<double>(count));
    out.push_back(candidates[pos]);
  }
  return out;
}

SkinSummary chain_skin_summary(const ChainParams& p) {
  const SuperoperatorMatrix sup = assemble_superoperator(build_chain(p));
  const SpectrumRecord rec = decompose(sup.matrix());
  const LocalizationReport loc = skin_localization_metrics(rec, liouville_site_labels(p.length));
  SkinSummary out;
  out.length = p.length;
  const double centre = 0.5 * static_cast<double>(p.length - 1);
  std::vector<double> disp;
  disp.reserve(loc.center_of_mass.size());
  for (double c : loc.center_of_mass) disp.push_back(std::abs(c - centre));
  out.median_displacement = median(std::move(disp));
  out.numerical_rank = loc.numerical_rank;
  out.rank_fraction = static_cast<double>(loc.numerical_rank) /
                      static_cast<double>(p.length * p.length);
  out.median_ipr = median(loc.ipr);
  return out;
}

ComplexMatrix random_normal_matrix(Index n, std::uint64_t seed, std::vector<cplx>* spectrum) {
  if (n < 1) throw DomainError("random_normal_matrix: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (Index k = 0; k < g.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    g.data()[k] = cplx{re, im};
  }
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(g).householderQ();
  ComplexVector d(n);
  for (Index k = 0; k < n; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    d(k) = cplx{re, im};
  }
  if (spectrum != nullptr) spectrum->assign(d.data(), d.data() + n);
  return q * d.asDiagonal() * q.adjoint();
}

std::vector<double> uniform_times(double t_end, Index n) {
  if (n < 2 || !(t_end > 0.0)) throw DomainError("uniform_times: need n >= 2 and t_end > 0");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) t[k] = t_end * static_cast<double>(k) / static_cast<double>(n - 1);
  return t;
}

}  // namespace lspec
