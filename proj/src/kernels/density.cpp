#include <cmath>
#include <numbers>

#include "lspec/errors.hpp"
#include "lspec/kernels.hpp"

namespace lspec::kernels {

namespace {

double density_at(std::span<const cplx> points, cplx zq, double inv_two_sigma2, DensityKernel kernel) {
  double sum = 0.0;
  if (kernel == DensityKernel::Printed) {
    for (const cplx& z : points) sum += std::exp(-std::abs(zq - z) * inv_two_sigma2);
  } else {
    for (const cplx& z : points) sum += std::exp(-std::norm(zq - z) * inv_two_sigma2);
  }
  return sum;
}

void check(std::span<const cplx> points, std::span<const Index> queries, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("kernel_density: sigma must be > 0");
  for (Index q : queries) {
    if (q < 0 || q >= static_cast<Index>(points.size())) {
      throw DimensionError("kernel_density: query index out of range");
    }
  }
}

}  // namespace

std::vector<double> kernel_density(std::span<const cplx> points, std::span<const Index> queries,
                                   double sigma, DensityKernel kernel) {
  check(points, queries, sigma);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const double norm = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  std::vector<double> out(queries.size());
  const auto nq = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nq; ++i) {
    out[i] = norm * density_at(points, points[queries[i]], inv, kernel);
  }
  return out;
}

namespace serial {

std::vector<double> kernel_density(std::span<const cplx> points, std::span<const Index> queries,
                                   double sigma, DensityKernel kernel) {
  check(points, queries, sigma);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const double norm = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  std::vector<double> out;
  out.reserve(queries.size());
  for (Index q : queries) out.push_back(norm * density_at(points, points[q], inv, kernel));
  return out;
}

}  // namespace serial

}  // namespace lspec::kernels
