#include <doctest.h>

#include <numeric>

#include "lspec/kernels.hpp"
#include "lspec/levelstats.hpp"
#include "support.hpp"

using namespace lspec;

namespace {

std::vector<Index> every(std::size_t n) {
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial references") {
  auto pts = sample_ginue(400, 8);
  pts.push_back(pts[3]);  // exact duplicate
  const auto idx = every(pts.size());

  const auto a = kernels::two_nearest(pts, idx);
  const auto b = kernels::serial::two_nearest(pts, idx);
  const auto c = kernels::two_nearest_bucketed(pts, idx);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    CHECK(a[i].nn == b[i].nn);
    CHECK(a[i].nnn == b[i].nnn);
    CHECK(a[i].d_nn == b[i].d_nn);
    CHECK(c[i].nn == b[i].nn);
    CHECK(c[i].nnn == b[i].nnn);
    CHECK(c[i].d_nnn == b[i].d_nnn);
  }
  CHECK(a[3].d_nn == 0.0);

  CHECK(kernels::kth_neighbor_distance(pts, 17) == kernels::serial::kth_neighbor_distance(pts, 17));
  for (auto k : {kernels::DensityKernel::Printed, kernels::DensityKernel::Gaussian}) {
    CHECK(kernels::kernel_density(pts, idx, 0.3, k) == kernels::serial::kernel_density(pts, idx, 0.3, k));
  }

  std::mt19937_64 rng(2);
  const ComplexMatrix m = test::random_matrix(12, rng);
  const std::vector<double> re = {-1.0, 0.0, 0.5, 2.0}, im = {-0.5, 0.25, 1.0};
  const RealMatrix g = kernels::sigma_min_grid(m, re, im);
  CHECK(g == kernels::serial::sigma_min_grid(m, re, im));
  CHECK(g(1, 1) == kernels::sigma_min_at(m, {0.0, 0.25}));
}

TEST_CASE("k-th neighbour distance by hand") {
  const std::vector<cplx> pts = {0.0, 1.0, 3.0, 7.0};
  CHECK(kernels::kth_neighbor_distance(pts, 1) == std::vector<double>{1.0, 1.0, 2.0, 4.0});
  CHECK(kernels::kth_neighbor_distance(pts, 2) == std::vector<double>{3.0, 2.0, 3.0, 6.0});
}

TEST_CASE("kernel density normalization") {
  // A single isolated point sees only itself.
  const std::vector<cplx> pts = {0.0, 100.0};
  const std::vector<Index> q = {0};
  const double sigma = 0.5;
  CHECK(kernels::kernel_density(pts, q, sigma, kernels::DensityKernel::Gaussian)[0] ==
        doctest::Approx(1.0 / (2.0 * std::numbers::pi * sigma * sigma)));
}
