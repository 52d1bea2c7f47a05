#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP implementation in
// lspec::kernels and a plain serial reference in lspec::kernels::serial; every
// output element is produced by exactly one thread in a fixed summation
// order, so both paths agree bitwise.

#include <span>
#include <vector>

#include "lspec/linalg.hpp"

namespace lspec::kernels {

struct TwoNearest {
  Index nn = -1;
  Index nnn = -1;
  double d_nn = 0.0;
  double d_nnn = 0.0;
};

enum class DensityKernel {
  Printed,   // exp(-|d| / (2 sigma^2))
  Gaussian,  // exp(-|d|^2 / (2 sigma^2))
};

/// Nearest and next-nearest neighbour of each query among all other points;
/// ties go to the lower index. Requires at least 3 points.
std::vector<TwoNearest> two_nearest(std::span<const cplx> points, std::span<const Index> queries);

/// Distance from every point to its k-th nearest other point (k >= 1).
std::vector<double> kth_neighbor_distance(std::span<const cplx> points, Index k);

/// (1 / 2 pi sigma^2) sum_m w(|z_q - z_m|) for each query, summed over all
/// points in index order.
std::vector<double> kernel_density(std::span<const cplx> points, std::span<const Index> queries,
                                   double sigma, DensityKernel kernel);

/// sigma_min(z I - m) on the tensor grid re_axis x im_axis; result(i, j)
/// belongs to z = re_axis[i] + i im_axis[j].
RealMatrix sigma_min_grid(const ComplexMatrix& m, std::span<const double> re_axis,
                          std::span<const double> im_axis);

double sigma_min_at(const ComplexMatrix& m, cplx z);

/// Same result as two_nearest via a uniform bucket grid; exact, not approximate.
std::vector<TwoNearest> two_nearest_bucketed(std::span<const cplx> points,
                                             std::span<const Index> queries);

namespace serial {

std::vector<TwoNearest> two_nearest(std::span<const cplx> points, std::span<const Index> queries);
std::vector<double> kth_neighbor_distance(std::span<const cplx> points, Index k);
std::vector<double> kernel_density(std::span<const cplx> points, std::span<const Index> queries,
                                   double sigma, DensityKernel kernel);
RealMatrix sigma_min_grid(const ComplexMatrix& m, std::span<const double> re_axis,
                          std::span<const double> im_axis);

}  // namespace serial

}  // namespace lspec::kernels
