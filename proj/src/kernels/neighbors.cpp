#include <algorithm>
#include <cmath>
#include <limits>

#include "lspec/errors.hpp"
#include "lspec/kernels.hpp"

namespace lspec::kernels {

namespace {

// Lexicographic (distance, index) so ties resolve to the lower index.
inline void offer(TwoNearest& best, Index m, double d) {
  if (d < best.d_nn || (d == best.d_nn && m < best.nn)) {
    best.nnn = best.nn;
    best.d_nnn = best.d_nn;
    best.nn = m;
    best.d_nn = d;
  } else if (d < best.d_nnn || (d == best.d_nnn && m < best.nnn)) {
    best.nnn = m;
    best.d_nnn = d;
  }
}

TwoNearest empty_best() {
  TwoNearest b;
  b.d_nn = std::numeric_limits<double>::infinity();
  b.d_nnn = std::numeric_limits<double>::infinity();
  b.nn = std::numeric_limits<Index>::max();
  b.nnn = std::numeric_limits<Index>::max();
  return b;
}

TwoNearest scan_all(std::span<const cplx> points, Index q) {
  TwoNearest best = empty_best();
  const cplx zq = points[q];
  const auto n = static_cast<Index>(points.size());
  for (Index m = 0; m < n; ++m) {
    if (m == q) continue;
    offer(best, m, std::abs(points[m] - zq));
  }
  return best;
}

double kth_of(std::span<const cplx> points, Index q, Index k, std::vector<double>& scratch) {
  const cplx zq = points[q];
  scratch.clear();
  for (std::size_t m = 0; m < points.size(); ++m) {
    if (static_cast<Index>(m) == q) continue;
    scratch.push_back(std::abs(points[m] - zq));
  }
  auto nth = scratch.begin() + (k - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

void check_queries(std::span<const cplx> points, std::span<const Index> queries) {
  if (points.size() < 3) throw DomainError("two_nearest: need at least 3 points");
  for (Index q : queries) {
    if (q < 0 || q >= static_cast<Index>(points.size())) {
      throw DimensionError("two_nearest: query index out of range");
    }
  }
}

void check_k(std::span<const cplx> points, Index k) {
  if (k < 1 || k >= static_cast<Index>(points.size())) {
    throw DomainError("kth_neighbor_distance: need 1 <= k < N");
  }
}

}  // namespace

std::vector<TwoNearest> two_nearest(std::span<const cplx> points, std::span<const Index> queries) {
  check_queries(points, queries);
  std::vector<TwoNearest> out(queries.size());
  const auto nq = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nq; ++i) out[i] = scan_all(points, queries[i]);
  return out;
}

std::vector<double> kth_neighbor_distance(std::span<const cplx> points, Index k) {
  check_k(points, k);
  std::vector<double> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel
  {
    std::vector<double> scratch;
    scratch.reserve(points.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t q = 0; q < n; ++q) out[q] = kth_of(points, q, k, scratch);
  }
  return out;
}

namespace serial {

std::vector<TwoNearest> two_nearest(std::span<const cplx> points, std::span<const Index> queries) {
  check_queries(points, queries);
  std::vector<TwoNearest> out;
  out.reserve(queries.size());
  for (Index q : queries) out.push_back(scan_all(points, q));
  return out;
}

std::vector<double> kth_neighbor_distance(std::span<const cplx> points, Index k) {
  check_k(points, k);
  std::vector<double> out(points.size());
  std::vector<double> scratch;
  for (std::size_t q = 0; q < points.size(); ++q) {
    out[q] = kth_of(points, static_cast<Index>(q), k, scratch);
  }
  return out;
}

}  // namespace serial

std::vector<TwoNearest> two_nearest_bucketed(std::span<const cplx> points,
                                             std::span<const Index> queries) {
  check_queries(points, queries);
  const auto n = static_cast<Index>(points.size());
  double x0 = points[0].real(), x1 = x0, y0 = points[0].imag(), y1 = y0;
  for (const cplx& z : points) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  // Square cells sized for about two points per occupied cell on average.
  const double span_x = x1 - x0;
  const double span_y = y1 - y0;
  double h = std::sqrt(std::max(span_x * span_y, 0.0) / static_cast<double>(n) * 2.0);
  if (!(h > 0.0)) h = std::max(span_x, span_y) / static_cast<double>(n);
  if (!(h > 0.0)) return serial::two_nearest(points, queries);  // all points coincide
  const auto nx = static_cast<Index>(std::floor(span_x / h)) + 1;
  const auto ny = static_cast<Index>(std::floor(span_y / h)) + 1;

  auto cell_x = [&](double x) { return std::min(nx - 1, static_cast<Index>((x - x0) / h)); };
  auto cell_y = [&](double y) { return std::min(ny - 1, static_cast<Index>((y - y0) / h)); };

  // Counting sort of point indices into cells (CSR layout).
  std::vector<Index> start(static_cast<std::size_t>(nx * ny + 1), 0);
  std::vector<Index> cell_of(static_cast<std::size_t>(n));
  for (Index m = 0; m < n; ++m) {
    cell_of[m] = cell_x(points[m].real()) + nx * cell_y(points[m].imag());
    ++start[cell_of[m] + 1];
  }
  for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
  std::vector<Index> members(static_cast<std::size_t>(n));
  {
    std::vector<Index> fill(start.begin(), start.end() - 1);
    for (Index m = 0; m < n; ++m) members[fill[cell_of[m]]++] = m;
  }

  std::vector<TwoNearest> out(queries.size());
  const auto nq = static_cast<std::ptrdiff_t>(queries.size());
  const Index max_ring = std::max(nx, ny);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < nq; ++i) {
    const Index q = queries[i];
    const cplx zq = points[q];
    const Index cx = cell_x(zq.real());
    const Index cy = cell_y(zq.imag());
    TwoNearest best = empty_best();
    for (Index r = 0; r <= max_ring; ++r) {
      for (Index gy = cy - r; gy <= cy + r; ++gy) {
        if (gy < 0 || gy >= ny) continue;
        const bool edge_row = (gy == cy - r || gy == cy + r);
        const Index step = edge_row ? 1 : 2 * r;
        for (Index gx = cx - r; gx <= cx + r; gx += std::max<Index>(step, 1)) {
          if (gx < 0 || gx >= nx) continue;
          const Index c = gx + nx * gy;
          for (Index p = start[c]; p < start[c + 1]; ++p) {
            const Index m = members[p];
            if (m == q) continue;
            offer(best, m, std::abs(points[m] - zq));
          }
        }
      }
      // Points outside the visited block lie at least r*h away.
      if (best.d_nnn < static_cast<double>(r) * h) break;
    }
    out[i] = best;
  }
  return out;
}

}  // namespace lspec::kernels
