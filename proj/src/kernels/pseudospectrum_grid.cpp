#include "lspec/errors.hpp"
#include "lspec/kernels.hpp"
#include "lspec/threading.hpp"

namespace lspec::kernels {

double sigma_min_at(const ComplexMatrix& m, cplx z) {
  ComplexMatrix shifted = -m;
  shifted.diagonal().array() += z;
  const RealVector s = singular_values(std::move(shifted));
  return s(s.size() - 1);
}

RealMatrix sigma_min_grid(const ComplexMatrix& m, std::span<const double> re_axis,
                          std::span<const double> im_axis) {
  if (m.rows() != m.cols()) throw DimensionError("sigma_min_grid: matrix must be square");
  const auto nr = static_cast<Index>(re_axis.size());
  const auto ni = static_cast<Index>(im_axis.size());
  RealMatrix out(nr, ni);
  const auto total = static_cast<std::ptrdiff_t>(nr * ni);
  // One SVD per grid point; BLAS stays single-threaded inside the worker loop
  // so threads are not oversubscribed.
  SingleThreadedBlas guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t p = 0; p < total; ++p) {
    const Index i = p % nr;
    const Index j = p / nr;
    out(i, j) = sigma_min_at(m, cplx{re_axis[i], im_axis[j]});
  }
  return out;
}

namespace serial {

RealMatrix sigma_min_grid(const ComplexMatrix& m, std::span<const double> re_axis,
                          std::span<const double> im_axis) {
  if (m.rows() != m.cols()) throw DimensionError("sigma_min_grid: matrix must be square");
  RealMatrix out(static_cast<Index>(re_axis.size()), static_cast<Index>(im_axis.size()));
  for (std::size_t j = 0; j < im_axis.size(); ++j) {
    for (std::size_t i = 0; i < re_axis.size(); ++i) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = sigma_min_at(m, cplx{re_axis[i], im_axis[j]});
    }
  }
  return out;
}

}  // namespace serial

}  // namespace lspec::kernels
