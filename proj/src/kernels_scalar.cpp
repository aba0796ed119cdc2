#include <cmath>

#include "spoly/kernels.hpp"

namespace spoly::kern {

SoaPoints SoaPoints::from_rows(const double* rows, std::size_t count, int dim) {
  SoaPoints p;
  p.dim = dim;
  p.count = count;
  p.data.resize(std::size_t(dim) * count);
  for (std::size_t i = 0; i < count; ++i)
    for (int d = 0; d < dim; ++d) p.data[std::size_t(d) * count + i] = rows[i * std::size_t(dim) + d];
  return p;
}

namespace detail {

void dot_all_scalar(const SoaPoints& pts, const double* w, double* out) {
  const std::size_t n = pts.count;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int d = 0; d < pts.dim; ++d) acc = std::fma(pts.lane(d)[i], w[d], acc);
    out[i] = acc;
  }
}

std::size_t count_dot_ge_scalar(const SoaPoints& pts, const double* w, double threshold) {
  const std::size_t n = pts.count;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int d = 0; d < pts.dim; ++d) acc = std::fma(pts.lane(d)[i], w[d], acc);
    cnt += acc >= threshold ? 1 : 0;
  }
  return cnt;
}

DotArgMax argmax_dot_scalar(const SoaPoints& pts, const double* w) {
  DotArgMax best;
  best.value = -HUGE_VAL;
  const std::size_t n = pts.count;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int d = 0; d < pts.dim; ++d) acc = std::fma(pts.lane(d)[i], w[d], acc);
    if (acc > best.value) {
      best.value = acc;
      best.index = i;
    }
  }
  return best;
}

std::size_t count_ge_scalar(const double* values, std::size_t count, double threshold) {
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < count; ++i) cnt += values[i] >= threshold ? 1 : 0;
  return cnt;
}

}  // namespace detail
}  // namespace spoly::kern
