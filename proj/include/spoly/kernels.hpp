#pragma once
// Data-parallel inner loops over dimension-major point arrays: dot-product
// sweeps, thresholded counts, argmax reductions. A scalar reference
// implementation always exists; an AVX2+FMA variant is selected at runtime
// when the CPU supports it. Both backends evaluate each point's FMA chain in
// the same order, so results are bit-for-bit identical and the equivalence
// tests assert exact equality.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spoly/common.hpp"

namespace spoly::kern {

// dim lanes of `count` doubles each; lane d holds coordinate d of every point.
struct SoaPoints {
  int dim = 0;
  std::size_t count = 0;
  std::vector<double> data;

  const double* lane(int d) const { return data.data() + std::size_t(d) * count; }
  double* lane(int d) { return data.data() + std::size_t(d) * count; }

  static SoaPoints from_rows(const double* rows, std::size_t count, int dim);
  static SoaPoints from_view(const PointsView& v) { return from_rows(v.rows, v.count, v.dim); }
};

struct DotArgMax {
  std::size_t index = std::size_t(-1);
  double value = 0.0;
};

// out[i] = <point i, w>, w has pts.dim entries.
void dot_all(const SoaPoints& pts, const double* w, double* out);

// Number of points with <point, w> >= threshold.
std::size_t count_dot_ge(const SoaPoints& pts, const double* w, double threshold);

// First index attaining the maximum dot product (smallest index on ties).
DotArgMax argmax_dot(const SoaPoints& pts, const double* w);

// Number of values[i] >= threshold over a plain array.
std::size_t count_ge(const double* values, std::size_t count, double threshold);

enum class Backend { kScalar, kAvx2 };

bool avx2_supported();
Backend active_backend();
void force_backend(Backend b);  // test hook; throws DomainError if unsupported

namespace detail {
void dot_all_scalar(const SoaPoints&, const double*, double*);
std::size_t count_dot_ge_scalar(const SoaPoints&, const double*, double);
DotArgMax argmax_dot_scalar(const SoaPoints&, const double*);
std::size_t count_ge_scalar(const double*, std::size_t, double);
#if defined(__x86_64__) || defined(_M_X64)
void dot_all_avx2(const SoaPoints&, const double*, double*);
std::size_t count_dot_ge_avx2(const SoaPoints&, const double*, double);
DotArgMax argmax_dot_avx2(const SoaPoints&, const double*);
std::size_t count_ge_avx2(const double*, std::size_t, double);
#endif
}  // namespace detail

}  // namespace spoly::kern
