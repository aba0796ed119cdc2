#include "spoly/kernels.hpp"

namespace spoly::kern {

namespace {

struct Table {
  void (*dot_all)(const SoaPoints&, const double*, double*);
  std::size_t (*count_dot_ge)(const SoaPoints&, const double*, double);
  DotArgMax (*argmax_dot)(const SoaPoints&, const double*);
  std::size_t (*count_ge)(const double*, std::size_t, double);
  Backend kind;
};

constexpr Table kScalarTable = {
    detail::dot_all_scalar, detail::count_dot_ge_scalar,
    detail::argmax_dot_scalar, detail::count_ge_scalar, Backend::kScalar};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2Table = {
    detail::dot_all_avx2, detail::count_dot_ge_avx2,
    detail::argmax_dot_avx2, detail::count_ge_avx2, Backend::kAvx2};
#endif

Table& table() {
  static Table t = avx2_supported()
#if defined(__x86_64__) || defined(_M_X64)
                       ? kAvx2Table
#else
                       ? kScalarTable
#endif
                       : kScalarTable;
  return t;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return table().kind; }

void force_backend(Backend b) {
  if (b == Backend::kScalar) {
    table() = kScalarTable;
    return;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_supported()) {
    table() = kAvx2Table;
    return;
  }
#endif
  throw DomainError("force_backend: avx2 not supported on this host");
}

void dot_all(const SoaPoints& pts, const double* w, double* out) {
  table().dot_all(pts, w, out);
}

std::size_t count_dot_ge(const SoaPoints& pts, const double* w, double threshold) {
  return table().count_dot_ge(pts, w, threshold);
}

DotArgMax argmax_dot(const SoaPoints& pts, const double* w) {
  return table().argmax_dot(pts, w);
}

std::size_t count_ge(const double* values, std::size_t count, double threshold) {
  return table().count_ge(values, count, threshold);
}

}  // namespace spoly::kern
