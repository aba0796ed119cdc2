#pragma once
// Shared scaffolding: fixed-capacity small vectors, global tolerances and the
// error vocabulary used across the library.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spoly {

inline constexpr int kMaxDim = 8;

// Numeric tolerances shared by every module. Mutable on purpose so a harness
// can tighten or relax the predicate band without recompiling; everything
// reads through tolerances().
struct Tolerances {
  double unit_norm = 1e-12;  // accepted deviation of |x| from 1
  double bisection = 1e-12;  // relative target for scalar root solves
  double predicate = 1e-9;   // band below which geometric signs go exact
};

Tolerances& tolerances();

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

#define SPOLY_DEFINE_ERROR(NAME)                \
  struct NAME : std::runtime_error {            \
    using std::runtime_error::runtime_error;    \
  }

SPOLY_DEFINE_ERROR(InfeasibleTargetError);   // solve target outside valid range
SPOLY_DEFINE_ERROR(OverlapError);            // caps required to be disjoint overlap
SPOLY_DEFINE_ERROR(DegeneracyError);         // exact predicate returned zero
SPOLY_DEFINE_ERROR(PolarityError);           // origin not strictly interior
SPOLY_DEFINE_ERROR(DisconnectedGraphError);
SPOLY_DEFINE_ERROR(PreconditionError);
SPOLY_DEFINE_ERROR(AdjacencyViolationError);
SPOLY_DEFINE_ERROR(UnreachableVertexError);
SPOLY_DEFINE_ERROR(AntipodalInputError);
SPOLY_DEFINE_ERROR(NonEdgeError);
SPOLY_DEFINE_ERROR(ResolutionError);         // parameter grid too coarse even after refinement
SPOLY_DEFINE_ERROR(NoAntipodeError);
SPOLY_DEFINE_ERROR(InsufficientDataError);
SPOLY_DEFINE_ERROR(IoError);

#undef SPOLY_DEFINE_ERROR

// Point or direction in R^n, n <= kMaxDim. Value type, no allocation.
struct VecN {
  std::array<double, kMaxDim> c{};
  int n = 0;

  VecN() = default;
  explicit VecN(int dim) : n(dim) {}
  VecN(std::initializer_list<double> v) : n(int(v.size())) {
    int i = 0;
    for (double x : v) c[i++] = x;
  }

  double& operator[](int i) { return c[std::size_t(i)]; }
  double operator[](int i) const { return c[std::size_t(i)]; }
  const double* data() const { return c.data(); }
  double* data() { return c.data(); }

  static VecN from(std::span<const double> s) {
    VecN v(int(s.size()));
    for (int i = 0; i < v.n; ++i) v.c[std::size_t(i)] = s[std::size_t(i)];
    return v;
  }
  static VecN axis(int dim, int k, double sign = 1.0) {
    VecN v(dim);
    v[k] = sign;
    return v;
  }
};

inline double dot(const VecN& a, const VecN& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

inline double norm2(const VecN& a) { return dot(a, a); }
inline double norm(const VecN& a) { return std::sqrt(norm2(a)); }

inline VecN add(const VecN& a, const VecN& b) {
  VecN r(a.n);
  for (int i = 0; i < a.n; ++i) r[i] = a[i] + b[i];
  return r;
}

inline VecN sub(const VecN& a, const VecN& b) {
  VecN r(a.n);
  for (int i = 0; i < a.n; ++i) r[i] = a[i] - b[i];
  return r;
}

inline VecN scale(const VecN& a, double t) {
  VecN r(a.n);
  for (int i = 0; i < a.n; ++i) r[i] = a[i] * t;
  return r;
}

inline VecN lerp(const VecN& a, const VecN& b, double t) {
  VecN r(a.n);
  for (int i = 0; i < a.n; ++i) r[i] = (1.0 - t) * a[i] + t * b[i];
  return r;
}

inline double dist2(const VecN& a, const VecN& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) {
    double d = a[i] - b[i];
    s = std::fma(d, d, s);
  }
  return s;
}

inline double dist(const VecN& a, const VecN& b) { return std::sqrt(dist2(a, b)); }

inline VecN normalized(const VecN& a) {
  double nr = norm(a);
  if (!(nr > 1e-300)) throw DomainError("normalized: zero vector");
  return scale(a, 1.0 / nr);
}

inline bool is_unit(const VecN& a) {
  return std::fabs(norm(a) - 1.0) <= tolerances().unit_norm;
}

inline void require_unit(const VecN& a, const char* what) {
  if (a.n < 2 || a.n > kMaxDim) throw DomainError(std::string(what) + ": bad dimension");
  if (!is_unit(a)) throw DomainError(std::string(what) + ": not unit norm");
}

// Borrowed view over row-major points (count rows of dim doubles).
struct PointsView {
  const double* rows = nullptr;
  std::size_t count = 0;
  int dim = 0;

  std::span<const double> row(std::size_t i) const {
    return {rows + i * std::size_t(dim), std::size_t(dim)};
  }
  VecN vec(std::size_t i) const { return VecN::from(row(i)); }
};

}  // namespace spoly
