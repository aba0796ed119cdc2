#include "spoly/linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

namespace spoly {
namespace {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// Exact rational value of a double via its mantissa/exponent split.
Rat exact_rational(double x) {
  if (x == 0.0) return Rat(0);
  int exp = 0;
  double fr = std::frexp(x, &exp);  // x = fr * 2^exp with 0.5 <= |fr| < 1
  auto mant = std::int64_t(std::ldexp(fr, 62));  // 53 mantissa bits: exact
  int shift = exp - 62;
  Int num(mant);
  if (shift >= 0) {
    num <<= shift;
    return Rat(num);
  }
  Int den(1);
  den <<= -shift;
  return Rat(num, den);
}

struct LuFactors {
  int order = 0;
  std::vector<long double> lu;   // packed L\U, row major
  std::vector<int> perm;         // row permutation applied to inputs
  int sign = 0;                  // 0 marks a collapsed pivot
  long double scale = 0.0L;      // max |entry| of the original matrix
};

LuFactors factorize(const SquareMatrix& m) {
  const int n = m.order;
  LuFactors f;
  f.order = n;
  f.lu.assign(std::size_t(n) * std::size_t(n), 0.0L);
  f.perm.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) f.perm[std::size_t(i)] = i;
  for (std::size_t i = 0; i < m.a.size(); ++i) {
    f.lu[i] = m.a[i];
    long double mag = std::fabs(m.a[i]);
    if (mag > f.scale) f.scale = mag;
  }
  f.sign = 1;
  auto at = [&](int r, int c) -> long double& { return f.lu[std::size_t(r) * std::size_t(n) + std::size_t(c)]; };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    long double best = std::fabs(at(col, col));
    for (int r = col + 1; r < n; ++r) {
      long double mag = std::fabs(at(r, col));
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    // Scale-relative singularity band; long double keeps ~1e-19 headroom.
    if (!(best > f.scale * 1e-18L)) {
      f.sign = 0;
      return f;
    }
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(at(piv, c), at(col, c));
      std::swap(f.perm[std::size_t(piv)], f.perm[std::size_t(col)]);
      f.sign = -f.sign;
    }
    const long double inv = 1.0L / at(col, col);
    for (int r = col + 1; r < n; ++r) {
      long double factor = at(r, col) * inv;
      at(r, col) = factor;
      if (factor == 0.0L) continue;
      for (int c = col + 1; c < n; ++c) at(r, c) -= factor * at(col, c);
    }
  }
  return f;
}

std::vector<long double> lu_solve(const LuFactors& f, std::span<const long double> rhs) {
  const int n = f.order;
  std::vector<long double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[std::size_t(i)] = rhs[std::size_t(f.perm[std::size_t(i)])];
  auto at = [&](int r, int c) { return f.lu[std::size_t(r) * std::size_t(n) + std::size_t(c)]; };
  for (int r = 1; r < n; ++r) {
    long double s = x[std::size_t(r)];
    for (int c = 0; c < r; ++c) s -= at(r, c) * x[std::size_t(c)];
    x[std::size_t(r)] = s;
  }
  for (int r = n - 1; r >= 0; --r) {
    long double s = x[std::size_t(r)];
    for (int c = r + 1; c < n; ++c) s -= at(r, c) * x[std::size_t(c)];
    x[std::size_t(r)] = s / at(r, r);
  }
  return x;
}

long double hadamard_row_bound(const SquareMatrix& m) {
  const int n = m.order;
  long double bound = 1.0L;
  for (int r = 0; r < n; ++r) {
    long double s = 0.0L;
    for (int c = 0; c < n; ++c) {
      long double v = m.at(r, c);
      s += v * v;
    }
    bound *= std::sqrt(s);
  }
  return bound;
}

int exact_sign(const SquareMatrix& m) {
  const int n = m.order;
  std::vector<Rat> a(std::size_t(n) * std::size_t(n));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = exact_rational(m.a[i]);
  auto at = [&](int r, int c) -> Rat& { return a[std::size_t(r) * std::size_t(n) + std::size_t(c)]; };
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (at(r, col) != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(at(piv, c), at(col, c));
      sign = -sign;
    }
    for (int r = col + 1; r < n; ++r) {
      if (at(r, col) == 0) continue;
      Rat factor = at(r, col) / at(col, col);
      at(r, col) = 0;
      for (int c = col + 1; c < n; ++c) at(r, c) -= factor * at(col, c);
    }
  }
  for (int i = 0; i < n; ++i) sign *= at(i, i) < 0 ? -1 : 1;
  return sign;
}

void require_square(const SquareMatrix& m) {
  if (m.order < 1) throw DomainError("linalg: matrix order must be positive");
  if (m.a.size() != std::size_t(m.order) * std::size_t(m.order))
    throw DomainError("linalg: storage does not match order");
}

long double lu_determinant(const LuFactors& f) {
  if (f.sign == 0) return 0.0L;
  long double det = f.sign;
  for (int i = 0; i < f.order; ++i) det *= f.lu[std::size_t(i) * std::size_t(f.order) + std::size_t(i)];
  return det;
}

}  // namespace

SquareMatrix SquareMatrix::identity(int ord) {
  SquareMatrix m(ord);
  for (int i = 0; i < ord; ++i) m.at(i, i) = 1.0;
  return m;
}

std::vector<double> solve_linear(const SquareMatrix& m, std::span<const double> rhs) {
  require_square(m);
  if (rhs.size() != std::size_t(m.order)) throw DomainError("solve_linear: rhs size mismatch");
  LuFactors f = factorize(m);
  if (f.sign == 0) throw DegeneracyError("solve_linear: singular matrix");
  const int n = m.order;
  std::vector<long double> b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) b[std::size_t(i)] = rhs[std::size_t(i)];
  std::vector<long double> x = lu_solve(f, b);
  // One refinement pass: residual in long double against the stored doubles.
  std::vector<long double> resid(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    long double s = b[std::size_t(r)];
    for (int c = 0; c < n; ++c) s -= (long double)m.at(r, c) * x[std::size_t(c)];
    resid[std::size_t(r)] = s;
  }
  std::vector<long double> delta = lu_solve(f, resid);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[std::size_t(i)] = double(x[std::size_t(i)] + delta[std::size_t(i)]);
  return out;
}

double determinant(const SquareMatrix& m) {
  require_square(m);
  return double(lu_determinant(factorize(m)));
}

bool determinant_needs_exact(const SquareMatrix& m) {
  require_square(m);
  long double det = lu_determinant(factorize(m));
  return std::fabs(det) <= (long double)tolerances().predicate * hadamard_row_bound(m);
}

int determinant_sign(const SquareMatrix& m) {
  require_square(m);
  LuFactors f = factorize(m);
  long double det = lu_determinant(f);
  if (std::fabs(det) > (long double)tolerances().predicate * hadamard_row_bound(m))
    return det > 0.0L ? 1 : -1;
  return exact_sign(m);
}

}  // namespace spoly
