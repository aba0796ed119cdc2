#include "spoly/sphere_geom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace spoly {

namespace {

// Continued fraction for the incomplete beta (modified Lentz). Converges in
// a handful of terms for the a, b used here; 1e-15 stop matches double.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double sin2_of_chord(double r) {
  // sin^2 of the polar angle whose chord is r; clamped against roundoff.
  double s2 = r * r * (1.0 - r * r / 4.0);
  return std::min(1.0, std::max(0.0, s2));
}

}  // namespace

double beta_inc(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_inc: a, b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("beta_inc: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // Use the fraction directly below the symmetry point, else the reflection.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double cap_measure(int n, double r) {
  if (n < 2 || n > kMaxDim) throw DomainError("cap_measure: dimension outside [2,8]");
  if (!(r >= 0.0 && r <= 2.0)) throw DomainError("cap_measure: radius outside [0,2]");
  if (r == 0.0) return 0.0;
  if (r == 2.0) return 1.0;
  const double h = 1.0 - r * r / 2.0;  // cosine of the polar angle
  const double half = 0.5 * beta_inc(0.5 * (n - 1), 0.5, sin2_of_chord(r));
  return h >= 0.0 ? half : 1.0 - half;
}

std::pair<double, double> cap_ratio_bounds(int n, double eps, double s) {
  if (!(eps >= 0.0 && eps <= 2.0)) throw DomainError("cap_ratio_bounds: eps outside [0,2]");
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("cap_ratio_bounds: s outside [0,1)");
  if ((1.0 + s) * eps > 2.0) throw DomainError("cap_ratio_bounds: (1+s) eps exceeds 2");
  const double lower = cap_measure(n, (1.0 + s) * eps) / std::pow(1.0 + s, n - 1);
  const double upper = cap_measure(n, (1.0 - s) * eps) / std::pow(1.0 - s, n - 1);
  return {lower, upper};
}

DensityParams solve_epsilon(double m, int n, double p) {
  if (!(m > 0.0)) throw DomainError("solve_epsilon: intensity must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("solve_epsilon: p outside (0,1)");
  if (n < 2 || n > kMaxDim) throw DomainError("solve_epsilon: dimension outside [2,8]");
  const double target = 3.0 * std::exp(1.0) * std::log(1.0 / p) / m;
  if (!(target < 1.0 / 12.0))
    throw InfeasibleTargetError("solve_epsilon: target measure not below 1/12");

  // cap_measure is strictly increasing in r on [0, sqrt(2)] and
  // cap_measure(n, sqrt(2)) = 1/2 > 1/12, so the root is bracketed.
  double lo = 0.0, hi = std::sqrt(2.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (cap_measure(n, mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tolerances().bisection * hi) break;
  }
  DensityParams out;
  out.m = m;
  out.n = n;
  out.p = p;
  out.target = target;
  out.epsilon = 0.5 * (lo + hi);
  return out;
}

std::int32_t SphericalNet::nearest(const VecN& x) const {
  if (points.empty()) return -1;
  return std::int32_t(kern::argmax_dot(soa, x.data()).index);
}

void SphericalNet::finalize() {
  std::vector<double> rows;
  rows.reserve(points.size() * std::size_t(dim));
  for (const VecN& p : points)
    for (int d = 0; d < dim; ++d) rows.push_back(p[d]);
  soa = kern::SoaPoints::from_rows(rows.data(), points.size(), dim);
}

namespace {

std::size_t candidate_budget(int n, double eps) {
  // Enough uniform candidates that every (eps/2)-cap is hit with margin:
  // coupon-collector count over ~1/sigma(eps/2) cells.
  const double sigma = cap_measure(n, std::min(2.0, 0.5 * eps));
  if (sigma >= 1.0) return 64;
  const double cells = 1.0 / sigma;
  const double want = 2.0 * cells * std::max(1.0, std::log(cells));
  return std::size_t(std::min(want, 2.5e7)) + 64;
}

void greedy_insert(SphericalNet& net, const VecN& cand) {
  if (net.hash.any_within(cand, net.separation)) return;
  net.hash.insert(cand, std::int32_t(net.points.size()));
  net.points.push_back(cand);
}

}  // namespace

SphericalNet greedy_separated_net(int n, double eps, std::uint64_t seed, const VecN* pinned) {
  if (n < 2 || n > kMaxDim) throw DomainError("greedy_separated_net: bad dimension");
  if (!(eps > 0.0 && eps <= 2.0)) throw DomainError("greedy_separated_net: eps outside (0,2]");
  SphericalNet net(n, eps);
  if (pinned) {
    require_unit(*pinned, "greedy_separated_net pinned point");
    greedy_insert(net, *pinned);
  }
  Rng rng = Rng::stream(seed, 0x6e657431);
  const std::size_t budget = candidate_budget(n, eps);
  for (std::size_t i = 0; i < budget; ++i) greedy_insert(net, random_unit(rng, n));
  net.finalize();
  return net;
}

VecN sample_in_cap(Rng& rng, const SphericalCap& cap) {
  const int n = cap.center.n;
  const double Q = cap.radius * cap.radius / 2.0;  // height of the cap
  if (Q <= 0.0) return cap.center;
  // Height q in [0, Q] has density (2q - q^2)^{(n-3)/2}. Propose from
  // q^{(n-3)/2} (inverse transform) and accept with (1 - q/2)^{(n-3)/2} <= 1.
  const double ex = 0.5 * (n - 3);
  double q;
  for (;;) {
    q = Q * std::pow(rng.uniform(), 1.0 / (1.0 + ex));
    if (ex == 0.0) break;
    // n >= 4: (1-q/2)^{ex} <= 1 directly. n = 2 (ex = -1/2): the factor is
    // >= 1 but bounded by its value at q = Q, so normalize by that bound.
    double accept = std::pow(1.0 - q / 2.0, ex);
    if (ex < 0.0) accept *= std::pow(1.0 - Q / 2.0, -ex);
    if (rng.uniform() <= accept) break;
  }
  // Around the pole e1: first coordinate 1-q, tangent part uniform direction.
  VecN x(n);
  x[0] = 1.0 - q;
  const double tangent = std::sqrt(std::max(0.0, 2.0 * q - q * q));
  if (n == 2) {
    x[1] = rng.uniform() < 0.5 ? -tangent : tangent;
  } else {
    VecN dir = random_unit(rng, n - 1);
    for (int d = 1; d < n; ++d) x[d] = tangent * dir[d - 1];
  }
  // Reflect e1 to the cap center (Householder), identity if already there.
  VecN u = sub(VecN::axis(n, 0), cap.center);
  const double un = norm(u);
  if (un > 1e-12) {
    u = scale(u, 1.0 / un);
    const double proj = 2.0 * dot(u, x);
    for (int d = 0; d < n; ++d) x[d] -= proj * u[d];
  }
  return normalized(x);
}

namespace {

std::mutex g_probe_mutex;
std::map<std::tuple<int, std::uint64_t, std::int64_t, std::int64_t>, SphericalNet> g_probe_cache;

std::uint64_t hash_center(const VecN& c) {
  std::uint64_t h = 0x2545F4914F6CDD1Dull;
  for (int d = 0; d < c.n; ++d) {
    std::uint64_t bits;
    double v = c[d];
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    h = Rng::mix64(h ^ bits);
  }
  return h;
}

}  // namespace

SphericalNet cap_probe_net(int n, const SphericalCap& cap, double eps) {
  if (!(eps > 0.0 && eps <= 2.0)) throw DomainError("cap_probe_net: eps outside (0,2]");
  const double sep = eps / 10.0;
  const auto key = std::make_tuple(n, hash_center(cap.center),
                                   std::int64_t(cap.radius * 1e12), std::int64_t(eps * 1e12));
  {
    std::lock_guard<std::mutex> lock(g_probe_mutex);
    auto it = g_probe_cache.find(key);
    if (it != g_probe_cache.end()) return it->second;
  }
  SphericalNet net(n, sep);
  // Deterministic: the stream key depends only on the inputs.
  Rng rng(Rng::mix64(std::get<1>(key) ^ Rng::mix64(std::uint64_t(n) * 0x9E37u) ^
                     Rng::mix64(std::uint64_t(std::get<3>(key)))));
  const double frac = std::max(cap_measure(n, std::min(2.0, cap.radius)), 1e-12);
  const double sigma = cap_measure(n, 0.5 * sep) / frac;  // per-candidate cell mass in the cap
  const double cells = 1.0 / std::max(sigma, 1e-12);
  const std::size_t budget =
      std::size_t(std::min(2.0 * cells * std::max(1.0, std::log(cells)), 2.5e7)) + 64;
  greedy_insert(net, cap.center);
  if (cap.radius >= 2.0) {
    for (std::size_t i = 0; i < budget; ++i) greedy_insert(net, random_unit(rng, n));
  } else {
    for (std::size_t i = 0; i < budget; ++i) greedy_insert(net, sample_in_cap(rng, cap));
  }
  net.finalize();
  std::lock_guard<std::mutex> lock(g_probe_mutex);
  auto [it, inserted] = g_probe_cache.emplace(key, net);
  (void)inserted;
  return it->second;
}

DensityCheck is_dense_for(const PointCloud& A, const SphericalCap& cap, double eps,
                          const SphericalNet* probe) {
  if (A.dim != cap.center.n) throw DomainError("is_dense_for: dimension mismatch");
  if (!(eps > 0.0 && eps <= 2.0)) throw DomainError("is_dense_for: eps outside (0,2]");
  SphericalNet local(A.dim, 1.0);
  if (!probe) {
    local = cap_probe_net(A.dim, cap, eps);
    probe = &local;
  }
  const double reach = eps - eps / 10.0;
  SphereHash cloud(A.dim, std::max(reach, 1e-6));
  cloud.insert_all(A.view());
  DensityCheck out;
  for (const VecN& q : probe->points) {
    if (!cloud.any_within(q, reach)) {
      out.dense = false;
      out.witness = q;
      return out;
    }
  }
  out.dense = true;
  return out;
}

std::size_t occupancy(const PointCloud& A, const SphericalCap& cap) {
  if (A.dim != cap.center.n) throw DomainError("occupancy: dimension mismatch");
  // |x - c| <= r on unit vectors is <x, c> >= 1 - r^2/2.
  const double threshold = 1.0 - cap.radius * cap.radius / 2.0;
  return kern::count_dot_ge(A.soa, cap.center.data(), threshold);
}

std::size_t occupancy_sup_proxy(const PointCloud& A, double radius, const SphericalNet& centers) {
  const double inflated = std::min(2.0, radius + centers.separation);
  const double threshold = 1.0 - inflated * inflated / 2.0;
  std::size_t best = 0;
  for (const VecN& c : centers.points)
    best = std::max(best, kern::count_dot_ge(A.soa, c.data(), threshold));
  return best;
}

std::vector<VecN> geodesic_subdivide(const VecN& w1, const VecN& w2, int k) {
  require_unit(w1, "geodesic_subdivide w1");
  require_unit(w2, "geodesic_subdivide w2");
  if (w1.n != w2.n) throw DomainError("geodesic_subdivide: dimension mismatch");
  if (k < 1) throw DomainError("geodesic_subdivide: k must be >= 1");
  const double c = dot(w1, w2);
  if (c <= -1.0 + 1e-12) throw AntipodalInputError("geodesic_subdivide: endpoints antipodal");
  const double theta = 2.0 * std::asin(std::min(1.0, 0.5 * dist(w1, w2)));
  std::vector<VecN> out;
  out.reserve(std::size_t(k) + 1);
  out.push_back(w1);
  for (int i = 1; i < k; ++i) {
    const double u = double(i) / double(k);
    VecN v(w1.n);
    if (theta < 1e-8) {
      v = lerp(w1, w2, u);
    } else {
      const double s = std::sin(theta);
      const double a = std::sin((1.0 - u) * theta) / s;
      const double b = std::sin(u * theta) / s;
      for (int d = 0; d < w1.n; ++d) v[d] = a * w1[d] + b * w2[d];
    }
    out.push_back(normalized(v));
  }
  out.push_back(w2);
  return out;
}

}  // namespace spoly
