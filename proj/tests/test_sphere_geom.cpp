// Caps, nets, density predicates and arc subdivision: closed-form values,
// quadrature cross-checks and Monte-Carlo agreement at fixed seeds.

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "spoly/points.hpp"
#include "spoly/rng.hpp"
#include "spoly/sphere_geom.hpp"

using namespace spoly;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Composite Simpson for the regularized incomplete beta. Oracle only; the
// cases below keep a >= 1 and x < 1 so the integrand stays bounded.
double beta_inc_quadrature(double a, double b, double x) {
  const int intervals = 40000;  // even
  const double h = x / intervals;
  auto f = [&](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
  double acc = f(0.0) + f(x);
  for (int i = 1; i < intervals; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  const double integral = acc * h / 3.0;
  return integral * std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
}

PointCloud make_cloud(int n, const std::vector<VecN>& pts) {
  std::vector<double> rows;
  rows.reserve(pts.size() * std::size_t(n));
  for (const VecN& p : pts)
    for (int d = 0; d < n; ++d) rows.push_back(p[d]);
  return PointCloud(n, double(pts.size()), 0, std::move(rows));
}

std::vector<VecN> uniform_points(int n, std::size_t count, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0xD15C);
  std::vector<VecN> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_unit(rng, n));
  return out;
}

}  // namespace

TEST_CASE("cap measure closed forms on the circle and the 2-sphere") {
  const double grid[] = {0.1, 0.3, 0.5, 0.7, 1.0, 1.2, 1.41, 1.6, 1.9};
  for (double r : grid) {
    CHECK(cap_measure(3, r) == doctest::Approx(r * r / 4.0).epsilon(1e-12));
    CHECK(cap_measure(2, r) == doctest::Approx(2.0 * std::asin(r / 2.0) / kPi).epsilon(1e-12));
  }
  CHECK(cap_measure(3, 0.5) == doctest::Approx(0.0625).epsilon(1e-13));

  for (int n = 2; n <= 8; ++n) {
    CHECK(cap_measure(n, 0.0) == 0.0);
    CHECK(cap_measure(n, 2.0) == 1.0);
    CHECK(std::fabs(cap_measure(n, std::sqrt(2.0)) - 0.5) <= 1e-7);
    // A cap and the complement of the antipodal cap tile the sphere.
    for (double r : grid) {
      const double rc = std::sqrt(4.0 - r * r);
      CHECK(std::fabs(cap_measure(n, r) + cap_measure(n, rc) - 1.0) <= 1e-12);
    }
  }

  CHECK_THROWS_AS(cap_measure(1, 0.5), DomainError);
  CHECK_THROWS_AS(cap_measure(9, 0.5), DomainError);
  CHECK_THROWS_AS(cap_measure(3, -0.1), DomainError);
  CHECK_THROWS_AS(cap_measure(3, 2.1), DomainError);
}

TEST_CASE("cap measure is strictly increasing and matches Monte Carlo") {
  for (int n = 2; n <= 8; ++n) {
    double prev = 0.0;
    for (double r = 0.02; r <= 1.981; r += 0.02) {
      const double cur = cap_measure(n, r);
      CHECK(cur > prev);
      prev = cur;
    }
  }

  // x is in C(e1, r) iff <x, e1> >= 1 - r^2/2; count over uniform draws.
  const std::size_t N = 150000;
  std::uint64_t cfg = 0;
  for (int n = 2; n <= 8; ++n) {
    for (double r : {0.3, 0.9, 1.4}) {
      if (n >= 7 && r < 0.5) continue;  // expected hit count too small at this N
      Rng rng = Rng::stream(20260814, cfg++);
      const double threshold = 1.0 - r * r / 2.0;
      std::size_t hits = 0;
      for (std::size_t i = 0; i < N; ++i)
        if (random_unit(rng, n)[0] >= threshold) ++hits;
      const double sigma = cap_measure(n, r);
      const double se = std::sqrt(std::max(sigma * (1.0 - sigma), 1e-12) / double(N));
      CHECK(std::fabs(double(hits) / double(N) - sigma) <= 4.0 * se + 1e-9);
    }
  }
}

TEST_CASE("incomplete beta: closed forms, symmetry and quadrature") {
  // I_x(1/2,1/2) = (2/pi) asin(sqrt(x)); at x = 1/4 that is exactly 1/3.
  CHECK(beta_inc(0.5, 0.5, 0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  for (double x : {0.05, 0.2, 0.5, 0.8, 0.97})
    CHECK(beta_inc(0.5, 0.5, x) ==
          doctest::Approx(2.0 * std::asin(std::sqrt(x)) / kPi).epsilon(1e-11));

  CHECK(beta_inc(1.0, 1.0, 0.42) == doctest::Approx(0.42).epsilon(1e-13));
  // Polynomial case: I_{1/2}(2,3) = 12 int_0^{1/2} t(1-t)^2 dt = 11/16.
  CHECK(beta_inc(2.0, 3.0, 0.5) == doctest::Approx(0.6875).epsilon(1e-12));

  CHECK(beta_inc(2.0, 0.5, 0.7) == doctest::Approx(beta_inc_quadrature(2.0, 0.5, 0.7)).epsilon(1e-7));
  CHECK(beta_inc(1.5, 2.5, 0.35) ==
        doctest::Approx(beta_inc_quadrature(1.5, 2.5, 0.35)).epsilon(1e-7));
  CHECK(beta_inc(3.5, 0.5, 0.9) == doctest::Approx(beta_inc_quadrature(3.5, 0.5, 0.9)).epsilon(1e-7));

  for (auto [a, b] : {std::pair{0.5, 0.5}, {2.0, 0.5}, {3.5, 1.5}})
    for (double x : {0.1, 0.35, 0.62, 0.9})
      CHECK(std::fabs(beta_inc(a, b, x) + beta_inc(b, a, 1.0 - x) - 1.0) <= 1e-12);

  CHECK(beta_inc(0.5, 0.5, 0.0) == 0.0);
  CHECK(beta_inc(0.5, 0.5, 1.0) == 1.0);
  CHECK_THROWS_AS(beta_inc(0.0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(beta_inc(0.5, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(beta_inc(0.5, 0.5, 1.5), DomainError);
}

TEST_CASE("cap ratio estimates bracket the measure for n >= 3, reversed on the circle") {
  for (int n = 2; n <= 8; ++n) {
    auto [lo, up] = cap_ratio_bounds(n, 0.7, 0.0);
    CHECK(lo == cap_measure(n, 0.7));
    CHECK(up == cap_measure(n, 0.7));
  }

  for (int n : {3, 4, 5, 8}) {
    for (double eps : {0.1, 0.3, 0.6, 1.0, 1.3}) {
      for (double s : {0.1, 0.4, 0.9}) {
        if ((1.0 + s) * eps > 2.0) continue;
        auto [lo, up] = cap_ratio_bounds(n, eps, s);
        const double sigma = cap_measure(n, eps);
        CHECK(lo <= sigma + 1e-15);
        CHECK(sigma <= up + 1e-15);
      }
    }
  }

  // n = 2: the arc measure is convex in the radius, so the same two ratios
  // bound the measure from the opposite sides.
  for (double eps : {0.1, 0.3, 0.6, 1.0, 1.3}) {
    for (double s : {0.1, 0.4, 0.9}) {
      if ((1.0 + s) * eps > 2.0) continue;
      auto [lo, up] = cap_ratio_bounds(2, eps, s);
      const double sigma = cap_measure(2, eps);
      CHECK(up <= sigma + 1e-15);
      CHECK(sigma <= lo + 1e-15);
    }
  }

  // Spot check at n=3 via the closed form r^2/4.
  CHECK(cap_measure(3, 0.3) / (1.5 * 1.5) <= cap_measure(3, 0.2) + 1e-15);

  CHECK_THROWS_AS(cap_ratio_bounds(3, 1.9, 0.2), DomainError);
  CHECK_THROWS_AS(cap_ratio_bounds(3, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(cap_ratio_bounds(3, 2.5, 0.1), DomainError);
}

TEST_CASE("epsilon solve hits the target measure") {
  // On S^2 the measure is r^2/4, so the radius has a closed form.
  const DensityParams p3 = solve_epsilon(1e4, 3, 1e-3);
  const double target3 = 3.0 * std::exp(1.0) * std::log(1000.0) / 1e4;
  CHECK(p3.target == doctest::Approx(target3).epsilon(1e-15));
  CHECK(p3.epsilon == doctest::Approx(2.0 * std::sqrt(target3)).epsilon(1e-10));
  CHECK(p3.m == 1e4);
  CHECK(p3.n == 3);

  const struct {
    double m;
    int n;
    double p;
  } grid[] = {{1e4, 3, 1e-3}, {1e5, 4, 1e-4}, {2000, 2, 1e-2}, {4000, 5, 1e-2}, {1e6, 8, 1e-5}};
  for (const auto& g : grid) {
    const DensityParams dp = solve_epsilon(g.m, g.n, g.p);
    CHECK(cap_measure(g.n, dp.epsilon) == doctest::Approx(dp.target).epsilon(1e-10));
  }

  // The solved radius lands between the two explicit envelopes.
  const DensityParams p4 = solve_epsilon(1e5, 4, 1e-4);
  const double lnp = std::log(1e4);
  const double cube = std::pow(p4.epsilon, 3);
  CHECK(cube >= 12.0 * std::exp(1.0) * lnp / 1e5);
  CHECK(cube <= std::pow(std::sqrt(2.0), 3) * 18.0 * std::sqrt(4.0) * lnp / 1e5);

  CHECK_THROWS_AS(solve_epsilon(10, 3, 0.9), InfeasibleTargetError);
  CHECK_NOTHROW(solve_epsilon(100, 3, 0.5));
  CHECK_THROWS_AS(solve_epsilon(0.0, 3, 0.5), DomainError);
  CHECK_THROWS_AS(solve_epsilon(100, 3, 0.0), DomainError);
  CHECK_THROWS_AS(solve_epsilon(100, 3, 1.0), DomainError);
  CHECK_THROWS_AS(solve_epsilon(100, 9, 0.5), DomainError);
}

TEST_CASE("small-cap sandwich and large-cap constant bounds") {
  // Small radii: measure within [A/6, A/2] for
  // A = (eps sqrt(1-eps^2/4))^{n-1} / ((1-eps^2/2) sqrt(n)),
  // valid up to the radius where the defining halfspace height drops to
  // 2/sqrt(n) (which only leaves room when n >= 5).
  for (int n = 4; n <= 8; ++n) {
    const double inner = 2.0 * (1.0 - 2.0 / std::sqrt(double(n)));
    const double thr = std::sqrt(std::max(0.0, inner));
    for (int i = 1; i <= 100; ++i) {
      const double eps = thr * double(i) / 100.0;
      if (eps == 0.0) continue;
      const double body = eps * std::sqrt(1.0 - eps * eps / 4.0);
      const double A = std::pow(body, n - 1) / ((1.0 - eps * eps / 2.0) * std::sqrt(double(n)));
      const double sigma = cap_measure(n, eps);
      CHECK(sigma >= A / 6.0 - 1e-15);
      CHECK(sigma <= A / 2.0 + 1e-15);
    }
  }

  // Large radii: once the halfspace height drops below 1/sqrt(n) the measure
  // stays within [1/12, 1/2].
  for (int n = 2; n <= 8; ++n) {
    const double lo = std::sqrt(2.0 * (1.0 - 1.0 / std::sqrt(double(n))));
    const double hi = std::sqrt(2.0);
    for (int i = 0; i <= 40; ++i) {
      const double eps = lo + (hi - lo) * double(i) / 40.0;
      const double sigma = cap_measure(n, eps);
      CHECK(sigma >= 1.0 / 12.0);
      CHECK(sigma <= 0.5 + 1e-12);
    }
  }
}

TEST_CASE("separated nets: separation, pinning, coverage, annulus") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SphericalNet net = greedy_separated_net(2, 1.2, seed);
    CHECK(net.points.size() >= 3);
    CHECK(net.points.size() <= 5);
    for (std::size_t i = 0; i < net.points.size(); ++i)
      for (std::size_t j = i + 1; j < net.points.size(); ++j)
        CHECK(dist(net.points[i], net.points[j]) > 1.2);
  }

  CHECK(greedy_separated_net(3, 2.0, 1).points.size() == 1);

  const VecN e1 = VecN::axis(3, 0);
  SphericalNet pinned = greedy_separated_net(3, 0.7, 4, &e1);
  REQUIRE(!pinned.points.empty());
  for (int d = 0; d < 3; ++d) CHECK(pinned.points[0][d] == e1[d]);

  SphericalNet net3 = greedy_separated_net(3, 0.4, 7);
  for (std::size_t i = 0; i < net3.points.size(); ++i)
    for (std::size_t j = i + 1; j < net3.points.size(); ++j)
      CHECK(dist(net3.points[i], net3.points[j]) > 0.4);
  // Coverage: fresh uniform probes all land within the separation of the net,
  // and nearest() agrees with a brute-force inner-product argmax.
  Rng probe_rng = Rng::stream(99, 0);
  for (int t = 0; t < 200; ++t) {
    const VecN q = random_unit(probe_rng, 3);
    const std::int32_t idx = net3.nearest(q);
    REQUIRE(idx >= 0);
    double best = -2.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < net3.points.size(); ++i) {
      const double d = dot(q, net3.points[i]);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    CHECK(std::size_t(idx) == best_i);
    CHECK(dist(q, net3.points[std::size_t(idx)]) <= 0.4);
  }

  // Annulus cardinality: an eps-separated set packs at most 17^{n-1} points
  // into any [6 eps, 8 eps] shell.
  const struct {
    int n;
    double eps;
  } annulus_cfg[] = {{2, 0.05}, {3, 0.1}};
  for (const auto& cfg : annulus_cfg) {
    SphericalNet net = greedy_separated_net(cfg.n, cfg.eps, 3);
    const double cap17 = std::pow(17.0, cfg.n - 1);
    for (std::size_t i = 0; i < net.points.size(); ++i) {
      std::size_t shell = 0;
      for (std::size_t j = 0; j < net.points.size(); ++j) {
        if (i == j) continue;
        const double d = dist(net.points[i], net.points[j]);
        if (d >= 6.0 * cfg.eps && d <= 8.0 * cfg.eps) ++shell;
      }
      CHECK(double(shell) <= cap17);
    }
  }

  CHECK_THROWS_AS(greedy_separated_net(3, 0.0, 1), DomainError);
  CHECK_THROWS_AS(greedy_separated_net(3, 2.5, 1), DomainError);
  CHECK_THROWS_AS(greedy_separated_net(9, 0.5, 1), DomainError);
}

TEST_CASE("uniform cap samples stay in the cap and weight sub-caps correctly") {
  for (int n : {2, 3, 5, 8}) {
    VecN center(n);
    for (int d = 0; d < n; ++d) center[d] = 1.0;
    center = normalized(center);
    const SphericalCap cap(center, 0.8);
    Rng rng = Rng::stream(1234, std::uint64_t(n));
    for (int i = 0; i < 3000; ++i) {
      const VecN x = sample_in_cap(rng, cap);
      CHECK(is_unit(x));
      CHECK(dist(x, center) <= 0.8 + 1e-12);
    }
  }

  // Conditional mass of the half-radius sub-cap, against the measure ratio.
  const struct {
    int n;
    double r;
  } cfgs[] = {{2, 1.0}, {3, 0.9}, {5, 0.8}};
  for (const auto& cfg : cfgs) {
    VecN c(cfg.n);
    c[0] = 0.6;
    c[1] = -0.8;  // unit by construction, away from the sampler's pole
    const SphericalCap cap(c, cfg.r);
    const double expected = cap_measure(cfg.n, cfg.r / 2.0) / cap_measure(cfg.n, cfg.r);
    Rng rng = Rng::stream(777, std::uint64_t(cfg.n));
    const int N = 20000;
    int inside = 0;
    for (int i = 0; i < N; ++i)
      if (dist(sample_in_cap(rng, cap), c) <= cfg.r / 2.0) ++inside;
    const double frac = double(inside) / N;
    const double se = std::sqrt(expected * (1.0 - expected) / N);
    CHECK(std::fabs(frac - expected) <= 4.0 * se + 1e-9);
  }

  // On S^2 the sub-cap ratio is exactly 1/4 for any radius.
  CHECK(cap_measure(3, 0.45) / cap_measure(3, 0.9) == doctest::Approx(0.25).epsilon(1e-12));

  Rng rng = Rng::stream(1, 1);
  const SphericalCap degenerate(VecN::axis(4, 2), 0.0);
  const VecN x = sample_in_cap(rng, degenerate);
  for (int d = 0; d < 4; ++d) CHECK(x[d] == degenerate.center[d]);
}

TEST_CASE("cap probe nets are deterministic, in-cap and separated") {
  const SphericalCap cap(VecN::axis(2, 0), 1.0);
  const SphericalNet a = cap_probe_net(2, cap, 0.5);
  const SphericalNet b = cap_probe_net(2, cap, 0.5);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (int d = 0; d < 2; ++d) CHECK(a.points[i][d] == b.points[i][d]);

  CHECK(a.points.size() >= 25);
  for (int d = 0; d < 2; ++d) CHECK(a.points[0][d] == cap.center[d]);
  for (const VecN& p : a.points) CHECK(dist(p, cap.center) <= 1.0 + 1e-12);
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (std::size_t j = i + 1; j < a.points.size(); ++j)
      CHECK(dist(a.points[i], a.points[j]) > 0.05);
}

TEST_CASE("density checks certify probe coverage") {
  // A fine net is dense for the whole sphere at a much coarser scale.
  SphericalNet fine = greedy_separated_net(3, 0.15, 11);
  const PointCloud dense_cloud = make_cloud(3, fine.points);
  const DensityCheck dense = is_dense_for(dense_cloud, SphericalCap::full_sphere(3), 0.6);
  CHECK(dense.dense);
  CHECK(!dense.witness.has_value());

  // A single point cannot cover the sphere; the witness is a far probe.
  const PointCloud lonely = make_cloud(3, {VecN::axis(3, 0)});
  const DensityCheck sparse = is_dense_for(lonely, SphericalCap::full_sphere(3), 0.6);
  CHECK(!sparse.dense);
  REQUIRE(sparse.witness.has_value());
  CHECK(is_unit(*sparse.witness));
  CHECK(dist(*sparse.witness, VecN::axis(3, 0)) > 0.6 - 0.06 - 1e-12);

  const PointCloud empty(3, 0.0, 0, {});
  CHECK(!is_dense_for(empty, SphericalCap::full_sphere(3), 0.6).dense);

  // Cloud restricted near the cap still covers the cap.
  std::vector<VecN> local;
  for (const VecN& p : fine.points)
    if (dist(p, VecN::axis(3, 0)) <= 0.8) local.push_back(p);
  const PointCloud local_cloud = make_cloud(3, local);
  CHECK(is_dense_for(local_cloud, SphericalCap(VecN::axis(3, 0), 0.4), 0.3).dense);

  // Explicit probe override: the witness is exactly the uncovered probe.
  SphericalNet probes(3, 1.0);
  probes.points = {VecN::axis(3, 0), VecN::axis(3, 1)};
  probes.finalize();
  const DensityCheck forced = is_dense_for(lonely, SphericalCap::full_sphere(3), 0.5, &probes);
  CHECK(!forced.dense);
  REQUIRE(forced.witness.has_value());
  for (int d = 0; d < 3; ++d) CHECK((*forced.witness)[d] == VecN::axis(3, 1)[d]);

  CHECK_THROWS_AS(is_dense_for(dense_cloud, SphericalCap::full_sphere(4), 0.5), DomainError);
  CHECK_THROWS_AS(is_dense_for(dense_cloud, SphericalCap::full_sphere(3), 0.0), DomainError);
}

TEST_CASE("occupancy counts points in closed caps") {
  const VecN e1 = VecN::axis(3, 0);
  const PointCloud cloud =
      make_cloud(3, {e1, VecN::axis(3, 0, -1.0), VecN::axis(3, 1), normalized(VecN{1, 1, 0})});
  CHECK(occupancy(cloud, SphericalCap(e1, 0.1)) == 1);
  CHECK(occupancy(cloud, SphericalCap(e1, 1.0)) == 2);
  CHECK(occupancy(cloud, SphericalCap(e1, 1.5)) == 3);
  CHECK(occupancy(cloud, SphericalCap(e1, 2.0)) == 4);
  CHECK(occupancy(PointCloud(3, 0.0, 0, {}), SphericalCap(e1, 1.0)) == 0);
  CHECK_THROWS_AS(occupancy(cloud, SphericalCap::full_sphere(5)), DomainError);

  // Cross-check the kernel scan against a direct distance loop.
  const PointCloud rnd = make_cloud(4, uniform_points(4, 400, 5));
  Rng rng = Rng::stream(6, 0);
  for (int t = 0; t < 30; ++t) {
    const VecN c = random_unit(rng, 4);
    const double r = (t % 3 == 0) ? 0.2 : (t % 3 == 1) ? 0.7 : 1.3;
    std::size_t brute = 0;
    for (std::size_t i = 0; i < rnd.count; ++i)
      if (dot(rnd.point(i), c) >= 1.0 - r * r / 2.0) ++brute;
    CHECK(occupancy(rnd, SphericalCap(c, r)) == brute);
  }

  // The inflated-radius scan at net centers dominates any equal-radius cap.
  const PointCloud big = make_cloud(3, uniform_points(3, 2000, 9));
  SphericalNet centers = greedy_separated_net(3, 0.1, 2);
  const std::size_t proxy = occupancy_sup_proxy(big, 0.3, centers);
  Rng cap_rng = Rng::stream(31, 0);
  for (int t = 0; t < 50; ++t) {
    const VecN c = random_unit(cap_rng, 3);
    CHECK(occupancy(big, SphericalCap(c, 0.3)) <= proxy);
  }
  for (const VecN& c : centers.points)
    CHECK(occupancy(big, SphericalCap(c, 0.3)) <= proxy);
}

TEST_CASE("arc subdivision spacing and chord bounds") {
  const VecN e1 = VecN::axis(3, 0);
  const VecN e2 = VecN::axis(3, 1);

  const auto two = geodesic_subdivide(e1, e2, 1);
  REQUIRE(two.size() == 2);
  for (int d = 0; d < 3; ++d) {
    CHECK(two[0][d] == e1[d]);
    CHECK(two[1][d] == e2[d]);
  }

  const auto mid = geodesic_subdivide(e1, e2, 2);
  REQUIRE(mid.size() == 3);
  const VecN expected_mid = normalized(add(e1, e2));
  for (int d = 0; d < 3; ++d) CHECK(mid[1][d] == doctest::Approx(expected_mid[d]).epsilon(1e-14));

  // Equal spacing plus the chord sandwich ||w|| / k <= chord <= (pi/2) ||w|| / k
  // (each chord subtends theta/k and k sin(theta/2k) lies between sin(theta/2)
  // and (theta/2); the lower constant 1/4 quoted elsewhere is implied).
  Rng rng = Rng::stream(55, 0);
  for (int n : {2, 3, 5}) {
    for (int k : {2, 3, 7, 40}) {
      VecN w1 = random_unit(rng, n);
      VecN w2 = random_unit(rng, n);
      if (dot(w1, w2) <= -1.0 + 1e-9) continue;
      const auto pts = geodesic_subdivide(w1, w2, k);
      REQUIRE(pts.size() == std::size_t(k) + 1);
      const double w = dist(w1, w2);
      double first_chord = dist(pts[0], pts[1]);
      for (int i = 0; i < k; ++i) {
        const VecN& a = pts[std::size_t(i)];
        const VecN& b = pts[std::size_t(i) + 1];
        CHECK(is_unit(b));
        const double chord = dist(a, b);
        CHECK(chord == doctest::Approx(first_chord).epsilon(1e-11));
        CHECK(chord >= w / double(k) * (1.0 - 1e-9));
        CHECK(chord <= kPi / 2.0 * w / double(k) * (1.0 + 1e-9));
        CHECK(chord >= w / (4.0 * double(k)));
      }
    }
  }

  // Wide arc: the upper constant approaches pi/2, the naive 1/k spacing fails.
  const double phi = 2.8;
  const VecN far{std::cos(phi), std::sin(phi), 0.0};
  const auto wide = geodesic_subdivide(e1, far, 4);
  const double w = dist(e1, far);
  for (int i = 0; i < 4; ++i) {
    const double chord = dist(wide[std::size_t(i)], wide[std::size_t(i) + 1]);
    CHECK(chord >= w / 4.0);
    CHECK(chord <= kPi / 2.0 * w / 4.0 + 1e-12);
  }

  CHECK_THROWS_AS(geodesic_subdivide(e1, VecN::axis(3, 0, -1.0), 4), AntipodalInputError);
  CHECK_THROWS_AS(geodesic_subdivide(e1, e2, 0), DomainError);
  CHECK_THROWS_AS(geodesic_subdivide(VecN::axis(2, 0), e2, 2), DomainError);
  CHECK_THROWS_AS(geodesic_subdivide(VecN{0.5, 0.5, 0.5}, e2, 2), DomainError);
}
