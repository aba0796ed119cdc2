// Poisson sampling: moment and goodness-of-fit checks at fixed seeds, frozen
// tail references, cloud reproducibility and the CSV round trip.

#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "spoly/sampler.hpp"

using namespace spoly;

namespace {

struct MomentStats {
  double mean = 0.0;
  double var = 0.0;
};

MomentStats moments(const std::vector<std::size_t>& xs) {
  double s = 0.0;
  for (std::size_t x : xs) s += double(x);
  const double mean = s / double(xs.size());
  double v = 0.0;
  for (std::size_t x : xs) v += (double(x) - mean) * (double(x) - mean);
  return {mean, v / double(xs.size() - 1)};
}

}  // namespace

TEST_CASE("poisson draws reproduce moments and pass goodness of fit") {
  {
    Rng rng = Rng::stream(123, 0);
    std::vector<std::size_t> xs(200000);
    for (auto& x : xs) x = draw_poisson(rng, 7.3);
    const MomentStats st = moments(xs);
    CHECK(std::fabs(st.mean - 7.3) <= 0.030);           // 4 se ~ 0.024
    CHECK(std::fabs(st.var - 7.3) <= 0.12);             // 4 se ~ 0.096
    const auto [stat, dof] = poisson_chi_square(xs, 7.3);
    CHECK(dof >= 5);
    CHECK(stat <= double(dof) + 6.0 * std::sqrt(2.0 * double(dof)) + 5.0);
  }
  {
    Rng rng = Rng::stream(123, 1);
    std::vector<std::size_t> xs(200000);
    std::size_t zeros = 0;
    for (auto& x : xs) {
      x = draw_poisson(rng, 0.4);
      if (x == 0) ++zeros;
    }
    const MomentStats st = moments(xs);
    CHECK(std::fabs(st.mean - 0.4) <= 0.0075);
    const double p0 = std::exp(-0.4);
    const double se0 = std::sqrt(p0 * (1.0 - p0) / 200000.0);
    CHECK(std::fabs(double(zeros) / 200000.0 - p0) <= 4.0 * se0 + 1e-9);
  }
  {
    // Above the inverse-CDF range: the rejection sampler takes over.
    Rng rng = Rng::stream(123, 2);
    std::vector<std::size_t> xs(100000);
    for (auto& x : xs) x = draw_poisson(rng, 2000.0);
    const MomentStats st = moments(xs);
    CHECK(std::fabs(st.mean - 2000.0) <= 0.75);         // 4 se ~ 0.57
    CHECK(st.var / 2000.0 >= 0.95);
    CHECK(st.var / 2000.0 <= 1.05);
    const auto [stat, dof] = poisson_chi_square(xs, 2000.0);
    CHECK(dof >= 50);
    CHECK(stat <= double(dof) + 6.0 * std::sqrt(2.0 * double(dof)) + 5.0);
  }

  Rng rng = Rng::stream(123, 3);
  CHECK_THROWS_AS(draw_poisson(rng, 0.0), DomainError);
  CHECK_THROWS_AS(draw_poisson(rng, -2.0), DomainError);
  CHECK_THROWS_AS(poisson_chi_square({1, 2, 3}, 2.0), InsufficientDataError);
}

TEST_CASE("poisson tails match frozen references") {
  // References computed with 30-digit arithmetic.
  CHECK(poisson_upper_tail(1.0, 1.0) == doctest::Approx(0.26424111765711535681).epsilon(1e-12));
  CHECK(poisson_lower_tail(1.0, 1.0) == doctest::Approx(0.36787944117144232160).epsilon(1e-12));
  CHECK(poisson_upper_tail(10.0, 2.0) == doctest::Approx(0.30322385369689331181).epsilon(1e-12));
  CHECK(poisson_lower_tail(10.0, 7.0) == doctest::Approx(0.010336050675925717866).epsilon(1e-12));
  CHECK(poisson_upper_tail(100.0, 20.0) ==
        doctest::Approx(0.028230393964865692742).epsilon(1e-12));
  CHECK(poisson_lower_tail(100.0, 20.0) ==
        doctest::Approx(0.022649176642255610343).epsilon(1e-12));
  CHECK(poisson_upper_tail(1000.0, 50.0) ==
        doctest::Approx(0.059628328768477024935).epsilon(1e-12));

  CHECK(poisson_lower_tail(1.0, 2.0) == 0.0);  // no nonnegative value that low
  CHECK(poisson_upper_tail(10.0, 2.0) > poisson_upper_tail(10.0, 3.0));
  CHECK(poisson_lower_tail(10.0, 7.0) < poisson_lower_tail(10.0, 6.0));

  CHECK_THROWS_AS(poisson_upper_tail(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(poisson_upper_tail(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(poisson_lower_tail(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(poisson_lower_tail(1.0, 0.0), DomainError);
}

TEST_CASE("sphere clouds are reproducible and uniform") {
  const PointCloud a = sample_poisson_sphere(3, 100.0, 42);
  const PointCloud b = sample_poisson_sphere(3, 100.0, 42);
  REQUIRE(a.count == b.count);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i] == b.rows[i]);
  CHECK(a.count >= 60);
  CHECK(a.count <= 150);
  CHECK(a.intensity == 100.0);
  CHECK(a.seed == 42);

  const PointCloud c = sample_poisson_sphere(3, 100.0, 43);
  const bool same_size = c.count == a.count;
  bool same_first_row = true;
  for (int d = 0; d < 3; ++d) same_first_row = same_first_row && c.rows[d] == a.rows[d];
  CHECK(!(same_size && same_first_row));

  // A fixed batch size shares the coordinate stream, so prefixes agree.
  const PointCloud f17 = sample_poisson_sphere(3, 100.0, 42, 17);
  const PointCloud f40 = sample_poisson_sphere(3, 100.0, 42, 40);
  CHECK(f17.count == 17);
  CHECK(f40.count == 40);
  for (std::size_t i = 0; i < f17.rows.size(); ++i) CHECK(f17.rows[i] == f40.rows[i]);

  for (int n : {2, 5, 8}) {
    const PointCloud cl = sample_poisson_sphere(n, 100.0, 7, 500);
    for (std::size_t i = 0; i < cl.count; ++i)
      CHECK(std::fabs(norm(cl.point(i)) - 1.0) <= 1e-12);
  }

  // Uniformity: centered coordinates and the right cap frequency.
  const PointCloud u = sample_poisson_sphere(3, 100.0, 7, 60000);
  for (int d = 0; d < 3; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.count; ++i) s += u.rows[i * 3 + std::size_t(d)];
    CHECK(std::fabs(s / double(u.count)) <= 4.0 * std::sqrt(1.0 / (3.0 * 60000.0)) + 1e-9);
  }
  std::size_t in_cap = 0;
  const double threshold = 1.0 - 0.9 * 0.9 / 2.0;
  for (std::size_t i = 0; i < u.count; ++i)
    if (u.rows[i * 3] >= threshold) ++in_cap;
  const double sigma = cap_measure(3, 0.9);
  const double se = std::sqrt(sigma * (1.0 - sigma) / 60000.0);
  CHECK(std::fabs(double(in_cap) / 60000.0 - sigma) <= 4.0 * se + 1e-9);

  CHECK_THROWS_AS(sample_poisson_sphere(1, 100.0, 1), DomainError);
  CHECK_THROWS_AS(sample_poisson_sphere(9, 100.0, 1), DomainError);
  CHECK_THROWS_AS(sample_poisson_sphere(3, 0.0, 1), DomainError);
}

TEST_CASE("cap counts split a cloud between disjoint caps") {
  const VecN e1 = VecN::axis(3, 0);
  const VecN me1 = VecN::axis(3, 0, -1.0);
  std::vector<double> rows = {1, 0, 0, -1, 0, 0, 0, 1, 0,
                              1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0};
  const PointCloud cloud(3, 4.0, 0, std::move(rows));
  const auto counts =
      count_in_disjoint_caps(cloud, {SphericalCap(e1, 0.5), SphericalCap(me1, 0.5)});
  REQUIRE(counts.size() == 2);
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 1);

  CHECK_THROWS_AS(
      count_in_disjoint_caps(cloud, {SphericalCap(e1, 1.2), SphericalCap(VecN::axis(3, 1), 1.2)}),
      OverlapError);
  CHECK_THROWS_AS(count_in_disjoint_caps(cloud, {SphericalCap::full_sphere(4)}), DomainError);

  // Counts in disjoint caps of a Poisson cloud are independent Poisson
  // variates with rate m * sigma(cap).
  const double m = 3000.0;
  const double rate = m * cap_measure(3, 0.4);
  std::vector<std::size_t> c1, c2, pooled;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const PointCloud A = sample_poisson_sphere(3, m, 9000 + seed);
    const auto cc = count_in_disjoint_caps(A, {SphericalCap(e1, 0.4), SphericalCap(me1, 0.4)});
    c1.push_back(cc[0]);
    c2.push_back(cc[1]);
    pooled.push_back(cc[0]);
    pooled.push_back(cc[1]);
  }
  const MomentStats s1 = moments(c1);
  const MomentStats s2 = moments(c2);
  const double band = 4.0 * std::sqrt(rate / 200.0) + 0.5;
  CHECK(std::fabs(s1.mean - rate) <= band);
  CHECK(std::fabs(s2.mean - rate) <= band);

  double cov = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i)
    cov += (double(c1[i]) - s1.mean) * (double(c2[i]) - s2.mean);
  cov /= double(c1.size() - 1);
  CHECK(std::fabs(cov / std::sqrt(s1.var * s2.var)) <= 0.3);

  const auto [stat, dof] = poisson_chi_square(pooled, rate);
  CHECK(dof >= 10);
  CHECK(stat <= double(dof) + 6.0 * std::sqrt(2.0 * double(dof)) + 5.0);
}

TEST_CASE("cloud csv round-trips bit for bit") {
  const PointCloud cloud = sample_poisson_sphere(4, 25.5, 77, 40);
  std::stringstream ss;
  save_cloud_csv(cloud, ss);
  const PointCloud back = load_cloud_csv(ss);
  CHECK(back.dim == cloud.dim);
  CHECK(back.intensity == cloud.intensity);
  CHECK(back.seed == cloud.seed);
  REQUIRE(back.count == cloud.count);
  for (std::size_t i = 0; i < cloud.rows.size(); ++i) CHECK(back.rows[i] == cloud.rows[i]);

  const PointCloud empty(5, 3.5, 9, {});
  std::stringstream se;
  save_cloud_csv(empty, se);
  const PointCloud eback = load_cloud_csv(se);
  CHECK(eback.dim == 5);
  CHECK(eback.count == 0);

  std::stringstream bad1("not a cloud\n");
  CHECK_THROWS_AS(load_cloud_csv(bad1), IoError);
  std::stringstream bad2("# spoly-cloud v1\n# wrong header\n");
  CHECK_THROWS_AS(load_cloud_csv(bad2), IoError);
  std::stringstream bad3("# spoly-cloud v1\n# n=3 m=10 seed=1 M=3\n1,0,0\n");
  CHECK_THROWS_AS(load_cloud_csv(bad3), IoError);
}
