#include "doctest.h"

#include <vector>

#include "spoly/kernels.hpp"
#include "spoly/rng.hpp"

using namespace spoly;

namespace {

kern::SoaPoints random_soa(Rng& rng, std::size_t count, int dim) {
  std::vector<double> rows(count * std::size_t(dim));
  for (double& x : rows) x = rng.gaussian();
  return kern::SoaPoints::from_rows(rows.data(), count, dim);
}

}  // namespace

TEST_CASE("soa layout round-trips row-major input") {
  std::vector<double> rows = {1, 2, 3, 4, 5, 6};
  auto soa = kern::SoaPoints::from_rows(rows.data(), 2, 3);
  CHECK(soa.lane(0)[0] == 1);
  CHECK(soa.lane(0)[1] == 4);
  CHECK(soa.lane(2)[1] == 6);
}

TEST_CASE("scalar kernels compute dots, counts and argmax") {
  std::vector<double> rows = {1, 0, 0, 1, -1, 0};
  auto soa = kern::SoaPoints::from_rows(rows.data(), 3, 2);
  double w[2] = {1.0, 0.5};
  double out[3];
  kern::detail::dot_all_scalar(soa, w, out);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(0.5));
  CHECK(out[2] == doctest::Approx(-1.0));
  CHECK(kern::detail::count_dot_ge_scalar(soa, w, 0.5) == 2);
  auto am = kern::detail::argmax_dot_scalar(soa, w);
  CHECK(am.index == 0);
  CHECK(am.value == doctest::Approx(1.0));
}

TEST_CASE("argmax keeps the smallest index on exact ties") {
  std::vector<double> rows = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.25, 0.125};
  auto soa = kern::SoaPoints::from_rows(rows.data(), 5, 2);
  double w[2] = {1.0, 0.0};
  auto am = kern::argmax_dot(soa, w);
  CHECK(am.index == 0);
}

TEST_CASE("avx2 backend is bit-identical to scalar") {
  if (!kern::avx2_supported()) {
    MESSAGE("avx2 unavailable, skipping");
    return;
  }
  Rng rng(12345);
  for (int dim = 2; dim <= 8; ++dim) {
    for (std::size_t count : {std::size_t(1), std::size_t(3), std::size_t(4),
                              std::size_t(63), std::size_t(64), std::size_t(1000)}) {
      auto soa = random_soa(rng, count, dim);
      double w[kMaxDim];
      for (int d = 0; d < dim; ++d) w[d] = rng.gaussian();

      std::vector<double> a(count), b(count);
      kern::detail::dot_all_scalar(soa, w, a.data());
      kern::detail::dot_all_avx2(soa, w, b.data());
      for (std::size_t i = 0; i < count; ++i) CHECK(a[i] == b[i]);

      const double thr = a[count / 2];
      CHECK(kern::detail::count_dot_ge_scalar(soa, w, thr) ==
            kern::detail::count_dot_ge_avx2(soa, w, thr));

      auto s = kern::detail::argmax_dot_scalar(soa, w);
      auto v = kern::detail::argmax_dot_avx2(soa, w);
      CHECK(s.index == v.index);
      CHECK(s.value == v.value);

      CHECK(kern::detail::count_ge_scalar(a.data(), count, thr) ==
            kern::detail::count_ge_avx2(a.data(), count, thr));
    }
  }
}

TEST_CASE("avx2 argmax tie-breaking matches scalar with duplicated maxima") {
  if (!kern::avx2_supported()) return;
  // Nine identical points: every lane ties; merge must return index 0.
  std::vector<double> rows(9 * 3, 0.7);
  auto soa = kern::SoaPoints::from_rows(rows.data(), 9, 3);
  double w[3] = {1, 2, 3};
  auto s = kern::detail::argmax_dot_scalar(soa, w);
  auto v = kern::detail::argmax_dot_avx2(soa, w);
  CHECK(s.index == 0);
  CHECK(v.index == 0);
  CHECK(s.value == v.value);
}

TEST_CASE("backend dispatch can be forced to scalar and back") {
  auto original = kern::active_backend();
  kern::force_backend(kern::Backend::kScalar);
  CHECK(kern::active_backend() == kern::Backend::kScalar);
  if (kern::avx2_supported()) {
    kern::force_backend(kern::Backend::kAvx2);
    CHECK(kern::active_backend() == kern::Backend::kAvx2);
  }
  kern::force_backend(original);
}
