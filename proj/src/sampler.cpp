#include "spoly/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spoly/sphere_hash.hpp"

namespace spoly {

namespace {

// Inverse CDF by forward scan. Long double keeps e^{-lambda} representable
// (and the running sum accurate) through lambda = 1000.
std::size_t poisson_inverse_cdf(Rng& rng, double lambda) {
  const long double u = (long double)(rng.uniform());
  long double term = expl(-(long double)lambda);
  long double cum = term;
  std::size_t k = 0;
  // Hard stop far beyond any double-precision quantile.
  const std::size_t cap = std::size_t(lambda + 12.0 * std::sqrt(lambda) + 64.0);
  while (u > cum && k < cap) {
    ++k;
    term *= (long double)lambda / (long double)k;
    cum += term;
  }
  return k;
}

// Transformed rejection with squeeze (PTRS); exact for lambda >= ~10, used
// above the inverse-CDF range.
std::size_t poisson_ptrs(Rng& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return std::size_t(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * loglam - lambda - std::lgamma(kf + 1.0)) {
      return std::size_t(kf);
    }
  }
}

}  // namespace

std::size_t draw_poisson(Rng& rng, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("draw_poisson: lambda must be positive");
  if (lambda <= 1000.0) return poisson_inverse_cdf(rng, lambda);
  return poisson_ptrs(rng, lambda);
}

PointCloud sample_poisson_sphere(int n, double m, std::uint64_t seed,
                                 std::optional<std::size_t> fixed_M) {
  if (n < 2 || n > kMaxDim) throw DomainError("sample_poisson_sphere: dimension outside [2,8]");
  if (!(m > 0.0)) throw DomainError("sample_poisson_sphere: intensity must be positive");

  Rng count_stream = Rng::stream(seed, 0);
  Rng point_stream = Rng::stream(seed, 1);
  const std::size_t M = fixed_M ? *fixed_M : draw_poisson(count_stream, m);

  std::vector<double> rows;
  rows.reserve(M * std::size_t(n));
  // Collisions are a probability-zero event; the offending draw is redone so
  // the finished cloud never carries near-duplicates.
  SphereHash dedup(n, 1e-7);
  for (std::size_t i = 0; i < M; ++i) {
    for (;;) {
      VecN x = random_unit(point_stream, n);
      if (dedup.any_within(x, 1e-10)) continue;
      dedup.insert(x, std::int32_t(i));
      for (int d = 0; d < n; ++d) rows.push_back(x[d]);
      break;
    }
  }
  return PointCloud(n, m, seed, std::move(rows));
}

std::vector<std::size_t> count_in_disjoint_caps(const PointCloud& A,
                                                const std::vector<SphericalCap>& caps) {
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (caps[i].center.n != A.dim) throw DomainError("count_in_disjoint_caps: dimension mismatch");
    for (std::size_t j = i + 1; j < caps.size(); ++j) {
      if (dist(caps[i].center, caps[j].center) <= caps[i].radius + caps[j].radius)
        throw OverlapError("count_in_disjoint_caps: caps overlap");
    }
  }
  std::vector<std::size_t> out;
  out.reserve(caps.size());
  for (const SphericalCap& cap : caps) out.push_back(occupancy(A, cap));
  return out;
}

double poisson_upper_tail(double lambda, double x) {
  if (!(lambda > 0.0) || !(x > 0.0)) throw DomainError("poisson_upper_tail: need lambda, x > 0");
  // P[X >= lambda + x] = P[X >= k0], k0 the smallest integer >= lambda + x.
  const double k0 = std::ceil(lambda + x);
  long double term = expl((long double)k0 * logl((long double)lambda) - (long double)lambda -
                          lgammal((long double)k0 + 1.0L));
  long double sum = term;
  double k = k0;
  for (int it = 0; it < 100000; ++it) {
    k += 1.0;
    term *= (long double)lambda / (long double)k;
    sum += term;
    if (term < 1e-15L * sum) break;
  }
  return double(sum);
}

double poisson_lower_tail(double lambda, double x) {
  if (!(lambda > 0.0) || !(x > 0.0)) throw DomainError("poisson_lower_tail: need lambda, x > 0");
  const double k0 = std::floor(lambda - x);
  if (k0 < 0.0) return 0.0;
  long double sum = 0.0L;
  long double term = expl((long double)k0 * logl((long double)lambda) - (long double)lambda -
                          lgammal((long double)k0 + 1.0L));
  // Downward recurrence from k0; terms decay by k/lambda < 1.
  double k = k0;
  sum = term;
  while (k >= 1.0) {
    term *= (long double)k / (long double)lambda;
    k -= 1.0;
    sum += term;
    if (term < 1e-15L * sum) break;
  }
  return double(sum);
}

std::pair<double, std::size_t> poisson_chi_square(const std::vector<std::size_t>& counts,
                                                  double lambda) {
  if (counts.size() < 8) throw InsufficientDataError("poisson_chi_square: too few counts");
  const double N = double(counts.size());
  // Expected mass per value k; pool the two tails so every bin has >= 5.
  std::size_t kmax = std::size_t(lambda + 8.0 * std::sqrt(lambda) + 8.0);
  std::vector<double> pmf(kmax + 1);
  long double term = expl(-(long double)lambda);
  for (std::size_t k = 0; k <= kmax; ++k) {
    pmf[k] = double(term);
    term *= (long double)lambda / (long double)(k + 1);
  }
  std::vector<std::pair<double, double>> bins;  // expected, observed
  std::vector<double> obs(kmax + 2, 0.0);
  for (std::size_t c : counts) obs[std::min(c, kmax + 1)] += 1.0;
  double exp_acc = 0.0, obs_acc = 0.0, pmf_seen = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    exp_acc += N * pmf[k];
    obs_acc += obs[k];
    pmf_seen += pmf[k];
    if (exp_acc >= 5.0) {
      bins.emplace_back(exp_acc, obs_acc);
      exp_acc = obs_acc = 0.0;
    }
  }
  const double rem_exp = exp_acc + N * std::max(0.0, 1.0 - pmf_seen);
  const double rem_obs = obs_acc + obs[kmax + 1];
  if (bins.empty())
    bins.emplace_back(rem_exp, rem_obs);
  else {
    bins.back().first += rem_exp;
    bins.back().second += rem_obs;
  }
  double stat = 0.0;
  for (auto& [e, o] : bins)
    if (e > 0) stat += (o - e) * (o - e) / e;
  return {stat, bins.size() > 1 ? bins.size() - 1 : 0};
}

void save_cloud_csv(const PointCloud& cloud, std::ostream& os) {
  char buf[64];
  os << "# spoly-cloud v1\n";
  std::snprintf(buf, sizeof buf, "%.17g", cloud.intensity);
  os << "# n=" << cloud.dim << " m=" << buf << " seed=" << cloud.seed
     << " M=" << cloud.count << "\n";
  for (std::size_t i = 0; i < cloud.count; ++i) {
    for (int d = 0; d < cloud.dim; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", cloud.rows[i * std::size_t(cloud.dim) + d]);
      os << (d ? "," : "") << buf;
    }
    os << "\n";
  }
}

PointCloud load_cloud_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# spoly-cloud v1", 0) != 0)
    throw IoError("load_cloud_csv: bad magic");
  if (!std::getline(is, line) || line.rfind("# n=", 0) != 0)
    throw IoError("load_cloud_csv: bad header");
  int n = 0;
  double m = 0.0;
  unsigned long long seed = 0;
  unsigned long long M = 0;
  if (std::sscanf(line.c_str(), "# n=%d m=%lg seed=%llu M=%llu", &n, &m, &seed, &M) != 4)
    throw IoError("load_cloud_csv: unparsable header");
  std::vector<double> rows;
  rows.reserve(std::size_t(M) * std::size_t(n));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) rows.push_back(std::strtod(cell.c_str(), nullptr));
  }
  if (rows.size() != std::size_t(M) * std::size_t(n))
    throw IoError("load_cloud_csv: row count mismatch");
  return PointCloud(n, m, seed, std::move(rows));
}

}  // namespace spoly
