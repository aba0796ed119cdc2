#pragma once
// Poisson point processes on the sphere and exact Poisson tail sums. The
// batch size M ~ Pois(m) comes from one substream, coordinates from another,
// so a cloud is reproducible from (n, m, seed) alone.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spoly/points.hpp"
#include "spoly/rng.hpp"
#include "spoly/sphere_geom.hpp"

namespace spoly {

// fixed_M is a debug override of the Poisson draw (coordinates unchanged).
PointCloud sample_poisson_sphere(int n, double m, std::uint64_t seed,
                                 std::optional<std::size_t> fixed_M = std::nullopt);

// One Poisson(lambda) variate: inverse-CDF scan for lambda <= 1000, else
// transformed rejection.
std::size_t draw_poisson(Rng& rng, double lambda);

// Counts per cap; caps must be pairwise disjoint (center distance greater
// than the radius sum), otherwise OverlapError.
std::vector<std::size_t> count_in_disjoint_caps(const PointCloud& A,
                                                const std::vector<SphericalCap>& caps);

// Exact tails by pmf summation (1e-15 relative truncation):
// upper = P[X >= lambda + x], lower = P[X <= lambda - x].
double poisson_upper_tail(double lambda, double x);
double poisson_lower_tail(double lambda, double x);

// Chi-square statistic of observed counts against Pois(lambda), pooling
// bins until each expected count is at least 5. Returns {stat, dof}.
std::pair<double, std::size_t> poisson_chi_square(const std::vector<std::size_t>& counts,
                                                  double lambda);

// Versioned CSV: header comment with (n, m, seed, M), then M rows at full
// precision. load round-trips bit-for-bit.
void save_cloud_csv(const PointCloud& cloud, std::ostream& os);
PointCloud load_cloud_csv(std::istream& is);

}  // namespace spoly
