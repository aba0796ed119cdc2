#pragma once
// Spherical caps, their normalized surface measure, density/occupancy
// predicates and separated nets. Radii are chordal throughout: C(v, r) is the
// set of unit vectors within Euclidean distance r of the unit vector v, so
// r ranges over [0, 2] and r = 2 is the whole sphere.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "spoly/common.hpp"
#include "spoly/kernels.hpp"
#include "spoly/points.hpp"
#include "spoly/rng.hpp"
#include "spoly/sphere_hash.hpp"

namespace spoly {

struct SphericalCap {
  VecN center;
  double radius = 0.0;

  SphericalCap(VecN c, double r) : center(c), radius(r) {
    require_unit(center, "SphericalCap center");
    if (!(r >= 0.0 && r <= 2.0)) throw DomainError("SphericalCap: radius outside [0,2]");
  }
  static SphericalCap full_sphere(int dim) {
    return SphericalCap(VecN::axis(dim, 0), 2.0);
  }
};

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation. Exposed because tests pin it against quadrature.
double beta_inc(double a, double b, double x);

// Normalized surface measure of a chordal-radius-r cap on S^{n-1}.
double cap_measure(int n, double r);

// Ratio estimates for cap_measure(n, eps) obtained by evaluating at the
// inflated/deflated radii (1 +- s) eps and dividing by (1 +- s)^{n-1}.
// Requires (1+s) eps <= 2 and s < 1 (and eps <= 2); returns {first, second}
// = {sigma((1+s)eps)/(1+s)^{n-1}, sigma((1-s)eps)/(1-s)^{n-1}}. For n >= 3
// these bracket sigma(eps) from below/above (the measure grows slower than
// the (n-1)-th power of the radius); in n = 2 the arc measure is convex in
// the radius and the same two ratios bound it from the opposite sides.
std::pair<double, double> cap_ratio_bounds(int n, double eps, double s);

struct DensityParams {
  double m = 0.0;      // intensity
  int n = 0;           // ambient dimension
  double p = 0.0;      // failure probability budget
  double target = 0.0; // cap measure the radius solves for
  double epsilon = 0.0;
};

// Radius epsilon with cap_measure(n, epsilon) = 3 e ln(1/p) / m, by bisection.
// Throws InfeasibleTargetError when the target is not below 1/12.
DensityParams solve_epsilon(double m, int n, double p);

// Maximal (pairwise distance > separation) subset of a random candidate
// stream; maximality makes it separation-dense relative to that stream.
struct SphericalNet {
  int dim = 0;
  double separation = 0.0;
  std::vector<VecN> points;
  kern::SoaPoints soa;        // for nearest queries by objective scan
  SphereHash hash;            // cell = separation, for radius queries

  SphericalNet(int n, double sep) : dim(n), separation(sep), hash(n, sep) {}

  std::int32_t nearest(const VecN& x) const;  // argmax of <x, .>
  void finalize();                            // builds soa after inserts
};

// Greedy net over ~(2/sigma(eps/2)) ln(1/sigma(eps/2)) uniform candidates
// from the given seed. An optional pinned point is inserted first.
SphericalNet greedy_separated_net(int n, double eps, std::uint64_t seed,
                                  const VecN* pinned = nullptr);

// Deterministic probe set for a cap: a maximal (eps/10)-separated subset of
// uniform in-cap candidates drawn from a seed derived from the inputs only.
SphericalNet cap_probe_net(int n, const SphericalCap& cap, double eps);

// A is eps-dense for the cap when every probe point has a cloud point within
// eps - eps/10. One-sided: a true answer certifies density at probe
// resolution; a false answer reports the witness probe.
struct DensityCheck {
  bool dense = false;
  std::optional<VecN> witness;  // probe with no cloud point in reach
};
DensityCheck is_dense_for(const PointCloud& A, const SphericalCap& cap, double eps,
                          const SphericalNet* probe = nullptr);

// Number of cloud points inside the cap (closed), by linear kernel scan.
std::size_t occupancy(const PointCloud& A, const SphericalCap& cap);

// Conservative stand-in for the sup over all centers: counts at the points
// of a resolution-delta net with radius inflated by delta, which dominates
// the count of any cap of the stated radius.
std::size_t occupancy_sup_proxy(const PointCloud& A, double radius,
                                const SphericalNet& centers);

// Uniform sample from the cap (exact, via a beta-like radial rejection step).
VecN sample_in_cap(Rng& rng, const SphericalCap& cap);

// k+1 points along the great-circle arc from w1 to w2 (endpoints included),
// equally spaced in angle. Throws AntipodalInputError near w2 = -w1.
std::vector<VecN> geodesic_subdivide(const VecN& w1, const VecN& w2, int k);

}  // namespace spoly
