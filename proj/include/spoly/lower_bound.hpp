#pragma once
// Certified lower bounds on the combinatorial diameter of the point hull: a
// hull path maps to a piecewise-geodesic spherical curve through facet cap
// centers, the curve is threaded through a separated net, and every
// consecutive pair of occupied half-radius caps in the resulting subsequence
// pins a distinct path vertex.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spoly/common.hpp"
#include "spoly/hull.hpp"
#include "spoly/points.hpp"
#include "spoly/polytope_graph.hpp"
#include "spoly/sphere_geom.hpp"

namespace spoly {

// Piecewise-geodesic spherical curve; segment i is owned by the input point
// that stays nearest to the curve throughout that parameter interval.
struct CurveSample {
  struct Breakpoint {
    double s = 0.0;
    VecN point;
  };
  std::vector<Breakpoint> breakpoints;  // strictly increasing s, 0 and 1 at the ends
  std::vector<int> owners;              // owners[i] covers [breakpoints[i].s, breakpoints[i+1].s]

  // Normalized linear interpolation inside the segment containing t.
  VecN eval(double t) const;
};

// Net subsequence along a curve plus the occupied-cap pair count it implies.
struct LBCertificate {
  SphericalNet net;
  int a_plus = -1;   // point id of the sampled objective vertex
  int a_minus = -1;  // point id of its near-antipode
  double epsilon = 0.0;
  std::vector<std::pair<double, VecN>> sequence;  // (t_i, x_i), t strictly increasing
  std::vector<bool> occupied;                     // B_i: cloud meets C(x_i, eps/2)
  int k = 0;
  int k0_statement = 0;  // ceil(1/(8 eps)) - 1
  int k0_proof = 0;      // ceil(1/(8 eps)) + 1
  std::size_t pair_count = 0;
  std::size_t certified_lb = 0;  // = pair_count, never exceeds exact_distance
  int exact_distance = 0;        // graph distance from a_plus to a_minus

  explicit LBCertificate(SphericalNet n) : net(std::move(n)) {}
};

struct AntipodalStats {
  int n = 0;
  double m = 0.0;
  std::vector<int> distances;  // one exact e1 -> -e1 graph distance per trial
  double mean = 0.0;
  double median = 0.0;
  int min = 0;
  int max = 0;
};

// Curve through the circumscribed-cap centers of one facet per path edge;
// the cap center of a facet equals its outward unit normal. Validates the
// nearest-owner property on a 101-point grid per edge.
CurveSample path_to_curve(const Hull& hull, const PointCloud& cloud,
                          const std::vector<int>& path);

// Inductive net threading: x_{l+1} is the first net point reachable within
// eps of the curve at distance >= 6 eps from x_l, and t_{l+1} is the last
// parameter where the curve stays within eps of it. Grid resolution 1e-4
// with local bisection; one automatic 10x refinement before failing.
std::vector<std::pair<double, VecN>> curve_subsequence(const CurveSample& f,
                                                       const SphericalNet& net, double epsilon);

// Full pipeline at eps = c6 * m^{-1/(n-1)}: sample an objective point, find
// its antipode, walk the exact shortest hull path, thread the curve, and
// count consecutive occupied cap pairs.
LBCertificate certify_lower_bound(const PointCloud& cloud, const Hull& hull,
                                  const VertexGraph& hull_graph, double c6,
                                  std::uint64_t seed);

// Exact hull-graph distance between the maximizers of e1 and -e1 over fresh
// instances.
AntipodalStats antipodal_distance_experiment(int n, double m, int trials, std::uint64_t seed);

// CSV: header plus one row per sequence entry (t, occupied flag, coordinates).
void save_certificate_csv(const LBCertificate& cert, const std::string& path);

}  // namespace spoly
