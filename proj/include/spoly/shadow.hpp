#pragma once
// Shadow vertices of a polar polytope with respect to a 2D objective plane,
// angular shadow paths, monotone local paths inside objective superlevel
// sets, locality event checks, and the stitched two-segment path used by the
// diameter upper-bound experiments.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spoly/common.hpp"
#include "spoly/points.hpp"
#include "spoly/polytope_graph.hpp"
#include "spoly/prob_bounds.hpp"
#include "spoly/sphere_geom.hpp"

namespace spoly {

// Two-dimensional linear subspace spanned by an orthonormal pair.
struct PlaneSpan {
  int dim = 0;
  VecN u1;
  VecN u2;

  // Requires the pair to be unit and orthogonal within 1e-12.
  static PlaneSpan from(const VecN& a, const VecN& b);
  // Gram-Schmidt from two independent directions; DegeneracyError if collinear.
  static PlaneSpan orthonormalized(const VecN& a, const VecN& b);

  VecN direction(double theta) const;  // cos(theta) u1 + sin(theta) u2
  std::pair<double, double> project(const VecN& x) const;
  double angle_of(const VecN& w) const;  // atan2 of the in-plane coordinates
};

// Shadow vertices in cyclic order of the objective angle each one maximizes.
struct ShadowRecord {
  PlaneSpan plane;
  std::vector<int> shadow_vertex_ids;
  std::vector<double> angles;  // midpoint of each vertex's optimal arc, in (-pi, pi]
  std::size_t size = 0;
};

// Both clauses of the two-point locality event for a point cloud.
struct LocalityEvent {
  VecN x;
  VecN y;
  double epsilon = 0.0;
  double p = 0.0;
  bool dense_ok = false;
  bool occupancy_ok = false;
  double occupancy_threshold = 0.0;   // 45 e 2^n ln(1/p)
  std::size_t max_occupancy = 0;      // worst count seen along the segment grid

  bool holds() const { return dense_ok && occupancy_ok; }
};

// Assertion report for tight-constraint locality along monotone paths.
struct LocalityReport {
  std::size_t paths = 0;
  std::size_t vertices = 0;
  double max_constraint_distance = 0.0;
  double distance_bound = 0.0;  // 2 eps + ||w1 - w2||
  double max_vertex_norm = 0.0;
  double norm_bound = 0.0;      // (1 - eps^2/2)^{-1} + 1e-9
  bool clean = false;
};

// Concatenation of a monotone local path and a shadow path.
struct StitchedPath {
  std::vector<int> path;                     // vertex ids, junction deduplicated
  std::vector<std::size_t> segment_lengths;  // edge counts per segment
  std::size_t length = 0;                    // total edge count
  double local_bound = 0.0;                  // 45 e n 4^n ln(1/p), for reporting
};

struct ShadowSizeStats {
  double mean = 0.0;
  double max_deviation = 0.0;
  double t_p = 0.0;
  std::vector<std::size_t> sizes;
};

// Vertex of g maximizing <w, .>; ties broken by smallest id.
int maximizer(const VertexGraph& g, const VecN& w);

// Whether vertex v maximizes some nonzero objective inside the plane: the
// convex hull of its tight constraint normals meets the plane away from 0.
bool is_shadow_vertex(const VertexGraph& g, const PointCloud& cloud, int v,
                      const PlaneSpan& plane);

// All shadow vertices sorted by optimal objective angle; validates that
// cyclically consecutive entries are adjacent in g.
ShadowRecord shadow_record(const VertexGraph& g, const PointCloud& cloud,
                           const PlaneSpan& plane);

// Walk of the shadow record from maximizer(w1) to maximizer(w2), sweeping in
// the angular direction leading from w1 to w2 inside the plane.
std::vector<int> shadow_path(const VertexGraph& g, const PointCloud& cloud,
                             const PlaneSpan& plane, const VecN& w1, const VecN& w2);

// BFS shortest path from maximizer(w) to maximizer(w2) inside the superlevel
// subgraph {v : <w2, v> >= <w2, maximizer(w)>}.
std::vector<int> monotone_local_path(const VertexGraph& g, const VecN& w, const VecN& w2);

// Density clause on C(x, ||x-y|| + 4 eps) plus an occupancy clause over a
// 101-point grid of normalized segment points between x and y.
LocalityEvent check_locality_event(const PointCloud& cloud, const VecN& x, const VecN& y,
                                   double epsilon, double p);

// For 11 interpolated objectives w between w1 and w2, walks
// monotone_local_path(w, w2) and bounds ||w2 - a|| over tight constraints a
// of every visited vertex, plus the vertex norm bound.
LocalityReport verify_tight_constraint_locality(const VertexGraph& g, const PointCloud& cloud,
                                                const VecN& w1, const VecN& w2, double epsilon);

// Monotone local path from maximizer(w) to the maximizer of the nearest net
// direction n_w, then a shadow path from n_w to e1 inside span(e1, n_w).
StitchedPath stitched_diameter_path(const VertexGraph& g, const PointCloud& cloud,
                                    const SphericalNet& net, const VecN& w, double p);

// Empirical mean and max deviation of the shadow size over fresh instances,
// next to the analytic deviation threshold t_p.
ShadowSizeStats shadow_size_stats(int n, double m, const PlaneSpan& plane, int trials,
                                  double p, std::uint64_t seed,
                                  const TailParams& params = TailParams{});

// CSV: one row per shadow vertex (id, angle, projected coordinates).
void save_shadow_csv(const ShadowRecord& rec, const VertexGraph& g, const std::string& path);

}  // namespace spoly
