#pragma once
// Convex hulls of finite point batches by randomized incremental insertion
// (beneath-beyond with conflict lists) and the polar vertex graph of
// {x : <a_i, x> <= 1}. Orientation tests are (dim+1)-order determinant signs
// with an exact rational fallback inside the predicate tolerance band.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spoly/common.hpp"
#include "spoly/points.hpp"
#include "spoly/polytope_graph.hpp"

namespace spoly {

struct Facet {
  std::vector<int> basis;  // sorted ids of the dim points spanning the facet
  VecN outward_normal;     // unit normal pointing away from the hull
  double support = 0.0;    // <outward_normal, a_i> averaged over the basis
};

struct Hull {
  int dim = 0;
  std::size_t point_count = 0;
  std::vector<Facet> facets;  // sorted by basis
  // Sorted (dim-1)-subset shared by exactly two facets -> their ids (lo, hi).
  std::map<std::vector<int>, std::pair<int, int>> ridge_adjacency;
  std::vector<std::pair<int, int>> edges;  // 1-skeleton, sorted id pairs
  std::vector<int> vertex_ids;             // point ids on the hull, sorted
};

// Randomized incremental hull. Requires at least dim+1 points, pairwise gaps
// above 1e-10 (DomainError) and general position: an exact zero in an
// orientation predicate raises DegeneracyError.
Hull convex_hull(const PointCloud& cloud);

// True when the origin is strictly interior, i.e. every facet support
// exceeds the predicate tolerance.
bool contains_origin(const Hull& hull);

// Vertex graph of the polar polytope: one vertex per facet, solving
// <a_i, v> = 1 over the facet basis (residuals below 1e-8 enforced), one
// edge per ridge. Raises PolarityError when the origin is not interior and
// DegeneracyError when a vertex system degenerates or a solved vertex
// violates a non-basis constraint beyond 1e-8.
VertexGraph polar_vertex_graph(const Hull& hull, const PointCloud& cloud);

// 1-skeleton of the hull itself: vertices are the hull points in id order,
// edges the hull edges.
VertexGraph hull_vertex_graph(const Hull& hull, const PointCloud& cloud);

// Facet table as CSV (id, basis ids, unit normal, support).
void save_hull_csv(const Hull& hull, const std::string& path);

}  // namespace spoly
