#pragma once
// Vertex graphs of the hull and its polar polytope, exact path statistics
// (BFS distances, exact diameters with witness pairs), and the constraint
// walk extracted from a polar path.

#include <cstdint>
#include <string>
#include <vector>

#include "spoly/common.hpp"

namespace spoly {

enum class GraphKind { kPolar, kHull };

// kPolar: one vertex per facet of the hull; coords solve <a_i, v> = 1 over
// the facet basis and `basis` lists those constraint ids. kHull: one vertex
// per hull point; basis is the singleton {point id}.
struct VertexGraph {
  int dim = 0;
  GraphKind kind = GraphKind::kHull;
  std::vector<VecN> coords;
  std::vector<std::vector<int>> basis;
  std::vector<std::vector<int>> adjacency;  // sorted neighbor lists

  std::size_t size() const { return coords.size(); }
};

// Exact unweighted distance between two vertex ids. Throws
// DisconnectedGraphError when no path exists, DomainError on bad ids.
int bfs_distance(const VertexGraph& g, int from, int to);

// A shortest path from -> to, both endpoints included, determinized by
// backtracking through the smallest-id predecessor at each level.
std::vector<int> bfs_path(const VertexGraph& g, int from, int to);

struct DiameterReport {
  int diameter = 0;
  int witness_u = 0;   // smallest pair (u, v), u < v, attaining the diameter
  int witness_v = 0;
  std::size_t bfs_runs = 0;
};

// Exact diameter: all-pairs BFS with the lexicographically smallest witness
// pair up to all_pairs_limit vertices, the iFUB elimination scheme (exact,
// usually far fewer BFS runs) above that.
DiameterReport diameter(const VertexGraph& g, std::size_t all_pairs_limit = 50000);

// Constraint walk along a polar path: splits the path into maximal blocks of
// vertices sharing a tight constraint and emits one shared constraint per
// block (smallest id), prefixed by `a1` and terminated by `a2`. Consecutive
// entries always share a vertex basis, i.e. they span an edge of the hull.
// Preconditions (PreconditionError): the path is nonempty and walks along
// adjacent vertices, a1 is tight exactly at the first vertex, a2 exactly at
// the last.
struct DualWalk {
  std::vector<int> walk;        // constraint ids, front() == a1, back() == a2
  std::vector<int> block_ends;  // path index where each interior block ends
};
DualWalk extract_dual_walk(const VertexGraph& polar, const std::vector<int>& path,
                           int a1, int a2);

// Diameters of both graphs plus the lower-bound relation
// diam(polar) >= (dim - 1) (diam(hull) - 2) between them.
struct DiameterRelation {
  DiameterReport polar;
  DiameterReport hull;
  int dim = 0;
  bool holds = false;
};
DiameterRelation diameter_relation_check(const VertexGraph& polar_graph,
                                         const VertexGraph& hull_graph);

// Adjacency table as CSV (id, basis ids, coordinates, neighbor ids).
void save_graph_csv(const VertexGraph& g, const std::string& path);

}  // namespace spoly
