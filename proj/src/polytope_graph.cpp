#include "spoly/polytope_graph.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <vector>

namespace spoly {
namespace {

void require_vertex(const VertexGraph& g, int id, const char* what) {
  if (id < 0 || std::size_t(id) >= g.size()) throw DomainError(std::string(what) + ": vertex id out of range");
}

// Distances from a source; -1 marks unreachable vertices.
std::vector<int> bfs_levels(const VertexGraph& g, int from) {
  std::vector<int> dist(g.size(), -1);
  std::vector<int> queue;
  queue.reserve(g.size());
  dist[std::size_t(from)] = 0;
  queue.push_back(from);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (int v : g.adjacency[std::size_t(u)]) {
      if (dist[std::size_t(v)] >= 0) continue;
      dist[std::size_t(v)] = dist[std::size_t(u)] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

struct EccInfo {
  int ecc = 0;
  int target = 0;  // smallest id attaining the eccentricity
};

EccInfo eccentricity(const VertexGraph& g, int from, const char* what) {
  std::vector<int> dist = bfs_levels(g, from);
  EccInfo info{0, from};
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] < 0) throw DisconnectedGraphError(std::string(what) + ": graph is disconnected");
    if (dist[v] > info.ecc) {
      info.ecc = dist[v];
      info.target = int(v);
    }
  }
  return info;
}

}  // namespace

int bfs_distance(const VertexGraph& g, int from, int to) {
  require_vertex(g, from, "bfs_distance");
  require_vertex(g, to, "bfs_distance");
  std::vector<int> dist = bfs_levels(g, from);
  if (dist[std::size_t(to)] < 0) throw DisconnectedGraphError("bfs_distance: no path");
  return dist[std::size_t(to)];
}

std::vector<int> bfs_path(const VertexGraph& g, int from, int to) {
  require_vertex(g, from, "bfs_path");
  require_vertex(g, to, "bfs_path");
  std::vector<int> dist = bfs_levels(g, from);
  if (dist[std::size_t(to)] < 0) throw DisconnectedGraphError("bfs_path: no path");
  std::vector<int> path = {to};
  int cur = to;
  while (cur != from) {
    int prev = -1;
    for (int u : g.adjacency[std::size_t(cur)]) {
      if (dist[std::size_t(u)] == dist[std::size_t(cur)] - 1) {
        prev = u;  // adjacency is sorted: first hit is the smallest id
        break;
      }
    }
    path.push_back(prev);
    cur = prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

DiameterReport diameter(const VertexGraph& g, std::size_t all_pairs_limit) {
  if (g.size() == 0) throw DomainError("diameter: empty graph");
  DiameterReport report;
  if (g.size() == 1) return report;

  if (g.size() <= all_pairs_limit) {
    report.diameter = -1;
    for (std::size_t u = 0; u < g.size(); ++u) {
      EccInfo e = eccentricity(g, int(u), "diameter");
      ++report.bfs_runs;
      if (e.ecc > report.diameter) {
        report.diameter = e.ecc;
        report.witness_u = int(u);
        report.witness_v = e.target;
      }
    }
    return report;
  }

  // iFUB: refine a lower bound from the deepest BFS layers of a root; once
  // the bound reaches twice the remaining depth no deeper pair can beat it.
  int root = 0;
  std::size_t best_deg = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.adjacency[v].size() > best_deg) {
      best_deg = g.adjacency[v].size();
      root = int(v);
    }
  }
  std::vector<int> levels = bfs_levels(g, root);
  ++report.bfs_runs;
  int depth = 0;
  for (std::size_t v = 0; v < levels.size(); ++v) {
    if (levels[v] < 0) throw DisconnectedGraphError("diameter: graph is disconnected");
    depth = std::max(depth, levels[v]);
  }
  int lb = depth;
  {
    // Witness of the root's eccentricity seeds the bound.
    int target = 0;
    for (std::size_t v = 0; v < levels.size(); ++v) {
      if (levels[v] == depth) {
        target = int(v);
        break;
      }
    }
    report.witness_u = std::min(root, target);
    report.witness_v = std::max(root, target);
  }
  for (int level = depth; level > 0; --level) {
    if (lb >= 2 * level) break;  // pairs confined below this level cannot exceed lb
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (levels[v] != level) continue;
      EccInfo e = eccentricity(g, int(v), "diameter");
      ++report.bfs_runs;
      if (e.ecc > lb) {
        lb = e.ecc;
        report.witness_u = std::min(int(v), e.target);
        report.witness_v = std::max(int(v), e.target);
      }
    }
  }
  report.diameter = lb;
  return report;
}

DualWalk extract_dual_walk(const VertexGraph& polar, const std::vector<int>& path,
                           int a1, int a2) {
  if (polar.kind != GraphKind::kPolar)
    throw PreconditionError("extract_dual_walk: graph is not a polar vertex graph");
  if (path.empty()) throw PreconditionError("extract_dual_walk: empty path");
  if (a1 == a2) throw PreconditionError("extract_dual_walk: endpoints coincide");
  for (int v : path) require_vertex(polar, v, "extract_dual_walk");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& adj = polar.adjacency[std::size_t(path[i])];
    if (!std::binary_search(adj.begin(), adj.end(), path[i + 1]))
      throw PreconditionError("extract_dual_walk: path steps off the graph");
  }
  auto tight = [&](int constraint, std::size_t i) {
    const auto& b = polar.basis[std::size_t(path[i])];
    return std::binary_search(b.begin(), b.end(), constraint);
  };
  const std::size_t D = path.size() - 1;
  if (!tight(a1, 0)) throw PreconditionError("extract_dual_walk: a1 not tight at the start");
  if (!tight(a2, D)) throw PreconditionError("extract_dual_walk: a2 not tight at the end");
  for (std::size_t i = 1; i <= D; ++i)
    if (tight(a1, i)) throw PreconditionError("extract_dual_walk: a1 tight beyond the start");
  for (std::size_t i = 0; i < D; ++i)
    if (tight(a2, i)) throw PreconditionError("extract_dual_walk: a2 tight before the end");

  DualWalk out;
  out.walk.push_back(a1);
  std::size_t l = 0;
  while (l < D) {
    // Maximal block [l, j] of path vertices sharing a constraint.
    std::vector<int> inter = polar.basis[std::size_t(path[l])];
    std::size_t j = l;
    while (j < D) {
      const auto& next = polar.basis[std::size_t(path[j + 1])];
      std::vector<int> merged;
      std::set_intersection(inter.begin(), inter.end(), next.begin(), next.end(),
                            std::back_inserter(merged));
      if (merged.empty()) break;
      inter = std::move(merged);
      ++j;
    }
    if (j == l)
      throw PreconditionError("extract_dual_walk: adjacent vertices share no constraint");
    out.walk.push_back(inter.front());
    out.block_ends.push_back(int(j));
    l = j;
  }
  out.walk.push_back(a2);
  return out;
}

DiameterRelation diameter_relation_check(const VertexGraph& polar_graph,
                                         const VertexGraph& hull_graph) {
  if (polar_graph.kind != GraphKind::kPolar || hull_graph.kind != GraphKind::kHull)
    throw DomainError("diameter_relation_check: expected a polar and a hull graph");
  if (polar_graph.dim != hull_graph.dim)
    throw DomainError("diameter_relation_check: dimension mismatch");
  DiameterRelation rel;
  rel.dim = polar_graph.dim;
  rel.polar = diameter(polar_graph);
  rel.hull = diameter(hull_graph);
  rel.holds = rel.polar.diameter >= (rel.dim - 1) * (rel.hull.diameter - 2);
  return rel;
}

void save_graph_csv(const VertexGraph& g, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("save_graph_csv: cannot open " + path);
  std::fprintf(f, "# spoly-graph v1\n");
  std::fprintf(f, "# kind=%s n=%d vertices=%zu\n",
               g.kind == GraphKind::kPolar ? "polar" : "hull", g.dim, g.size());
  std::fprintf(f, "id,basis,coords,neighbors\n");
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::fprintf(f, "%zu,", i);
    for (std::size_t k = 0; k < g.basis[i].size(); ++k)
      std::fprintf(f, "%s%d", k ? " " : "", g.basis[i][k]);
    std::fprintf(f, ",");
    for (int c = 0; c < g.dim; ++c)
      std::fprintf(f, "%s%.17g", c ? " " : "", g.coords[i][c]);
    std::fprintf(f, ",");
    for (std::size_t k = 0; k < g.adjacency[i].size(); ++k)
      std::fprintf(f, "%s%d", k ? " " : "", g.adjacency[i][k]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace spoly
