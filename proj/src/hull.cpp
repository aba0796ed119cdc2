#include "spoly/hull.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "spoly/kernels.hpp"
#include "spoly/linalg.hpp"
#include "spoly/rng.hpp"

namespace spoly {
namespace {

struct BuildFacet {
  std::array<int, kMaxDim> basis{};  // sorted, dim entries
  std::array<int, kMaxDim> nbr{};    // nbr[k] lies across ridge basis \ {basis[k]}
  std::vector<int> conflicts;        // uninserted points that see this facet
  int inside_sign = 0;               // orientation sign of the interior point
  bool alive = true;
  int stamp = -1;
  bool stamp_visible = false;
};

class HullBuilder {
 public:
  explicit HullBuilder(const PointsView& pts) : pts_(pts), n_(pts.dim) {}

  Hull build();

 private:
  // Sign of the (n+1)-order orientation determinant of the basis points and q.
  int side_of(const std::array<int, kMaxDim>& basis, const VecN& q) const {
    SquareMatrix m(n_ + 1);
    for (int r = 0; r < n_; ++r) {
      auto row = pts_.row(std::size_t(basis[std::size_t(r)]));
      for (int c = 0; c < n_; ++c) m.at(r, c) = row[std::size_t(c)];
      m.at(r, n_) = 1.0;
    }
    for (int c = 0; c < n_; ++c) m.at(n_, c) = q[c];
    m.at(n_, n_) = 1.0;
    return determinant_sign(m);
  }

  bool visible_from(int fid, const VecN& q) {
    BuildFacet& f = facets_[std::size_t(fid)];
    int s = side_of(f.basis, q);
    if (s == 0) throw DegeneracyError("convex_hull: point exactly on a facet hyperplane");
    return s != f.inside_sign;
  }

  bool visible_cached(int fid, const VecN& q) {
    BuildFacet& f = facets_[std::size_t(fid)];
    if (f.stamp != cur_stamp_) {
      f.stamp = cur_stamp_;
      f.stamp_visible = visible_from(fid, q);
    }
    return f.stamp_visible;
  }

  void reject_duplicates() const;
  std::vector<int> initial_simplex() const;
  int new_facet(std::array<int, kMaxDim> basis) {
    BuildFacet f;
    f.basis = basis;
    f.inside_sign = side_of(basis, interior_);
    if (f.inside_sign == 0) throw DegeneracyError("convex_hull: interior point on a facet hyperplane");
    facets_.push_back(std::move(f));
    return int(facets_.size()) - 1;
  }
  void add_conflict(int fid, int point) {
    facets_[std::size_t(fid)].conflicts.push_back(point);
    point_facets_[std::size_t(point)].push_back(fid);
  }
  void insert_point(int id);
  Hull assemble() const;
  VecN facet_normal(const std::array<int, kMaxDim>& basis) const;

  const PointsView& pts_;
  int n_;
  VecN interior_;
  std::vector<BuildFacet> facets_;
  std::vector<std::vector<int>> point_facets_;  // alive superset, filtered lazily
  std::vector<bool> inserted_;
  int cur_stamp_ = 0;
};

void HullBuilder::reject_duplicates() const {
  const std::size_t count = pts_.count;
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    auto ra = pts_.row(std::size_t(a)), rb = pts_.row(std::size_t(b));
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      double d0 = pts_.row(std::size_t(order[j]))[0] - pts_.row(std::size_t(order[i]))[0];
      if (d0 > 1e-10) break;
      if (dist2(pts_.vec(std::size_t(order[i])), pts_.vec(std::size_t(order[j]))) <= 1e-20)
        throw DomainError("convex_hull: duplicate points (distance below 1e-10)");
    }
  }
}

std::vector<int> HullBuilder::initial_simplex() const {
  const std::size_t count = pts_.count;
  double coord_scale = 1.0;
  for (std::size_t i = 0; i < count; ++i)
    for (int c = 0; c < n_; ++c) coord_scale = std::max(coord_scale, std::fabs(pts_.row(i)[std::size_t(c)]));

  std::vector<int> chosen = {0};
  std::vector<VecN> ortho;  // orthonormal basis of the current affine span
  const VecN origin_pt = pts_.vec(0);
  while (int(chosen.size()) < n_ + 1) {
    int best = -1;
    double best_res = 0.0;
    for (std::size_t q = 0; q < count; ++q) {
      VecN r = sub(pts_.vec(q), origin_pt);
      for (const VecN& b : ortho) r = sub(r, scale(b, dot(r, b)));
      double res = norm2(r);
      if (res > best_res) {
        best_res = res;
        best = int(q);
      }
    }
    double tol = coord_scale * tolerances().predicate;
    if (best < 0 || !(best_res > tol * tol))
      throw DegeneracyError("convex_hull: points are affinely dependent");
    VecN r = sub(pts_.vec(std::size_t(best)), origin_pt);
    for (const VecN& b : ortho) r = sub(r, scale(b, dot(r, b)));
    ortho.push_back(normalized(r));
    chosen.push_back(best);
  }
  return chosen;
}

void HullBuilder::insert_point(int id) {
  inserted_[std::size_t(id)] = true;
  int seed = -1;
  for (int fid : point_facets_[std::size_t(id)]) {
    if (facets_[std::size_t(fid)].alive) {
      seed = fid;
      break;
    }
  }
  point_facets_[std::size_t(id)].clear();
  if (seed < 0) return;  // interior of the current hull

  const VecN q = pts_.vec(std::size_t(id));
  ++cur_stamp_;
  std::vector<int> visible = {seed};
  std::vector<int> work = {seed};
  facets_[std::size_t(seed)].stamp = cur_stamp_;
  facets_[std::size_t(seed)].stamp_visible = true;
  while (!work.empty()) {
    int fid = work.back();
    work.pop_back();
    for (int k = 0; k < n_; ++k) {
      int nb = facets_[std::size_t(fid)].nbr[std::size_t(k)];
      if (facets_[std::size_t(nb)].stamp == cur_stamp_) continue;
      if (visible_cached(nb, q)) {
        visible.push_back(nb);
        work.push_back(nb);
      }
    }
  }

  // Horizon: ridges between a visible facet and a surviving neighbor.
  struct HorizonEdge {
    int dead = 0;
    int slot = 0;  // ridge = basis(dead) \ {basis[slot]}
    int outside = 0;
  };
  std::vector<HorizonEdge> horizon;
  for (int fid : visible) {
    for (int k = 0; k < n_; ++k) {
      int nb = facets_[std::size_t(fid)].nbr[std::size_t(k)];
      if (!visible_cached(nb, q)) horizon.push_back({fid, k, nb});
    }
  }

  // One new facet per horizon ridge; wire neighbors across shared ridges.
  std::map<std::vector<int>, std::pair<int, int>> pending;  // ridge with id -> (fid, slot)
  for (const HorizonEdge& h : horizon) {
    const BuildFacet dead = facets_[std::size_t(h.dead)];  // copy: vector may grow
    std::array<int, kMaxDim> basis{};
    int w = 0;
    for (int k = 0; k < n_; ++k)
      if (k != h.slot) basis[std::size_t(w++)] = dead.basis[std::size_t(k)];
    basis[std::size_t(w++)] = id;
    std::sort(basis.begin(), basis.begin() + n_);
    int fid = new_facet(basis);
    BuildFacet& nf = facets_[std::size_t(fid)];
    int id_slot = int(std::find(basis.begin(), basis.begin() + n_, id) - basis.begin());
    nf.nbr[std::size_t(id_slot)] = h.outside;
    BuildFacet& out = facets_[std::size_t(h.outside)];
    for (int k = 0; k < n_; ++k)
      if (out.nbr[std::size_t(k)] == h.dead) out.nbr[std::size_t(k)] = fid;

    for (int k = 0; k < n_; ++k) {
      if (k == id_slot) continue;
      std::vector<int> key;
      key.reserve(std::size_t(n_) - 1);
      for (int t = 0; t < n_; ++t)
        if (t != k) key.push_back(basis[std::size_t(t)]);
      auto it = pending.find(key);
      if (it == pending.end()) {
        pending.emplace(std::move(key), std::make_pair(fid, k));
      } else {
        facets_[std::size_t(fid)].nbr[std::size_t(k)] = it->second.first;
        facets_[std::size_t(it->second.first)].nbr[std::size_t(it->second.second)] = fid;
        pending.erase(it);
      }
    }

    // Conflicts of the new facet live in the union of the two lists incident
    // to its horizon ridge.
    std::vector<int> cand = dead.conflicts;
    cand.insert(cand.end(), out.conflicts.begin(), out.conflicts.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (int c : cand) {
      if (inserted_[std::size_t(c)]) continue;
      if (visible_from(fid, pts_.vec(std::size_t(c)))) add_conflict(fid, c);
    }
  }
  if (!pending.empty()) throw DegeneracyError("convex_hull: horizon ridge left unpaired");

  for (int fid : visible) {
    facets_[std::size_t(fid)].alive = false;
    facets_[std::size_t(fid)].conflicts.clear();
    facets_[std::size_t(fid)].conflicts.shrink_to_fit();
  }
}

VecN HullBuilder::facet_normal(const std::array<int, kMaxDim>& basis) const {
  const VecN x0 = pts_.vec(std::size_t(basis[0]));
  // Generalized cross product of the difference rows via cofactor expansion.
  VecN u(n_);
  for (int k = 0; k < n_; ++k) {
    SquareMatrix minor(n_ - 1);
    for (int r = 0; r < n_ - 1; ++r) {
      VecN d = sub(pts_.vec(std::size_t(basis[std::size_t(r + 1)])), x0);
      int w = 0;
      for (int c = 0; c < n_; ++c)
        if (c != k) minor.at(r, w++) = d[c];
    }
    double det = determinant(minor);
    u[k] = (k % 2 == 0) ? det : -det;
  }
  if (dot(u, sub(x0, interior_)) < 0.0) u = scale(u, -1.0);
  return normalized(u);
}

Hull HullBuilder::build() {
  if (n_ < 2 || n_ > kMaxDim) throw DomainError("convex_hull: dimension outside [2, 8]");
  if (pts_.count < std::size_t(n_) + 1) throw DomainError("convex_hull: need at least dim+1 points");
  reject_duplicates();

  std::vector<int> simplex = initial_simplex();
  interior_ = VecN(n_);
  for (int id : simplex) interior_ = add(interior_, pts_.vec(std::size_t(id)));
  interior_ = scale(interior_, 1.0 / double(n_ + 1));

  inserted_.assign(pts_.count, false);
  point_facets_.assign(pts_.count, {});
  for (int id : simplex) inserted_[std::size_t(id)] = true;

  // Simplex facets: leave index k out; the neighbor across a ridge missing
  // vertex v is the facet that leaves v out.
  std::sort(simplex.begin(), simplex.end());
  std::vector<int> where(pts_.count, -1);
  for (int k = 0; k <= n_; ++k) where[std::size_t(simplex[std::size_t(k)])] = k;
  for (int k = 0; k <= n_; ++k) {
    std::array<int, kMaxDim> basis{};
    int w = 0;
    for (int t = 0; t <= n_; ++t)
      if (t != k) basis[std::size_t(w++)] = simplex[std::size_t(t)];
    int fid = new_facet(basis);
    BuildFacet& f = facets_[std::size_t(fid)];
    for (int t = 0; t < n_; ++t) f.nbr[std::size_t(t)] = where[std::size_t(f.basis[std::size_t(t)])];
  }

  for (std::size_t q = 0; q < pts_.count; ++q) {
    if (inserted_[q]) continue;
    const VecN v = pts_.vec(q);
    for (int fid = 0; fid <= n_; ++fid)
      if (visible_from(fid, v)) add_conflict(fid, int(q));
  }

  std::vector<int> order;
  order.reserve(pts_.count);
  for (std::size_t q = 0; q < pts_.count; ++q)
    if (!inserted_[q]) order.push_back(int(q));
  Rng rng(Rng::mix64(0x48554c4cull ^ (std::uint64_t(pts_.count) << 8) ^ std::uint64_t(n_)));
  shuffle_indices(rng, order);
  for (int id : order) insert_point(id);

  return assemble();
}

Hull HullBuilder::assemble() const {
  Hull hull;
  hull.dim = n_;
  hull.point_count = pts_.count;

  std::vector<std::vector<int>> bases;
  for (const BuildFacet& f : facets_) {
    if (!f.alive) continue;
    bases.emplace_back(f.basis.begin(), f.basis.begin() + n_);
  }
  std::sort(bases.begin(), bases.end());

  std::set<std::pair<int, int>> edge_set;
  std::set<int> vertex_set;
  for (std::size_t fid = 0; fid < bases.size(); ++fid) {
    const std::vector<int>& b = bases[fid];
    Facet facet;
    facet.basis = b;
    std::array<int, kMaxDim> arr{};
    std::copy(b.begin(), b.end(), arr.begin());
    facet.outward_normal = facet_normal(arr);
    long double h = 0.0L;
    for (int idx : b) h += dot(facet.outward_normal, pts_.vec(std::size_t(idx)));
    facet.support = double(h / n_);
    hull.facets.push_back(std::move(facet));

    for (std::size_t i = 0; i < b.size(); ++i) {
      std::vector<int> ridge;
      ridge.reserve(b.size() - 1);
      for (std::size_t j = 0; j < b.size(); ++j)
        if (j != i) ridge.push_back(b[j]);
      auto [it, fresh] = hull.ridge_adjacency.try_emplace(std::move(ridge), int(fid), -1);
      if (!fresh) {
        if (it->second.second != -1)
          throw DegeneracyError("convex_hull: ridge shared by more than two facets");
        it->second.second = int(fid);
      }
      for (std::size_t j = i + 1; j < b.size(); ++j)
        edge_set.emplace(std::min(b[i], b[j]), std::max(b[i], b[j]));
    }
    vertex_set.insert(b.begin(), b.end());
  }
  for (const auto& [ridge, fids] : hull.ridge_adjacency)
    if (fids.second == -1) throw DegeneracyError("convex_hull: ridge with a single facet");

  hull.edges.assign(edge_set.begin(), edge_set.end());
  hull.vertex_ids.assign(vertex_set.begin(), vertex_set.end());
  return hull;
}

}  // namespace

Hull convex_hull(const PointCloud& cloud) {
  PointsView view = cloud.view();
  HullBuilder builder(view);
  return builder.build();
}

bool contains_origin(const Hull& hull) {
  if (hull.facets.empty()) return false;
  for (const Facet& f : hull.facets)
    if (!(f.support > tolerances().predicate)) return false;
  return true;
}

VertexGraph polar_vertex_graph(const Hull& hull, const PointCloud& cloud) {
  if (hull.dim != cloud.dim || hull.point_count != cloud.count)
    throw DomainError("polar_vertex_graph: hull does not match the cloud");
  if (!contains_origin(hull)) throw PolarityError("polar_vertex_graph: origin is not interior");

  const int n = hull.dim;
  VertexGraph g;
  g.dim = n;
  g.kind = GraphKind::kPolar;
  g.coords.reserve(hull.facets.size());
  g.basis.reserve(hull.facets.size());
  g.adjacency.assign(hull.facets.size(), {});

  for (const Facet& f : hull.facets) {
    SquareMatrix m(n);
    std::vector<double> rhs(std::size_t(n), 1.0);
    for (int r = 0; r < n; ++r) {
      auto row = cloud.view().row(std::size_t(f.basis[std::size_t(r)]));
      for (int c = 0; c < n; ++c) m.at(r, c) = row[std::size_t(c)];
    }
    std::vector<double> x = solve_linear(m, rhs);
    VecN v = VecN::from(x);
    for (int idx : f.basis)
      if (std::fabs(dot(cloud.point(std::size_t(idx)), v) - 1.0) > 1e-8)
        throw DegeneracyError("polar_vertex_graph: basis residual above 1e-8");
    if (kern::count_dot_ge(cloud.soa, v.data(), 1.0 + 1e-8) != 0)
      throw DegeneracyError("polar_vertex_graph: vertex violates a non-basis constraint");
    g.coords.push_back(v);
    g.basis.push_back(f.basis);
  }

  for (const auto& [ridge, pair] : hull.ridge_adjacency) {
    g.adjacency[std::size_t(pair.first)].push_back(pair.second);
    g.adjacency[std::size_t(pair.second)].push_back(pair.first);
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

VertexGraph hull_vertex_graph(const Hull& hull, const PointCloud& cloud) {
  if (hull.dim != cloud.dim || hull.point_count != cloud.count)
    throw DomainError("hull_vertex_graph: hull does not match the cloud");
  VertexGraph g;
  g.dim = hull.dim;
  g.kind = GraphKind::kHull;
  const std::vector<int>& ids = hull.vertex_ids;
  g.coords.reserve(ids.size());
  g.basis.reserve(ids.size());
  g.adjacency.assign(ids.size(), {});
  for (int id : ids) {
    g.coords.push_back(cloud.point(std::size_t(id)));
    g.basis.push_back({id});
  }
  auto local = [&](int id) {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    return int(it - ids.begin());
  };
  for (const auto& [a, b] : hull.edges) {
    int la = local(a), lb = local(b);
    g.adjacency[std::size_t(la)].push_back(lb);
    g.adjacency[std::size_t(lb)].push_back(la);
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

void save_hull_csv(const Hull& hull, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("save_hull_csv: cannot open " + path);
  std::fprintf(f, "# spoly-hull v1\n");
  std::fprintf(f, "# n=%d points=%zu facets=%zu\n", hull.dim, hull.point_count,
               hull.facets.size());
  std::fprintf(f, "id,basis,support,normal\n");
  for (std::size_t i = 0; i < hull.facets.size(); ++i) {
    const Facet& facet = hull.facets[i];
    std::fprintf(f, "%zu,", i);
    for (std::size_t k = 0; k < facet.basis.size(); ++k)
      std::fprintf(f, "%s%d", k ? " " : "", facet.basis[k]);
    std::fprintf(f, ",%.17g,", facet.support);
    for (int c = 0; c < hull.dim; ++c)
      std::fprintf(f, "%s%.17g", c ? " " : "", facet.outward_normal[c]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace spoly
