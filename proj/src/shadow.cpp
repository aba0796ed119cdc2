#include "spoly/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "spoly/hull.hpp"
#include "spoly/linalg.hpp"
#include "spoly/sampler.hpp"

namespace spoly {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Orthonormal basis of the orthogonal complement of the plane, grown greedily
// from the standard basis vector with the largest residual at each step.
std::vector<VecN> complement_basis(const PlaneSpan& plane) {
  std::vector<VecN> basis = {plane.u1, plane.u2};
  const int n = plane.dim;
  while (int(basis.size()) < n) {
    VecN best;
    double best_norm2 = -1.0;
    for (int k = 0; k < n; ++k) {
      VecN r = VecN::axis(n, k);
      for (const VecN& b : basis) r = sub(r, scale(b, dot(r, b)));
      double n2 = norm2(r);
      if (n2 > best_norm2) {
        best_norm2 = n2;
        best = r;
      }
    }
    if (best_norm2 < 1e-12)
      throw DegeneracyError("complement_basis: residuals collapsed");
    basis.push_back(scale(best, 1.0 / std::sqrt(best_norm2)));
  }
  return std::vector<VecN>(basis.begin() + 2, basis.end());
}

// Midpoint of the arc of objective angles maximized by vertex v, or nullopt
// if the neighbor constraints leave no feasible angle. Each neighbor v' cuts
// the circle to the closed half-circle centered at the angle of v - v'.
std::optional<double> arc_midpoint(const VertexGraph& g, const PlaneSpan& plane, int v) {
  bool have_ref = false;
  double ref = 0.0, lo = -kPi, hi = kPi;
  for (int nb : g.adjacency[std::size_t(v)]) {
    VecN d = sub(g.coords[std::size_t(v)], g.coords[std::size_t(nb)]);
    auto [c, s] = plane.project(d);
    if (c * c + s * s < 1e-28) continue;  // difference orthogonal to the plane
    double phi = std::atan2(s, c);
    if (!have_ref) {
      have_ref = true;
      ref = phi;
      lo = -kPi / 2;
      hi = kPi / 2;
      continue;
    }
    double delta = std::remainder(phi - ref, 2 * kPi);
    lo = std::max(lo, delta - kPi / 2);
    hi = std::min(hi, delta + kPi / 2);
  }
  if (!have_ref) return std::nullopt;  // no neighbor constrains the plane
  if (lo > hi + 1e-9) return std::nullopt;
  double mid = ref + 0.5 * (lo + hi);
  return std::atan2(std::sin(mid), std::cos(mid));
}

void check_plane_graph(const VertexGraph& g, const PlaneSpan& plane) {
  if (g.size() == 0) throw DomainError("shadow: empty vertex graph");
  if (plane.dim != g.dim) throw DomainError("shadow: plane/graph dimension mismatch");
}

// Objective must lie in the plane (up to tolerance) and be nonzero.
double plane_angle_checked(const PlaneSpan& plane, const VecN& w, const char* who) {
  auto [px, py] = plane.project(w);
  VecN r = sub(w, add(scale(plane.u1, px), scale(plane.u2, py)));
  double wn = norm(w);
  if (wn < 1e-15) throw DomainError(std::string(who) + ": zero objective");
  if (norm(r) > 1e-9 * std::max(1.0, wn))
    throw DomainError(std::string(who) + ": objective lies outside the plane");
  return std::atan2(py, px);
}

}  // namespace

PlaneSpan PlaneSpan::from(const VecN& a, const VecN& b) {
  if (a.n != b.n) throw DomainError("PlaneSpan: dimension mismatch");
  require_unit(a, "PlaneSpan");
  require_unit(b, "PlaneSpan");
  if (std::abs(dot(a, b)) > 1e-12) throw DomainError("PlaneSpan: pair is not orthogonal");
  PlaneSpan p;
  p.dim = a.n;
  p.u1 = a;
  p.u2 = b;
  return p;
}

PlaneSpan PlaneSpan::orthonormalized(const VecN& a, const VecN& b) {
  if (a.n != b.n) throw DomainError("PlaneSpan: dimension mismatch");
  double an = norm(a);
  if (an < 1e-15) throw DegeneracyError("PlaneSpan: first direction is zero");
  VecN u1 = scale(a, 1.0 / an);
  VecN r = sub(b, scale(u1, dot(b, u1)));
  double rn = norm(r);
  if (rn < 1e-10 * std::max(1.0, norm(b)))
    throw DegeneracyError("PlaneSpan: directions are collinear");
  PlaneSpan p;
  p.dim = a.n;
  p.u1 = u1;
  p.u2 = scale(r, 1.0 / rn);
  return p;
}

VecN PlaneSpan::direction(double theta) const {
  return add(scale(u1, std::cos(theta)), scale(u2, std::sin(theta)));
}

std::pair<double, double> PlaneSpan::project(const VecN& x) const {
  return {dot(x, u1), dot(x, u2)};
}

double PlaneSpan::angle_of(const VecN& w) const {
  auto [px, py] = project(w);
  if (px * px + py * py < 1e-30)
    throw DomainError("PlaneSpan: objective orthogonal to the plane");
  return std::atan2(py, px);
}

int maximizer(const VertexGraph& g, const VecN& w) {
  if (g.size() == 0) throw DomainError("maximizer: empty graph");
  if (w.n != g.dim) throw DomainError("maximizer: dimension mismatch");
  if (norm(w) < 1e-15) throw DomainError("maximizer: zero objective");
  int best = 0;
  double best_val = dot(w, g.coords[0]);
  for (std::size_t v = 1; v < g.size(); ++v) {
    double val = dot(w, g.coords[v]);
    if (val > best_val) {
      best_val = val;
      best = int(v);
    }
  }
  return best;
}

bool is_shadow_vertex(const VertexGraph& g, const PointCloud& cloud, int v,
                      const PlaneSpan& plane) {
  check_plane_graph(g, plane);
  if (g.kind != GraphKind::kPolar)
    throw DomainError("is_shadow_vertex: needs a polar vertex graph");
  if (cloud.dim != g.dim) throw DomainError("is_shadow_vertex: cloud dimension mismatch");
  if (v < 0 || std::size_t(v) >= g.size()) throw DomainError("is_shadow_vertex: bad vertex id");
  const int n = g.dim;
  const std::vector<int>& basis = g.basis[std::size_t(v)];
  if (int(basis.size()) != n)
    throw DomainError("is_shadow_vertex: vertex basis is not simple");

  // Feasibility of: lambda >= 0, sum lambda = 1, sum lambda * a inside the
  // plane, away from zero. The feasible set is a segment whose endpoints have
  // some lambda_i = 0, so it is nonempty iff some leave-one-out basic
  // solution is nonnegative.
  std::vector<VecN> zs = complement_basis(plane);
  std::vector<VecN> normals;
  normals.reserve(std::size_t(n));
  for (int id : basis) normals.push_back(cloud.point(id));

  const int order = n - 1;
  for (int leave = 0; leave < n; ++leave) {
    SquareMatrix m(order);
    std::vector<double> rhs(std::size_t(order), 0.0);
    rhs.back() = 1.0;
    int col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == leave) continue;
      for (int r = 0; r + 1 < order; ++r) m.at(r, col) = dot(zs[std::size_t(r)], normals[std::size_t(j)]);
      m.at(order - 1, col) = 1.0;
      ++col;
    }
    std::vector<double> lambda;
    try {
      lambda = solve_linear(m, rhs);
    } catch (const DegeneracyError&) {
      continue;  // segment parallel to this simplex facet
    }
    if (*std::min_element(lambda.begin(), lambda.end()) < -1e-9) continue;
    VecN x{};
    x.n = n;
    col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == leave) continue;
      x = add(x, scale(normals[std::size_t(j)], lambda[std::size_t(col)]));
      ++col;
    }
    auto [px, py] = plane.project(x);
    if (px * px + py * py > 1e-18) return true;
  }
  return false;
}

ShadowRecord shadow_record(const VertexGraph& g, const PointCloud& cloud,
                           const PlaneSpan& plane) {
  check_plane_graph(g, plane);
  ShadowRecord rec;
  rec.plane = plane;
  std::vector<std::pair<double, int>> ordered;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!is_shadow_vertex(g, cloud, int(v), plane)) continue;
    std::optional<double> mid = arc_midpoint(g, plane, int(v));
    if (!mid)
      throw DegeneracyError("shadow_record: shadow vertex without a feasible objective arc");
    ordered.emplace_back(*mid, int(v));
  }
  std::sort(ordered.begin(), ordered.end());
  for (auto& [ang, id] : ordered) {
    rec.angles.push_back(ang);
    rec.shadow_vertex_ids.push_back(id);
  }
  rec.size = rec.shadow_vertex_ids.size();

  for (std::size_t i = 0; rec.size >= 2 && i < rec.size; ++i) {
    int a = rec.shadow_vertex_ids[i];
    int b = rec.shadow_vertex_ids[(i + 1) % rec.size];
    const auto& adj = g.adjacency[std::size_t(a)];
    if (!std::binary_search(adj.begin(), adj.end(), b))
      throw AdjacencyViolationError("shadow_record: consecutive shadow vertices not adjacent");
  }
  return rec;
}

std::vector<int> shadow_path(const VertexGraph& g, const PointCloud& cloud,
                             const PlaneSpan& plane, const VecN& w1, const VecN& w2) {
  check_plane_graph(g, plane);
  double t1 = plane_angle_checked(plane, w1, "shadow_path");
  double t2 = plane_angle_checked(plane, w2, "shadow_path");
  int v1 = maximizer(g, w1);
  int v2 = maximizer(g, w2);
  if (v1 == v2) return {v1};

  ShadowRecord rec = shadow_record(g, cloud, plane);
  auto index_of = [&rec](int id) {
    for (std::size_t i = 0; i < rec.size; ++i)
      if (rec.shadow_vertex_ids[i] == id) return long(i);
    return -1L;
  };
  long i1 = index_of(v1), i2 = index_of(v2);
  if (i1 < 0 || i2 < 0)
    throw AdjacencyViolationError("shadow_path: objective maximizer missing from shadow record");

  int step = std::remainder(t2 - t1, 2 * kPi) >= 0 ? 1 : -1;
  std::vector<int> path = {v1};
  long idx = i1;
  for (std::size_t guard = 0; idx != i2; ++guard) {
    if (guard > rec.size)
      throw AdjacencyViolationError("shadow_path: walk failed to reach the target");
    idx = (idx + step + long(rec.size)) % long(rec.size);
    path.push_back(rec.shadow_vertex_ids[std::size_t(idx)]);
  }
  return path;
}

std::vector<int> monotone_local_path(const VertexGraph& g, const VecN& w, const VecN& w2) {
  if (g.size() == 0) throw DomainError("monotone_local_path: empty graph");
  int v0 = maximizer(g, w);
  int v2 = maximizer(g, w2);
  double threshold = dot(w2, g.coords[std::size_t(v0)]) - 1e-12;

  std::vector<int> parent(g.size(), -2);
  std::queue<int> frontier;
  parent[std::size_t(v0)] = -1;
  frontier.push(v0);
  while (!frontier.empty() && parent[std::size_t(v2)] == -2) {
    int u = frontier.front();
    frontier.pop();
    for (int nb : g.adjacency[std::size_t(u)]) {
      if (parent[std::size_t(nb)] != -2) continue;
      if (dot(w2, g.coords[std::size_t(nb)]) < threshold) continue;
      parent[std::size_t(nb)] = u;
      frontier.push(nb);
    }
  }
  if (parent[std::size_t(v2)] == -2)
    throw UnreachableVertexError("monotone_local_path: superlevel set disconnected");
  std::vector<int> path;
  for (int v = v2; v != -1; v = parent[std::size_t(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

LocalityEvent check_locality_event(const PointCloud& cloud, const VecN& x, const VecN& y,
                                   double epsilon, double p) {
  require_unit(x, "check_locality_event");
  require_unit(y, "check_locality_event");
  if (x.n != cloud.dim || y.n != cloud.dim)
    throw DomainError("check_locality_event: dimension mismatch");
  if (!(epsilon > 0.0) || !(p > 0.0 && p < 1.0))
    throw DomainError("check_locality_event: epsilon and p must be positive (p < 1)");

  LocalityEvent ev;
  ev.x = x;
  ev.y = y;
  ev.epsilon = epsilon;
  ev.p = p;
  ev.occupancy_threshold = density_thresholds(cloud.intensity, cloud.dim, p).local_occupancy;

  double reach = std::min(2.0, dist(x, y) + 4.0 * epsilon);
  ev.dense_ok = is_dense_for(cloud, SphericalCap{x, reach}, epsilon).dense;

  double cap_radius = (2.0 + 2.0 / cloud.dim) * epsilon;
  for (int k = 0; k <= 100; ++k) {
    VecN z = lerp(x, y, double(k) / 100.0);
    double zn = norm(z);
    if (zn < 1e-12) continue;  // segment passes through the origin
    std::size_t count = occupancy(cloud, SphericalCap{scale(z, 1.0 / zn), cap_radius});
    ev.max_occupancy = std::max(ev.max_occupancy, count);
  }
  ev.occupancy_ok = double(ev.max_occupancy) <= ev.occupancy_threshold;
  return ev;
}

LocalityReport verify_tight_constraint_locality(const VertexGraph& g, const PointCloud& cloud,
                                                const VecN& w1, const VecN& w2, double epsilon) {
  require_unit(w1, "verify_tight_constraint_locality");
  require_unit(w2, "verify_tight_constraint_locality");
  if (g.kind != GraphKind::kPolar)
    throw DomainError("verify_tight_constraint_locality: needs a polar vertex graph");
  double gap = dist(w1, w2);
  if (gap > epsilon + 1e-12)
    throw PreconditionError("verify_tight_constraint_locality: ||w1 - w2|| exceeds epsilon");

  LocalityReport rep;
  rep.distance_bound = 2.0 * epsilon + gap;
  rep.norm_bound = 1.0 / (1.0 - epsilon * epsilon / 2.0) + 1e-9;
  for (int i = 0; i <= 10; ++i) {
    VecN w = normalized(lerp(w1, w2, double(i) / 10.0));
    std::vector<int> path = monotone_local_path(g, w, w2);
    ++rep.paths;
    for (int v : path) {
      ++rep.vertices;
      rep.max_vertex_norm = std::max(rep.max_vertex_norm, norm(g.coords[std::size_t(v)]));
      for (int id : g.basis[std::size_t(v)])
        rep.max_constraint_distance =
            std::max(rep.max_constraint_distance, dist(w2, cloud.point(id)));
    }
  }
  rep.clean = rep.max_constraint_distance <= rep.distance_bound + 1e-9 &&
              rep.max_vertex_norm <= rep.norm_bound;
  return rep;
}

StitchedPath stitched_diameter_path(const VertexGraph& g, const PointCloud& cloud,
                                    const SphericalNet& net, const VecN& w, double p) {
  require_unit(w, "stitched_diameter_path");
  if (net.dim != g.dim) throw DomainError("stitched_diameter_path: net dimension mismatch");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("stitched_diameter_path: p must be in (0,1)");
  if (net.points.empty()) throw DomainError("stitched_diameter_path: empty net");

  const VecN e1 = VecN::axis(g.dim, 0);
  VecN n_w = net.points[std::size_t(net.nearest(w))];

  PlaneSpan plane;
  if (std::abs(dot(e1, n_w)) > 1.0 - 1e-10) {
    plane = PlaneSpan::orthonormalized(e1, VecN::axis(g.dim, 1));
  } else {
    plane = PlaneSpan::orthonormalized(e1, n_w);
  }
  // Snap the net direction into the plane so both segments share one target
  // objective; this is exact except in the collinear fallback above.
  auto [px, py] = plane.project(n_w);
  VecN w_mid = normalized(add(scale(plane.u1, px), scale(plane.u2, py)));

  std::vector<int> seg1 = monotone_local_path(g, w, w_mid);
  std::vector<int> seg2 = shadow_path(g, cloud, plane, w_mid, e1);
  if (seg1.back() != seg2.front())
    throw AdjacencyViolationError("stitched_diameter_path: segment junction mismatch");

  StitchedPath out;
  out.path = seg1;
  out.path.insert(out.path.end(), seg2.begin() + 1, seg2.end());
  out.segment_lengths = {seg1.size() - 1, seg2.size() - 1};
  out.length = out.segment_lengths[0] + out.segment_lengths[1];
  out.local_bound = density_thresholds(cloud.intensity, g.dim, p).path_bound;

  for (std::size_t i = 0; i + 1 < out.path.size(); ++i) {
    const auto& adj = g.adjacency[std::size_t(out.path[i])];
    if (!std::binary_search(adj.begin(), adj.end(), out.path[i + 1]))
      throw AdjacencyViolationError("stitched_diameter_path: concatenated path broken");
  }
  return out;
}

ShadowSizeStats shadow_size_stats(int n, double m, const PlaneSpan& plane, int trials,
                                  double p, std::uint64_t seed, const TailParams& params) {
  if (trials < 2) throw DomainError("shadow_size_stats: need at least two trials");
  if (plane.dim != n) throw DomainError("shadow_size_stats: plane dimension mismatch");

  ShadowSizeStats stats;
  for (int t = 0; t < trials; ++t) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 8)
        throw DegeneracyError("shadow_size_stats: repeated degenerate instances");
      std::uint64_t s = seed + 1000003ull * std::uint64_t(t) + std::uint64_t(attempt);
      try {
        PointCloud cloud = sample_poisson_sphere(n, m, s);
        Hull hull = convex_hull(cloud);
        if (!contains_origin(hull)) continue;
        VertexGraph polar = polar_vertex_graph(hull, cloud);
        ShadowRecord rec = shadow_record(polar, cloud, plane);
        stats.sizes.push_back(rec.size);
        break;
      } catch (const DegeneracyError&) {
        continue;
      } catch (const AdjacencyViolationError&) {
        continue;  // numerically suspect record; resample
      } catch (const DomainError&) {
        continue;  // undersized Poisson draw
      }
    }
  }
  double sum = std::accumulate(stats.sizes.begin(), stats.sizes.end(), 0.0);
  stats.mean = sum / double(stats.sizes.size());
  for (std::size_t s : stats.sizes)
    stats.max_deviation = std::max(stats.max_deviation, std::abs(double(s) - stats.mean));
  stats.t_p = t_p_eval(m, n, p, u_shadow_size(n, p, params.u_const), params);
  return stats;
}

void save_shadow_csv(const ShadowRecord& rec, const VertexGraph& g, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("save_shadow_csv: cannot open " + path);
  std::fprintf(f, "# spoly-shadow v1\n# n=%d size=%zu\nid,angle,px,py\n", rec.plane.dim,
               rec.size);
  for (std::size_t i = 0; i < rec.size; ++i) {
    int id = rec.shadow_vertex_ids[i];
    auto [px, py] = rec.plane.project(g.coords[std::size_t(id)]);
    std::fprintf(f, "%d,%.17g,%.17g,%.17g\n", id, rec.angles[i], px, py);
  }
  std::fclose(f);
}

}  // namespace spoly
