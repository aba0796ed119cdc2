#include "spoly/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "spoly/kernels.hpp"
#include "spoly/rng.hpp"
#include "spoly/sampler.hpp"

namespace spoly {

namespace {

// Lexicographically smallest facet containing each hull edge.
std::map<std::pair<int, int>, int> edge_facet_index(const Hull& hull) {
  std::map<std::pair<int, int>, int> first;
  for (std::size_t fid = 0; fid < hull.facets.size(); ++fid) {
    const auto& basis = hull.facets[fid].basis;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j)
        first.try_emplace({basis[i], basis[j]}, int(fid));
  }
  return first;
}

double chord_from_dot(double d) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * d)); }

// Owner must attain the minimum distance to the cloud at every sample.
void validate_owner(const CurveSample& curve, const PointCloud& cloud, double s_lo,
                    double s_hi, int owner) {
  const VecN own = cloud.point(owner);
  for (int k = 0; k <= 100; ++k) {
    VecN x = curve.eval(s_lo + (s_hi - s_lo) * double(k) / 100.0);
    kern::DotArgMax best = kern::argmax_dot(cloud.soa, x.data());
    double best_dist = chord_from_dot(best.value);
    if (dist(x, own) > best_dist + 1e-9)
      throw DegeneracyError("path_to_curve: segment owner loses the nearest-point check");
  }
}

struct SubseqState {
  std::vector<std::pair<double, VecN>> seq;
  std::string failure;  // nonempty when the window or coverage check failed
};

// Last parameter in [0,1] at which the curve is within eps of x; fallback is
// a parameter known to satisfy the condition.
double last_close_parameter(const CurveSample& f, const VecN& x, double eps, double h,
                            double fallback) {
  auto close = [&](double t) { return dist(f.eval(t), x) <= eps; };
  const long steps = std::lround(1.0 / h);
  for (long k = steps; k >= 0; --k) {
    double t = double(k) / double(steps);
    if (!close(t)) continue;
    if (k == steps) return 1.0;
    double lo = t, hi = double(k + 1) / double(steps);
    while (hi - lo > 1e-9) {
      double mid = 0.5 * (lo + hi);
      (close(mid) ? lo : hi) = mid;
    }
    return std::max(lo, fallback);
  }
  return fallback;
}

SubseqState run_subsequence(const CurveSample& f, const SphericalNet& net, double eps,
                            double h) {
  SubseqState st;
  const VecN start = f.eval(0.0);
  std::vector<std::int32_t> buf;

  // Candidate net points within eps of the curve point and >= 6 eps from x.
  auto candidates = [&](const VecN& at, const VecN& x_prev) {
    buf.clear();
    net.hash.collect_within(at, eps, buf);
    std::vector<std::int32_t> out;
    for (std::int32_t id : buf)
      if (dist(net.points[std::size_t(id)], x_prev) >= 6.0 * eps) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
  };

  VecN x = start;
  st.seq.emplace_back(last_close_parameter(f, x, eps, h, 0.0), x);

  const long steps = std::lround(1.0 / h);
  while (st.seq.size() <= net.points.size() + 1) {
    if (dist(x, f.eval(1.0)) < 7.0 * eps) return st;  // termination clause

    double t_prev = st.seq.back().first;
    long k0 = std::lround(std::ceil(t_prev / h));
    std::optional<double> found;
    double lower = t_prev;
    for (long k = k0; k <= steps; ++k) {
      double t = double(k) / double(steps);
      if (t < t_prev) continue;
      if (!candidates(f.eval(t), x).empty()) {
        found = t;
        break;
      }
      lower = t;
    }
    if (!found) {
      st.failure = "no reachable net point before the curve end (net coverage gap)";
      return st;
    }
    double lo = lower, hi = *found;
    while (hi - lo > 1e-9) {
      double mid = 0.5 * (lo + hi);
      (candidates(f.eval(mid), x).empty() ? lo : hi) = mid;
    }
    VecN at = f.eval(hi);
    std::vector<std::int32_t> cands = candidates(at, x);
    if (cands.empty()) {
      st.failure = "refined crossing lost its witness";
      return st;
    }
    std::int32_t pick = cands.front();
    double pick_dist = dist(net.points[std::size_t(pick)], at);
    for (std::int32_t id : cands) {
      double d = dist(net.points[std::size_t(id)], at);
      if (d < pick_dist - 1e-15) {
        pick = id;
        pick_dist = d;
      }
    }
    VecN next = net.points[std::size_t(pick)];

    double jump = dist(next, x);
    if (jump > 8.0 * eps + 1e-6) {
      st.failure = "jump exceeds the 8 eps window";
      return st;
    }
    double t_next = last_close_parameter(f, next, eps, h, hi);
    if (t_next <= t_prev) {
      st.failure = "parameters failed to increase";
      return st;
    }
    st.seq.emplace_back(t_next, next);
    x = next;
  }
  st.failure = "subsequence exceeded the net size";
  return st;
}

int local_vertex_index(const VertexGraph& hull_graph, const Hull& hull, int point_id) {
  auto it = std::lower_bound(hull.vertex_ids.begin(), hull.vertex_ids.end(), point_id);
  if (it == hull.vertex_ids.end() || *it != point_id)
    throw DomainError("certify_lower_bound: point is not a hull vertex");
  int local = int(it - hull.vertex_ids.begin());
  if (hull_graph.basis[std::size_t(local)] != std::vector<int>{point_id})
    throw DomainError("certify_lower_bound: hull graph does not match the hull");
  return local;
}

}  // namespace

VecN CurveSample::eval(double t) const {
  if (breakpoints.size() < 2 || owners.size() + 1 != breakpoints.size())
    throw DomainError("CurveSample: malformed curve");
  t = std::min(1.0, std::max(0.0, t));
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t,
                             [](double v, const Breakpoint& b) { return v < b.s; });
  std::size_t j = it == breakpoints.begin() ? 0 : std::size_t(it - breakpoints.begin()) - 1;
  j = std::min(j, breakpoints.size() - 2);
  double s0 = breakpoints[j].s, s1 = breakpoints[j + 1].s;
  double tau = s1 > s0 ? (t - s0) / (s1 - s0) : 0.0;
  VecN raw = lerp(breakpoints[j].point, breakpoints[j + 1].point, tau);
  double nr = norm(raw);
  if (nr < 1e-12) throw DegeneracyError("CurveSample: interpolation through the origin");
  return scale(raw, 1.0 / nr);
}

CurveSample path_to_curve(const Hull& hull, const PointCloud& cloud,
                          const std::vector<int>& path) {
  if (path.empty()) throw DomainError("path_to_curve: empty path");
  for (int id : path)
    if (id < 0 || std::size_t(id) >= cloud.count)
      throw DomainError("path_to_curve: point id out of range");

  CurveSample curve;
  if (path.size() == 1) {
    curve.breakpoints = {{0.0, cloud.point(path[0])}, {1.0, cloud.point(path[0])}};
    curve.owners = {path[0]};
    return curve;
  }

  std::map<std::pair<int, int>, int> facet_of = edge_facet_index(hull);
  const std::size_t edges = path.size() - 1;
  curve.breakpoints.push_back({0.0, cloud.point(path[0])});
  for (std::size_t i = 0; i < edges; ++i) {
    int a = path[i], b = path[i + 1];
    auto it = facet_of.find({std::min(a, b), std::max(a, b)});
    if (it == facet_of.end())
      throw NonEdgeError("path_to_curve: consecutive path points do not span a hull edge");
    const Facet& facet = hull.facets[std::size_t(it->second)];
    if (facet.support <= 1e-12)
      throw DegeneracyError("path_to_curve: facet cap center is not outward");
    // The circumscribed cap center of a facet is its outward unit normal:
    // it is equidistant to the basis points and lies in their affine hull
    // after normalization.
    double mid = (double(i) + 0.5) / double(edges);
    double end = double(i + 1) / double(edges);
    curve.breakpoints.push_back({mid, facet.outward_normal});
    curve.breakpoints.push_back({end, cloud.point(b)});
    curve.owners.push_back(a);
    curve.owners.push_back(b);
  }
  curve.breakpoints.back().s = 1.0;

  for (std::size_t seg = 0; seg < curve.owners.size(); ++seg)
    validate_owner(curve, cloud, curve.breakpoints[seg].s, curve.breakpoints[seg + 1].s,
                   curve.owners[seg]);
  return curve;
}

std::vector<std::pair<double, VecN>> curve_subsequence(const CurveSample& f,
                                                       const SphericalNet& net,
                                                       double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("curve_subsequence: epsilon must be positive");
  if (net.points.empty()) throw DomainError("curve_subsequence: empty net");
  VecN start = f.eval(0.0);
  std::int32_t near = net.nearest(start);
  if (dist(net.points[std::size_t(near)], start) > 1e-9)
    throw PreconditionError("curve_subsequence: curve start is not a net point");

  std::string failure;
  for (double h : {1e-4, 1e-5}) {
    SubseqState st = run_subsequence(f, net, epsilon, h);
    if (st.failure.empty()) return st.seq;
    failure = st.failure;
  }
  throw ResolutionError("curve_subsequence: " + failure);
}

LBCertificate certify_lower_bound(const PointCloud& cloud, const Hull& hull,
                                  const VertexGraph& hull_graph, double c6,
                                  std::uint64_t seed) {
  if (!(c6 > 0.0)) throw DomainError("certify_lower_bound: c6 must be positive");
  if (hull_graph.kind != GraphKind::kHull)
    throw DomainError("certify_lower_bound: needs the hull vertex graph");
  const int n = cloud.dim;
  // Clamped so cap measures stay in domain; tiny instances certify 0 anyway.
  double epsilon = std::min(c6 * std::pow(cloud.intensity, -1.0 / double(n - 1)), 1.5);

  Rng rng = Rng::stream(seed, 29);
  int a_plus = int(rng.next_u64() % cloud.count);
  VecN plus = cloud.point(a_plus);

  VecN anti = scale(plus, -1.0);
  kern::DotArgMax deepest = kern::argmax_dot(cloud.soa, anti.data());
  int a_minus = int(deepest.index);
  if (dot(plus, cloud.point(a_minus)) > 0.5)
    throw NoAntipodeError("certify_lower_bound: no point at distance >= 1 from the objective");

  SphericalNet net = greedy_separated_net(n, epsilon, Rng::mix64(seed ^ 0x4e455453ull), &plus);

  std::vector<int> local_path =
      bfs_path(hull_graph, local_vertex_index(hull_graph, hull, a_plus),
               local_vertex_index(hull_graph, hull, a_minus));
  std::vector<int> point_path;
  for (int v : local_path) point_path.push_back(hull_graph.basis[std::size_t(v)][0]);

  CurveSample curve = path_to_curve(hull, cloud, point_path);

  LBCertificate cert(std::move(net));
  cert.a_plus = a_plus;
  cert.a_minus = a_minus;
  cert.epsilon = epsilon;
  cert.sequence = curve_subsequence(curve, cert.net, epsilon);
  cert.k = int(cert.sequence.size()) - 1;
  cert.k0_statement = int(std::ceil(1.0 / (8.0 * epsilon))) - 1;
  cert.k0_proof = int(std::ceil(1.0 / (8.0 * epsilon))) + 1;
  cert.exact_distance = int(point_path.size()) - 1;

  for (const auto& [t, x] : cert.sequence)
    cert.occupied.push_back(occupancy(cloud, SphericalCap{x, epsilon / 2.0}) > 0);
  for (std::size_t i = 0; i + 1 < cert.occupied.size(); ++i)
    if (cert.occupied[i] && cert.occupied[i + 1]) ++cert.pair_count;
  cert.certified_lb = cert.pair_count;

  if (cert.certified_lb > std::size_t(cert.exact_distance))
    throw PreconditionError("certify_lower_bound: certificate exceeded the exact distance");
  return cert;
}

AntipodalStats antipodal_distance_experiment(int n, double m, int trials,
                                             std::uint64_t seed) {
  if (trials < 1) throw DomainError("antipodal_distance_experiment: need at least one trial");
  AntipodalStats stats;
  stats.n = n;
  stats.m = m;
  for (int t = 0; t < trials; ++t) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 8)
        throw DegeneracyError("antipodal_distance_experiment: repeated degenerate instances");
      std::uint64_t s = seed + 999983ull * std::uint64_t(t) + std::uint64_t(attempt);
      try {
        PointCloud cloud = sample_poisson_sphere(n, m, s);
        Hull hull = convex_hull(cloud);
        VertexGraph g = hull_vertex_graph(hull, cloud);
        VecN e1 = VecN::axis(n, 0);
        VecN anti = scale(e1, -1.0);
        int hi = int(kern::argmax_dot(cloud.soa, e1.data()).index);
        int lo = int(kern::argmax_dot(cloud.soa, anti.data()).index);
        auto local = [&](int pid) {
          auto it = std::lower_bound(hull.vertex_ids.begin(), hull.vertex_ids.end(), pid);
          if (it == hull.vertex_ids.end() || *it != pid)
            throw DegeneracyError("antipodal_distance_experiment: extreme point lost");
          return int(it - hull.vertex_ids.begin());
        };
        stats.distances.push_back(bfs_distance(g, local(hi), local(lo)));
        break;
      } catch (const DegeneracyError&) {
        continue;
      } catch (const DomainError&) {
        continue;  // undersized Poisson draw
      }
    }
  }
  std::vector<int> sorted = stats.distances;
  std::sort(sorted.begin(), sorted.end());
  stats.min = sorted.front();
  stats.max = sorted.back();
  stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / double(sorted.size());
  std::size_t mid = sorted.size() / 2;
  stats.median = sorted.size() % 2 ? double(sorted[mid])
                                   : 0.5 * (double(sorted[mid - 1]) + double(sorted[mid]));
  return stats;
}

void save_certificate_csv(const LBCertificate& cert, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("save_certificate_csv: cannot open " + path);
  std::fprintf(f,
               "# spoly-lbcert v1\n# epsilon=%.17g a_plus=%d a_minus=%d k=%d "
               "pair_count=%zu certified_lb=%zu distance=%d\ni,t,occupied,coords\n",
               cert.epsilon, cert.a_plus, cert.a_minus, cert.k, cert.pair_count,
               cert.certified_lb, cert.exact_distance);
  for (std::size_t i = 0; i < cert.sequence.size(); ++i) {
    const auto& [t, x] = cert.sequence[i];
    std::fprintf(f, "%zu,%.17g,%d,", i, t, cert.occupied[i] ? 1 : 0);
    for (int d = 0; d < x.n; ++d)
      std::fprintf(f, "%s%.17g", d ? " " : "", x[d]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace spoly
