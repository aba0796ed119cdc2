#include "spoly/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "spoly/hull.hpp"
#include "spoly/kernels.hpp"
#include "spoly/lower_bound.hpp"
#include "spoly/polytope_graph.hpp"
#include "spoly/prob_bounds.hpp"
#include "spoly/sampler.hpp"
#include "spoly/shadow.hpp"
#include "spoly/sphere_geom.hpp"
#include "spoly/svg.hpp"

namespace spoly {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw DomainError("");
    return x;
  } catch (...) {
    throw DomainError("config: bad numeric value '" + v + "' for " + key);
  }
}

// Per-kind data shared across trials, built once before the pool starts.
struct SharedCtx {
  std::map<double, double> epsilons;           // density, stitch: solve_epsilon per m
  std::map<double, SphericalNet> probes;       // density: eps/10 full-sphere probes
  std::map<double, SphericalNet> occ_centers;  // density: eps/2 proxy centers
};

struct TrialOutcome {
  std::vector<double> values;
  std::size_t violations = 0;
};

struct Instance {
  PointCloud cloud;
  Hull hull;
};

Instance make_instance(int n, double m, std::uint64_t seed) {
  Instance inst;
  inst.cloud = sample_poisson_sphere(n, m, seed);
  inst.hull = convex_hull(inst.cloud);
  return inst;
}

// ---- hull-validate ---------------------------------------------------------

TrialOutcome run_hull_validate(const ExperimentConfig& cfg, double m, std::uint64_t seed) {
  Instance inst = make_instance(cfg.n, m, seed);
  const Hull& hull = inst.hull;
  double v = double(hull.vertex_ids.size());
  double e = double(hull.edges.size());
  double f = double(hull.facets.size());
  double euler = 0.0, ridge = 0.0;
  if (cfg.n == 3) {
    euler = std::abs(v - e + f - 2.0);
    ridge = std::abs(2.0 * e - 3.0 * f);
  }
  double outside = 0.0;
  for (const Facet& facet : hull.facets)
    outside += double(kern::count_dot_ge(inst.cloud.soa, facet.outward_normal.data(),
                                         facet.support + cfg.tolerance));
  bool origin = contains_origin(hull);

  TrialOutcome out;
  out.values = {double(inst.cloud.count), v,       e,
                f,                        euler,   ridge,
                outside,                  origin ? 1.0 : 0.0};
  out.violations = std::size_t(euler != 0.0) + std::size_t(ridge != 0.0) +
                   std::size_t(outside > 0.0) + std::size_t(!origin);
  return out;
}

// ---- shadow-scaling --------------------------------------------------------

TrialOutcome run_shadow_scaling(const ExperimentConfig& cfg, double m, std::uint64_t seed,
                                const std::string& svg_path) {
  Instance inst = make_instance(cfg.n, m, seed);
  VertexGraph g = polar_vertex_graph(inst.hull, inst.cloud);
  PlaneSpan plane = PlaneSpan::from(VecN::axis(cfg.n, 0), VecN::axis(cfg.n, 1));
  ShadowRecord rec = shadow_record(g, inst.cloud, plane);
  if (!svg_path.empty()) save_shadow_svg(rec, g, svg_path);

  TrialOutcome out;
  out.values = {double(inst.cloud.count), double(rec.size)};
  return out;
}

// ---- diameter-relation -----------------------------------------------------

TrialOutcome run_diameter_relation(const ExperimentConfig& cfg, double m, std::uint64_t seed) {
  Instance inst = make_instance(cfg.n, m, seed);
  VertexGraph polar = polar_vertex_graph(inst.hull, inst.cloud);
  VertexGraph hullg = hull_vertex_graph(inst.hull, inst.cloud);
  DiameterRelation rel = diameter_relation_check(polar, hullg);

  std::vector<int> path = bfs_path(polar, rel.polar.witness_u, rel.polar.witness_v);
  auto exclusive = [&](std::size_t at) -> int {
    for (int c : polar.basis[std::size_t(path[at])]) {
      bool elsewhere = false;
      for (std::size_t i = 0; i < path.size() && !elsewhere; ++i) {
        if (i == at) continue;
        const auto& b = polar.basis[std::size_t(path[i])];
        elsewhere = std::binary_search(b.begin(), b.end(), c);
      }
      if (!elsewhere) return c;
    }
    return -1;
  };
  int a1 = exclusive(0);
  int a2 = exclusive(path.size() - 1);
  double walk_len = 0.0;
  bool walk_ok = true;
  bool tested = false;
  if (path.size() >= 2 && a1 >= 0 && a2 >= 0 && a1 != a2) {
    DualWalk dw = extract_dual_walk(polar, path, a1, a2);
    walk_len = double(dw.walk.size()) - 1.0;  // L: edge count of u_0..u_L
    walk_ok = walk_len <= double(rel.polar.diameter) / double(cfg.n - 1) + 2.0 + 1e-12;
    tested = true;
  }

  TrialOutcome out;
  out.values = {double(inst.cloud.count), double(rel.polar.diameter),
                double(rel.hull.diameter), rel.holds ? 1.0 : 0.0,
                walk_len,                  walk_ok ? 1.0 : 0.0,
                tested ? 1.0 : 0.0};
  out.violations = std::size_t(!rel.holds) + std::size_t(tested && !walk_ok);
  return out;
}

// ---- density ---------------------------------------------------------------

TrialOutcome run_density(const ExperimentConfig& cfg, double m, std::uint64_t seed,
                         const SharedCtx& shared) {
  PointCloud cloud = sample_poisson_sphere(cfg.n, m, seed);
  double eps = shared.epsilons.at(m);
  SphericalCap full = SphericalCap::full_sphere(cfg.n);
  bool dense = is_dense_for(cloud, full, eps, &shared.probes.at(m)).dense;

  const SphericalNet& centers = shared.occ_centers.at(m);
  double base = density_thresholds(m, cfg.n, cfg.p).occupancy_base;
  double occ1 = double(occupancy_sup_proxy(cloud, eps, centers));
  double occ2 = double(occupancy_sup_proxy(cloud, 2.0 * eps, centers));
  bool ok1 = occ1 <= base;
  bool ok2 = occ2 <= base * std::pow(2.0, cfg.n - 1);

  TrialOutcome out;
  out.values = {double(cloud.count), eps,           dense ? 1.0 : 0.0, occ1, occ2,
                ok1 ? 1.0 : 0.0,     ok2 ? 1.0 : 0.0};
  return out;  // frequency judgements happen downstream, no hard violations
}

// ---- lb-certify ------------------------------------------------------------

TrialOutcome run_lb_certify(const ExperimentConfig& cfg, double m, std::uint64_t seed,
                            const std::string& svg_path) {
  Instance inst = make_instance(cfg.n, m, seed);
  VertexGraph hullg = hull_vertex_graph(inst.hull, inst.cloud);
  LBCertificate cert = certify_lower_bound(inst.cloud, inst.hull, hullg, cfg.c6, seed);
  bool sound = double(cert.certified_lb) <= double(cert.exact_distance);

  if (!svg_path.empty() && cfg.n == 3) {
    const auto& ids = inst.hull.vertex_ids;
    auto local = [&](int pid) {
      return int(std::lower_bound(ids.begin(), ids.end(), pid) - ids.begin());
    };
    std::vector<int> path = bfs_path(hullg, local(cert.a_plus), local(cert.a_minus));
    CurveSample curve = path_to_curve(inst.hull, inst.cloud, path);
    save_certificate_svg(cert, curve, svg_path);
  }

  TrialOutcome out;
  out.values = {double(inst.cloud.count), cert.epsilon,
                double(cert.k),           double(cert.pair_count),
                double(cert.certified_lb), double(cert.exact_distance),
                sound ? 1.0 : 0.0};
  out.violations = std::size_t(!sound);
  return out;
}

// ---- stitch ----------------------------------------------------------------

TrialOutcome run_stitch(const ExperimentConfig& cfg, double m, std::uint64_t seed,
                        const std::string& svg_path) {
  Instance inst = make_instance(cfg.n, m, seed);
  VertexGraph polar = polar_vertex_graph(inst.hull, inst.cloud);
  double eps = solve_epsilon(m, cfg.n, cfg.p).epsilon;
  VecN e1 = VecN::axis(cfg.n, 0);
  SphericalNet net =
      greedy_separated_net(cfg.n, eps, Rng::mix64(seed ^ 0x4e455453ull), &e1);

  int diam = diameter(polar).diameter;
  Rng rng = Rng::stream(seed, 91);
  std::size_t max_len = 0;
  std::size_t objective_failures = 0;
  for (int j = 0; j < cfg.objectives; ++j) {
    VecN w = random_unit(rng, cfg.n);
    try {
      StitchedPath sp = stitched_diameter_path(polar, inst.cloud, net, w, cfg.p);
      max_len = std::max(max_len, sp.length);
      if (j == 0 && !svg_path.empty()) {
        VecN n_w = net.points[std::size_t(net.nearest(w))];
        PlaneSpan plane = std::abs(dot(e1, n_w)) > 1.0 - 1e-10
                              ? PlaneSpan::orthonormalized(e1, VecN::axis(cfg.n, 1))
                              : PlaneSpan::orthonormalized(e1, n_w);
        save_stitched_svg(sp, polar, plane, svg_path);
      }
    } catch (const std::runtime_error&) {
      ++objective_failures;
    }
  }
  bool bound_ok = objective_failures == 0 && max_len > 0 &&
                  double(diam) <= 2.0 * double(max_len);

  TrialOutcome out;
  out.values = {double(inst.cloud.count), double(diam), double(max_len),
                double(cfg.objectives - int(objective_failures)), bound_ok ? 1.0 : 0.0};
  out.violations = objective_failures + std::size_t(!bound_ok);
  return out;
}

// ---- tails -----------------------------------------------------------------

// Rows are (family, index): 0 Poisson exact vs analytic, 1 Bernoulli-sum
// deviation frequency vs Bernstein, 2 empirical variance vs Bhatia-Davis.
void run_tails(const ExperimentConfig& cfg, std::vector<ExperimentRecord>& records,
               std::size_t& violations) {
  int idx[3] = {0, 0, 0};
  auto push = [&](int family, double a, double b, double empirical, double bound) {
    bool dominated = empirical <= bound + 1e-12;
    ExperimentRecord rec;
    rec.m = double(family);
    rec.trial = idx[family]++;
    rec.seed = cfg.seed;
    rec.values = {a, b, empirical, bound, dominated ? 1.0 : 0.0};
    records.push_back(std::move(rec));
    violations += std::size_t(!dominated);
  };

  for (double lambda : {1.0, 10.0, 100.0, 1000.0}) {
    for (double t : {1.0, 2.0, 3.0, 4.0, 6.0}) {
      double x = std::ceil(t * std::sqrt(lambda));
      double upper = poisson_upper_tail(lambda, lambda + x);
      double lower = lambda - x > 0.0   ? poisson_lower_tail(lambda, lambda - x)
                     : lambda - x == 0.0 ? std::exp(-lambda)
                                          : 0.0;
      push(0, lambda, x, std::max(upper, lower), poisson_tail_bound(lambda, x));
    }
  }

  // 400 Bernoulli(1/4) variables, read either as 400 singletons or as 200
  // bounded pairs; both parameterizations must dominate the same frequencies.
  const int kSims = 20000, kTerms = 400;
  const double q = 0.25, mean = kTerms * q;
  std::vector<double> devs(kSims);
  Rng rng(Rng::mix64(cfg.seed ^ 0x4245524eull));
  for (int s = 0; s < kSims; ++s) {
    int count = 0;
    for (int i = 0; i < kTerms; ++i) count += rng.uniform() < q;
    devs[std::size_t(s)] = std::abs(double(count) - mean);
  }
  for (double t : {15.0, 25.0, 35.0}) {
    double freq = double(kern::count_ge(devs.data(), devs.size(), t)) / kSims;
    push(1, t, 1.0, freq, bernstein_bound(kTerms, 1.0, q * (1 - q), 1.0, t));
    push(1, t, 2.0, freq, bernstein_bound(kTerms / 2, 2.0, 2.0 * q * (1 - q), 1.0, t));
  }

  for (double M : {1.0, 4.0}) {
    for (int shape = 0; shape < 2; ++shape) {
      Rng draw(Rng::mix64(cfg.seed ^ (0x42440000ull + std::uint64_t(shape) + 16 * std::uint64_t(M))));
      double s1 = 0.0, s2 = 0.0;
      const int kDraws = 20000;
      for (int i = 0; i < kDraws; ++i) {
        double u = draw.uniform();
        double x = M * (shape == 0 ? u : u * u);
        s1 += x;
        s2 += x * x;
      }
      double mu = s1 / kDraws;
      double var = s2 / kDraws - mu * mu;
      push(2, M, double(shape), var, bhatia_davis_bound(mu, M));
    }
  }
}

std::vector<std::string> columns_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kHullValidate:
      return {"M",           "vertices", "edges",          "facets",
              "euler_defect", "ridge_defect", "outside_points", "origin_ok"};
    case ExperimentKind::kShadowScaling:
      return {"M", "shadow_size"};
    case ExperimentKind::kDiameterRelation:
      return {"M",        "diam_polar", "diam_hull", "relation_ok",
              "walk_len", "walk_ok",    "walk_tested"};
    case ExperimentKind::kDensity:
      return {"M", "epsilon", "dense", "occ_t1", "occ_t2", "occ1_ok", "occ2_ok"};
    case ExperimentKind::kLbCertify:
      return {"M",          "epsilon",      "k",    "pair_count",
              "certified_lb", "exact_distance", "sound"};
    case ExperimentKind::kStitch:
      return {"M", "diam_polar", "max_stitched", "objectives_done", "bound_ok"};
    case ExperimentKind::kTails:
      return {"a", "b", "empirical", "bound", "dominated"};
  }
  throw DomainError("columns_for: unknown experiment kind");
}

std::vector<std::string> fit_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kShadowScaling:
      return {"shadow_size"};
    case ExperimentKind::kLbCertify:
      return {"certified_lb", "exact_distance"};
    case ExperimentKind::kStitch:
      return {"diam_polar", "max_stitched"};
    case ExperimentKind::kDiameterRelation:
      return {"diam_polar", "diam_hull"};
    default:
      return {};
  }
}

SharedCtx build_shared(const ExperimentConfig& cfg) {
  SharedCtx shared;
  if (cfg.kind == ExperimentKind::kDensity) {
    SphericalCap full = SphericalCap::full_sphere(cfg.n);
    for (double m : cfg.m_list) {
      double eps = solve_epsilon(m, cfg.n, cfg.p).epsilon;
      shared.epsilons.emplace(m, eps);
      shared.probes.emplace(m, cap_probe_net(cfg.n, full, eps));
      shared.occ_centers.emplace(
          m, greedy_separated_net(cfg.n, eps / 2.0,
                                  Rng::mix64(cfg.seed ^ std::bit_cast<std::uint64_t>(m))));
    }
  }
  return shared;
}

std::string config_header(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# experiment=" << experiment_name(cfg.kind) << " n=" << cfg.n
     << " trials=" << cfg.trials << " p=" << fmt17(cfg.p) << " seed=" << cfg.seed
     << " c1=" << fmt17(cfg.c1) << " c2=" << fmt17(cfg.c2) << " c6=" << fmt17(cfg.c6)
     << " tolerance=" << fmt17(cfg.tolerance) << " objectives=" << cfg.objectives << " m=";
  for (std::size_t i = 0; i < cfg.m_list.size(); ++i)
    os << (i ? "," : "") << fmt17(cfg.m_list[i]);
  return os.str();
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "hull-validate") return ExperimentKind::kHullValidate;
  if (name == "shadow-scaling") return ExperimentKind::kShadowScaling;
  if (name == "diameter-relation") return ExperimentKind::kDiameterRelation;
  if (name == "density") return ExperimentKind::kDensity;
  if (name == "lb-certify") return ExperimentKind::kLbCertify;
  if (name == "stitch") return ExperimentKind::kStitch;
  if (name == "tails") return ExperimentKind::kTails;
  throw DomainError("unknown experiment kind '" + name + "'");
}

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kHullValidate: return "hull-validate";
    case ExperimentKind::kShadowScaling: return "shadow-scaling";
    case ExperimentKind::kDiameterRelation: return "diameter-relation";
    case ExperimentKind::kDensity: return "density";
    case ExperimentKind::kLbCertify: return "lb-certify";
    case ExperimentKind::kStitch: return "stitch";
    case ExperimentKind::kTails: return "tails";
  }
  throw DomainError("experiment_name: unknown kind");
}

void ExperimentConfig::validate() const {
  if (n < 2 || n > kMaxDim) throw DomainError("config: n outside [2, 8]");
  if (m_list.empty()) throw DomainError("config: empty m list");
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    if (!(m_list[i] > 0.0)) throw DomainError("config: m values must be positive");
    if (i && !(m_list[i] > m_list[i - 1]))
      throw DomainError("config: m list must be strictly ascending");
  }
  if (trials < 1) throw DomainError("config: trials must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("config: p outside (0,1)");
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(c6 > 0.0))
    throw DomainError("config: constants must be positive");
  if (!(tolerance > 0.0)) throw DomainError("config: tolerance must be positive");
  if (objectives < 1) throw DomainError("config: objectives must be >= 1");
  if (jobs < 1) throw DomainError("config: jobs must be >= 1");
  if (out_dir.empty()) throw DomainError("config: empty output directory");
}

void apply_config_kv(ExperimentConfig& config, const std::string& key,
                     const std::string& value) {
  std::string k = trim(key), v = trim(value);
  if (k == "experiment") {
    config.kind = experiment_from_name(v);
  } else if (k == "n") {
    config.n = int(parse_double(v, k));
  } else if (k == "m") {
    std::vector<double> ms;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) ms.push_back(parse_double(trim(item), k));
    config.m_list = std::move(ms);
  } else if (k == "trials") {
    config.trials = int(parse_double(v, k));
  } else if (k == "p") {
    config.p = parse_double(v, k);
  } else if (k == "seed") {
    config.seed = std::uint64_t(parse_double(v, k));
  } else if (k == "c1") {
    config.c1 = parse_double(v, k);
  } else if (k == "c2") {
    config.c2 = parse_double(v, k);
  } else if (k == "c6") {
    config.c6 = parse_double(v, k);
  } else if (k == "tolerance") {
    config.tolerance = parse_double(v, k);
  } else if (k == "objectives") {
    config.objectives = int(parse_double(v, k));
  } else if (k == "jobs") {
    config.jobs = int(parse_double(v, k));
  } else if (k == "svg") {
    if (v == "1" || v == "true" || v == "yes") config.svg = true;
    else if (v == "0" || v == "false" || v == "no") config.svg = false;
    else throw DomainError("config: bad boolean '" + v + "' for svg");
  } else if (k == "out") {
    config.out_dir = v;
  } else {
    throw DomainError("config: unknown key '" + k + "'");
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("config: cannot open " + path);
  ExperimentConfig config;
  std::string line;
  while (std::getline(is, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config: expected key = value, got '" + line + "'");
    apply_config_kv(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples) {
  std::map<double, std::pair<double, std::size_t>> agg;
  for (const auto& [m, y] : samples) {
    if (!(m > 0.0)) throw DomainError("fit_exponent: m must be positive");
    auto& slot = agg[m];
    slot.first += y;
    slot.second += 1;
  }
  if (agg.size() < 3)
    throw InsufficientDataError("fit_exponent: need >= 3 distinct m values");
  std::vector<double> lx, ly;
  for (const auto& [m, slot] : agg) {
    double mean = slot.first / double(slot.second);
    if (!(mean > 0.0))
      throw InsufficientDataError("fit_exponent: nonpositive mean at m=" + fmt17(m));
    lx.push_back(std::log(m));
    ly.push_back(std::log(mean));
  }
  double k = double(lx.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) sx += lx[i], sy += ly[i];
  double mx = sx / k, my = sy / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 1e-30) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.columns = columns_for(config.kind);

  if (config.kind == ExperimentKind::kTails) {
    run_tails(config, result.records, result.violations);
    return result;
  }

  if (config.svg) std::filesystem::create_directories(config.out_dir);
  SharedCtx shared = build_shared(config);

  struct Item {
    double m = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string svg_path;
  };
  std::vector<Item> items;
  for (std::size_t mi = 0; mi < config.m_list.size(); ++mi) {
    for (int t = 0; t < config.trials; ++t) {
      Item item;
      item.m = config.m_list[mi];
      item.trial = t;
      item.seed = Rng::mix64(config.seed ^ (0x9e3779b97f4a7c15ull * (mi + 1) +
                                            0x100000001b3ull * std::uint64_t(t + 1)));
      if (config.svg && t == 0 && mi + 1 == config.m_list.size())
        item.svg_path = config.out_dir + "/" + experiment_name(config.kind) + ".svg";
      items.push_back(std::move(item));
    }
  }

  std::vector<std::optional<ExperimentRecord>> slots(items.size());
  std::vector<std::string> logs(items.size());
  std::atomic<std::size_t> cursor{0}, violations{0}, failures{0};

  auto worker = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= items.size()) return;
      const Item& item = items[i];
      auto t0 = std::chrono::steady_clock::now();
      try {
        TrialOutcome out;
        switch (config.kind) {
          case ExperimentKind::kHullValidate:
            out = run_hull_validate(config, item.m, item.seed);
            break;
          case ExperimentKind::kShadowScaling:
            out = run_shadow_scaling(config, item.m, item.seed, item.svg_path);
            break;
          case ExperimentKind::kDiameterRelation:
            out = run_diameter_relation(config, item.m, item.seed);
            break;
          case ExperimentKind::kDensity:
            out = run_density(config, item.m, item.seed, shared);
            break;
          case ExperimentKind::kLbCertify:
            out = run_lb_certify(config, item.m, item.seed, item.svg_path);
            break;
          case ExperimentKind::kStitch:
            out = run_stitch(config, item.m, item.seed, item.svg_path);
            break;
          case ExperimentKind::kTails:
            return;  // handled above
        }
        ExperimentRecord rec;
        rec.m = item.m;
        rec.trial = item.trial;
        rec.seed = item.seed;
        rec.values = std::move(out.values);
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        violations += out.violations;
        slots[i] = std::move(rec);
      } catch (const std::exception& e) {
        failures += 1;
        logs[i] = std::string(experiment_name(config.kind)) + " m=" + fmt17(item.m) +
                  " trial=" + std::to_string(item.trial) + ": " + e.what();
      }
    }
  };

  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t pool = std::min<std::size_t>(std::size_t(std::min<unsigned>(unsigned(config.jobs), hw * 2)),
                                           items.size());
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) result.records.push_back(std::move(*slots[i]));
    else if (!logs[i].empty()) result.failure_log.push_back(std::move(logs[i]));
  }
  result.violations = violations.load();
  result.failures = failures.load();
  return result;
}

std::vector<std::pair<double, double>> metric_samples(const ExperimentResult& result,
                                                      const std::string& column) {
  auto it = std::find(result.columns.begin(), result.columns.end(), column);
  if (it == result.columns.end()) throw DomainError("metric_samples: unknown column " + column);
  std::size_t ci = std::size_t(it - result.columns.begin());
  std::vector<std::pair<double, double>> out;
  out.reserve(result.records.size());
  for (const auto& rec : result.records) out.emplace_back(rec.m, rec.values[ci]);
  return out;
}

int write_experiment_outputs(const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const ExperimentConfig& cfg = result.config;
  fs::create_directories(cfg.out_dir);

  {
    std::ofstream os(cfg.out_dir + "/records.csv");
    if (!os) throw IoError("cannot open " + cfg.out_dir + "/records.csv");
    os << "# spoly-records v1\n" << config_header(cfg) << "\n";
    os << "m,trial,seed";
    for (const auto& c : result.columns) os << "," << c;
    os << ",wall_ms\n";
    for (const auto& rec : result.records) {
      os << fmt17(rec.m) << "," << rec.trial << "," << rec.seed;
      for (double v : rec.values) os << "," << fmt17(v);
      os << "," << fmt17(rec.wall_ms) << "\n";
    }
    if (!os) throw IoError("write failed for records.csv");
  }

  {
    std::ofstream os(cfg.out_dir + "/summary.csv");
    if (!os) throw IoError("cannot open " + cfg.out_dir + "/summary.csv");
    os << "# spoly-summary v1\n" << config_header(cfg) << "\n";
    os << "section,metric,m,value\n";

    std::vector<double> ms;
    for (const auto& rec : result.records)
      if (ms.empty() || ms.back() != rec.m) ms.push_back(rec.m);

    for (std::size_t ci = 0; ci < result.columns.size(); ++ci) {
      for (double m : ms) {
        std::vector<double> ys;
        for (const auto& rec : result.records)
          if (rec.m == m) ys.push_back(rec.values[ci]);
        if (ys.empty()) continue;
        double mean = 0.0;
        for (double y : ys) mean += y;
        mean /= double(ys.size());
        double dev = 0.0;
        for (double y : ys) dev = std::max(dev, std::abs(y - mean));
        os << "mean," << result.columns[ci] << "," << fmt17(m) << "," << fmt17(mean) << "\n";
        os << "dev," << result.columns[ci] << "," << fmt17(m) << "," << fmt17(dev) << "\n";
        os << "median," << result.columns[ci] << "," << fmt17(m) << ","
           << fmt17(median_of(ys)) << "\n";
      }
    }
    for (const auto& col : fit_columns(cfg.kind)) {
      try {
        FitResult fit = fit_exponent(metric_samples(result, col));
        os << "fit_slope," << col << ",," << fmt17(fit.slope) << "\n";
        os << "fit_intercept," << col << ",," << fmt17(fit.intercept) << "\n";
        os << "fit_r2," << col << ",," << fmt17(fit.r2) << "\n";
      } catch (const InsufficientDataError&) {
        // fewer than 3 distinct m values: no fit rows
      }
    }
    os << "count,failures,," << result.failures << "\n";
    os << "count,violations,," << result.violations << "\n";
    if (!os) throw IoError("write failed for summary.csv");
  }

  {
    std::ofstream os(cfg.out_dir + "/failures.log");
    if (!os) throw IoError("cannot open " + cfg.out_dir + "/failures.log");
    for (const auto& line : result.failure_log) os << line << "\n";
  }

  return result.violations == 0 ? 0 : 1;
}

}  // namespace spoly
