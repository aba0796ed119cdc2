#include "spoly/prob_bounds.hpp"

namespace spoly {

double bernstein_bound(double k, double q, double sigma2, double M, double t) {
  if (!(k > 0) || !(q > 0) || !(sigma2 >= 0) || !(M >= 0) || !(t > 0))
    throw DomainError("bernstein_bound: bad arguments");
  const double denom = 25.0 * q * (k * sigma2 + M * t / 3.0);
  if (!(denom > 0)) return t > 0 ? 0.0 : 2.0;
  return 2.0 * std::exp(-8.0 * t * t / denom);
}

double bhatia_davis_bound(double mu, double M) {
  if (!(M > 0) || !(mu >= 0) || !(mu <= M))
    throw DomainError("bhatia_davis_bound: need 0 <= mu <= M");
  return mu * (M - mu);
}

double poisson_tail_bound(double lambda, double x) {
  if (!(lambda > 0) || !(x > 0)) throw DomainError("poisson_tail_bound: need lambda, x > 0");
  return std::exp(-x * x / (2.0 * (lambda + x)));
}

DensityThresholds density_thresholds(double m, int n, double p) {
  if (!(m > 0) || !(p > 0 && p < 1) || n < 2)
    throw DomainError("density_thresholds: bad arguments");
  const double L = std::log(1.0 / p);
  DensityThresholds out;
  out.cap_target = 3.0 * std::exp(1.0) * L / m;
  out.occupancy_base = 45.0 * L;
  out.local_occupancy = 45.0 * std::exp(1.0) * std::pow(2.0, n) * L;
  out.path_bound = 45.0 * std::exp(1.0) * n * std::pow(4.0, n) * L;
  return out;
}

double t_p_eval(double m, int n, double p, double U, const TailParams& params) {
  if (!(m > 0) || !(p > 0 && p < 1) || n < 2 || !(U > 0))
    throw DomainError("t_p_eval: bad arguments");
  const double L = std::log(1.0 / p);
  const double variance_term =
      std::sqrt(params.c1 * U * double(n) * double(n) * std::pow(m, 1.0 / double(n - 1)) * L);
  const double linear_term = params.c2 * U * L;
  return std::max(variance_term, linear_term);
}

double u_shadow_size(int n, double p, double u_const) {
  const double L = std::log(1.0 / p);
  return u_const * double(n) * std::pow(2.0, double(n) * double(n)) * std::pow(L, n);
}

double u_local_path(int n, double p, double u_const) {
  const double L = std::log(1.0 / p);
  return u_const * double(n) * std::pow(4.0, n) * L;
}

}  // namespace spoly
