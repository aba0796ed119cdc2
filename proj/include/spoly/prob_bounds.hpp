#pragma once
// Closed-form tail bounds and the deviation scale used by the shadow-size
// experiments. Pure arithmetic; every formula is pinned by tests.

#include <cmath>

#include "spoly/common.hpp"

namespace spoly {

struct TailParams {
  double c1 = 1.0;  // multiplier of the variance-like term
  double c2 = 1.0;  // multiplier of the linear term
  double u_const = 1.0;
};

// Bernstein-type bound for a sum of k iid sums of q bounded terms:
// 2 exp(-8 t^2 / (25 q (k sigma^2 + M t / 3))).
double bernstein_bound(double k, double q, double sigma2, double M, double t);

// Variance cap for a [0, M]-valued variable with mean mu.
double bhatia_davis_bound(double mu, double M);

// Tail bound max(P[X >= lambda+x], P[X <= lambda-x]) <= e^{-x^2/(2(lambda+x))}.
double poisson_tail_bound(double lambda, double x);

struct DensityThresholds {
  double cap_target = 0.0;       // 3 e ln(1/p) / m
  double occupancy_base = 0.0;   // 45 ln(1/p)
  double local_occupancy = 0.0;  // 45 e 2^n ln(1/p)
  double path_bound = 0.0;       // 45 e n 4^n ln(1/p)
};
DensityThresholds density_thresholds(double m, int n, double p);

// Deviation scale t_p = max(sqrt(c1 U n^2 m^{1/(n-1)} ln(1/p)), c2 U ln(1/p)).
double t_p_eval(double m, int n, double p, double U, const TailParams& params);

// U for the shadow-size concentration: u_const * n 2^{n^2} ln(1/p)^n.
double u_shadow_size(int n, double p, double u_const = 1.0);

// U for path-length bounds: u_const * n 4^n ln(1/p).
double u_local_path(int n, double p, double u_const = 1.0);

}  // namespace spoly
