#pragma once

#include <functional>

namespace conecap {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
/// Panels are bisected until the local K15-G7 error estimate meets the
/// tolerance split proportionally to panel size.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-10);

/// Same as integrate() but returns only the value.
double integrate_value(const std::function<double(double)>& f, double a,
                       double b, double abs_tol = 1e-12,
                       double rel_tol = 1e-10);

/// Integrates f over [a, b] with the substitution s = exp(x). Intended for
/// slowly decaying integrands over wide ranges such as [rho, 1e6].
double integrate_log_substituted(const std::function<double(double)>& f,
                                 double a, double b, double abs_tol = 1e-12,
                                 double rel_tol = 1e-10);

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int npoints, double* nodes, double* weights);

}  // namespace conecap
