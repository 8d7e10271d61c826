#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "conecap/geometry.hpp"

namespace conecap {

/// Exact (quadrature-level) radial p-capacitary potential on one end:
///   u(rho) = I(rho) / I(rho0),  I(rho) = int_rho^inf f(s)^{-(n-1)/(p-1)} ds.
/// Tail integrals are the closed-form cone tail at slope c plus a finite
/// correction on [rho, 1e6]; the neglected remainder is below the oracle's
/// 1e-8 relative budget for every registry warp.
struct RadialSolution {
  int n = 3;
  double p = 2.0;
  double rho0 = 1.0;
  WarpProfile warp;
  LinkSpec link;

  double normalization = 1.0;  // I(rho0)
  double flux = 0.0;           // |u'|^{p-1} f^{n-1} |L|, rho-independent
  double capacity = 0.0;       // normalized C_p
  double gamma = 0.0;          // (C_p / AVR)^{1/(p-1)}

  double decay_exponent() const { return (n - p) / (p - 1.0); }

  double tail_integral(double rho) const;  // I(rho)
  double u(double rho) const;
  double du(double rho) const;

  /// Radius of the level set {u = level}, by monotone bisection.
  double level_radius(double level) const;
};

RadialSolution radial_potential(const ManifoldModel& m,
                                std::string_view end_id, double rho0,
                                double p);

/// Normalized capacity via the flux identity,
/// C_p = ((p-1)/(n-p))^{p-1} Phi / |S^{n-1}|.
double radial_capacity(const RadialSolution& sol);

struct GammaPair {
  double limit = 0.0;    // Richardson-accelerated ladder limit
  double formula = 0.0;  // (C_p / AVR)^{1/(p-1)}
  double spread = 0.0;
  std::vector<double> ladder;         // raw s^{k} u(s) values
  std::vector<double> ladder_radii;   // {1e3, 1e4, 1e5}
};

/// Both routes to the asymptotic constant of the potential expansion.
/// Throws diagnostics_error when the accelerated ladder spread exceeds 1e-4.
GammaPair gamma_of(const RadialSolution& sol, const ManifoldModel& m,
                   std::string_view end_id);

/// Radial inverse-mean-curvature-flow profile, reached through the p -> 1
/// limit of -(p-1) log u_p. On exact cones the profile is
/// (n-1) log(rho/rho0) with no extrapolation.
struct RadialImcf {
  int n = 3;
  double rho0 = 1.0;
  bool exact_cone = false;
  std::vector<double> p_ladder;
  std::vector<RadialSolution> ladder_solutions;  // empty when exact_cone
  double extrapolation_spread = 0.0;             // at the test radius

  double w(double rho) const;
  double dw(double rho) const;
  /// Radius of {w = t}, by monotone bisection.
  double level_radius(double t) const;
};

RadialImcf radial_imcf(const ManifoldModel& m, std::string_view end_id,
                       double rho0,
                       std::vector<double> p_ladder = {1.2, 1.1, 1.05, 1.025});

/// Default ladder radii for asymptotic extraction.
std::vector<double> gamma_ladder_radii();

/// The radial decay integral int_rho^inf f^{-(n-1)/(p-1)} ds shared by the
/// oracle and the solver's outer-boundary condition.
double warp_tail_integral(const WarpProfile& warp, int n, double p,
                          double rho);

}  // namespace conecap
