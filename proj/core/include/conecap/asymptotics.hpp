#pragma once

#include <string>
#include <vector>

#include "conecap/capacity.hpp"

namespace conecap {

struct BlowDownRow {
  double s = 0.0;
  double sup = 0.0;
  double inf = 0.0;
  double mean = 0.0;
  double osc() const { return sup - inf; }
};

/// Rescaled potential s^{(n-p)/(p-1)} u over the spheres {rho = s}.
std::vector<BlowDownRow> blow_down_profile(const DiscreteField& field,
                                           const std::vector<double>& s_ladder);
std::vector<BlowDownRow> blow_down_profile(const RadialSolution& sol,
                                           const std::vector<double>& s_ladder);

struct GammaEstimate {
  double measured = 0.0;
  double formula = 0.0;
  double residual = 0.0;  // |measured - formula| / formula
  double spread = 0.0;
  std::vector<double> ladder_means;
};

/// Richardson-accelerated sphere-mean limit against the capacity/AVR
/// formula. Throws diagnostics_error when the oscillation fails to decrease.
GammaEstimate gamma_estimate(const std::vector<BlowDownRow>& profile,
                             double end_capacity, double end_avr, double p);

struct LiYauBand {
  double c_lower = 0.0;  // min of u rho^{(n-p)/(p-1)}
  double c_upper = 0.0;  // max of the same ratio
  std::vector<std::pair<double, double>> ratio_table;  // (s, ratio)
};
LiYauBand liyau_check(const DiscreteField& field,
                      const std::vector<double>& s_ladder);
LiYauBand liyau_check(const RadialSolution& sol,
                      const std::vector<double>& s_ladder);

/// Table s -> sup over {rho = s} of rho |grad u| / u; tends to
/// (n-p)/(p-1) on cones.
std::vector<std::pair<double, double>> gradient_bound_check(
    const DiscreteField& field, const std::vector<double>& s_ladder);
std::vector<std::pair<double, double>> gradient_bound_check(
    const RadialSolution& sol, const std::vector<double>& s_ladder);

/// First-derivative asymptotics: sup over {rho = s} of
/// |du/drho - gamma d/drho rho^{-k}| s^{(n-1)/(p-1)}, k = (n-p)/(p-1).
std::vector<std::pair<double, double>> derivative_asymptotics(
    const DiscreteField& field, double gamma,
    const std::vector<double>& s_ladder);
std::vector<std::pair<double, double>> derivative_asymptotics(
    const RadialSolution& sol, double gamma,
    const std::vector<double>& s_ladder);

struct AsymptoticsReport {
  std::string end_id;
  double p = 2.0;
  double avr = 1.0;
  double end_capacity = 0.0;
  GammaEstimate gamma;
  std::vector<BlowDownRow> blow_down;
  LiYauBand liyau;
  std::vector<std::pair<double, double>> gradient_bound;
  std::vector<std::pair<double, double>> derivative_table;
  double richardson_order = 1.0;  // assumed ladder order, reported not trusted
};

}  // namespace conecap
