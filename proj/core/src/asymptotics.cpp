#include "conecap/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "conecap/errors.hpp"
#include "conecap/richardson.hpp"

namespace conecap {

std::vector<BlowDownRow> blow_down_profile(const DiscreteField& field,
                                           const std::vector<double>& s_ladder) {
  const int n = field.grid.model.dimension;
  const double k = (n - field.p) / (field.p - 1.0);
  std::vector<BlowDownRow> out;
  for (double s : s_ladder) {
    const auto samples = sample_sphere(field, s);
    const double scale = std::pow(s, k);
    BlowDownRow row;
    row.s = s;
    row.sup = scale * samples.sup();
    row.inf = scale * samples.inf();
    row.mean = scale * samples.mean(field.grid);
    out.push_back(row);
  }
  return out;
}

std::vector<BlowDownRow> blow_down_profile(const RadialSolution& sol,
                                           const std::vector<double>& s_ladder) {
  const double k = sol.decay_exponent();
  std::vector<BlowDownRow> out;
  for (double s : s_ladder) {
    const double v = std::pow(s, k) * sol.u(s);
    out.push_back({s, v, v, v});
  }
  return out;
}

GammaEstimate gamma_estimate(const std::vector<BlowDownRow>& profile,
                             double end_capacity, double end_avr, double p) {
  if (profile.size() < 3)
    throw domain_error("gamma_estimate: need at least 3 ladder rows");

  // uniform convergence should shrink the relative oscillation
  const double r_first = profile.front().osc() / profile.front().mean;
  const double r_last = profile.back().osc() / profile.back().mean;
  if (r_last > r_first * 1.001 + 1e-9)
    throw diagnostics_error(
        "gamma_estimate: oscillation fails to decrease along the ladder");

  std::vector<double> radii, means;
  for (const auto& row : profile) {
    radii.push_back(row.s);
    means.push_back(row.mean);
  }
  const auto acc = richardson_extrapolate(radii, means, 1.0);

  GammaEstimate out;
  out.ladder_means = means;
  out.measured = acc.limit;
  out.spread = acc.spread;
  out.formula = std::pow(end_capacity / end_avr, 1.0 / (p - 1.0));
  out.residual = std::abs(out.measured - out.formula) / out.formula;
  return out;
}

namespace {

std::vector<double> log_ladder(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(lo * std::pow(hi / lo, i / double(count - 1)));
  return out;
}

}  // namespace

LiYauBand liyau_check(const DiscreteField& field,
                      const std::vector<double>& s_ladder) {
  const Grid& g = field.grid;
  const int n = g.model.dimension;
  const double k = (n - field.p) / (field.p - 1.0);
  LiYauBand out;
  out.c_lower = std::numeric_limits<double>::infinity();
  out.c_upper = 0.0;
  // band over every node (boundary values included)
  for (std::size_t i = 0; i < g.rt.size(); ++i) {
    for (std::size_t j = 0; j < g.theta.size(); ++j) {
      const double rho = g.mapping(g.rt[i], g.theta[j]).rho;
      const double ratio = std::pow(rho, k) * field.values[g.node(i, j)];
      out.c_lower = std::min(out.c_lower, ratio);
      out.c_upper = std::max(out.c_upper, ratio);
    }
  }
  for (double s : s_ladder) {
    const auto samples = sample_sphere(field, s);
    out.ratio_table.emplace_back(s,
                                 std::pow(s, k) * samples.mean(field.grid));
  }
  return out;
}

LiYauBand liyau_check(const RadialSolution& sol,
                      const std::vector<double>& s_ladder) {
  const double k = sol.decay_exponent();
  LiYauBand out;
  out.c_lower = std::numeric_limits<double>::infinity();
  out.c_upper = 0.0;
  for (double s : log_ladder(sol.rho0, 1e5, 61)) {
    const double ratio = std::pow(s, k) * sol.u(s);
    out.c_lower = std::min(out.c_lower, ratio);
    out.c_upper = std::max(out.c_upper, ratio);
  }
  for (double s : s_ladder)
    out.ratio_table.emplace_back(s, std::pow(s, k) * sol.u(s));
  return out;
}

std::vector<std::pair<double, double>> gradient_bound_check(
    const DiscreteField& field, const std::vector<double>& s_ladder) {
  std::vector<std::pair<double, double>> out;
  for (double s : s_ladder) {
    const auto samples = sample_sphere(field, s);
    double sup = 0.0;
    for (std::size_t j = 0; j < samples.u.size(); ++j) {
      const double grad = std::hypot(samples.du_rho[j], samples.du_theta[j]);
      sup = std::max(sup, s * grad / samples.u[j]);
    }
    out.emplace_back(s, sup);
  }
  return out;
}

std::vector<std::pair<double, double>> gradient_bound_check(
    const RadialSolution& sol, const std::vector<double>& s_ladder) {
  std::vector<std::pair<double, double>> out;
  for (double s : s_ladder)
    out.emplace_back(s, s * std::abs(sol.du(s)) / sol.u(s));
  return out;
}

std::vector<std::pair<double, double>> derivative_asymptotics(
    const DiscreteField& field, double gamma,
    const std::vector<double>& s_ladder) {
  const int n = field.grid.model.dimension;
  const double p = field.p;
  const double k = (n - p) / (p - 1.0);
  std::vector<std::pair<double, double>> out;
  for (double s : s_ladder) {
    const auto samples = sample_sphere(field, s);
    const double model_du = gamma * (-k) * std::pow(s, -k - 1.0);
    double sup = 0.0;
    for (double du : samples.du_rho)
      sup = std::max(sup, std::abs(du - model_du));
    out.emplace_back(s, sup * std::pow(s, (n - 1.0) / (p - 1.0)));
  }
  return out;
}

std::vector<std::pair<double, double>> derivative_asymptotics(
    const RadialSolution& sol, double gamma,
    const std::vector<double>& s_ladder) {
  const int n = sol.n;
  const double p = sol.p;
  const double k = (n - p) / (p - 1.0);
  std::vector<std::pair<double, double>> out;
  for (double s : s_ladder) {
    const double model_du = gamma * (-k) * std::pow(s, -k - 1.0);
    const double dev = std::abs(sol.du(s) - model_du);
    out.emplace_back(s, dev * std::pow(s, (n - 1.0) / (p - 1.0)));
  }
  return out;
}

}  // namespace conecap
