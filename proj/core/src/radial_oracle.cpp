#include "conecap/radial_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "conecap/errors.hpp"
#include "conecap/quadrature.hpp"
#include "conecap/richardson.hpp"
#include "conecap/special.hpp"

namespace conecap {

namespace {

constexpr double kTailCutoff = 1e6;
constexpr double kSplitRadius = 1e3;

// I(rho) = int_rho^inf f^{-m}. Beyond a split radius the warp is within
// 1e-3 of its cone, so the integral there is the closed-form cone tail plus
// a small correction on [split, 1e6]; the neglected remainder is far below
// the 1e-8 oracle budget. The near region [rho, split] is integrated
// directly, which avoids the cancellation the cone-tail decomposition
// suffers when (f/(c rho))^{-m} is far from one (large m, small p).
double tail_integral_impl(const WarpProfile& warp, double m_exp, double rho) {
  const double c = warp.slope;
  auto cone_tail = [&](double r) {
    return std::pow(c, -m_exp) * std::pow(r, 1.0 - m_exp) / (m_exp - 1.0);
  };
  if (warp.kind == WarpProfile::Kind::Cone) return cone_tail(rho);
  // pure relative tolerance: these integrals can be arbitrarily small for
  // large m without being negligible after normalization
  const double split = std::max(rho, kSplitRadius);
  double near = 0.0;
  if (rho < split)
    near = integrate_log_substituted(
        [&](double s) { return std::pow(warp.value(s), -m_exp); }, rho, split,
        0.0, 1e-12);
  const double correction = integrate_log_substituted(
      [&](double s) {
        return std::pow(warp.value(s), -m_exp) - std::pow(c * s, -m_exp);
      },
      split, kTailCutoff, 0.0, 1e-12);
  return near + cone_tail(split) + correction;
}

}  // namespace

double warp_tail_integral(const WarpProfile& warp, int n, double p,
                          double rho) {
  return tail_integral_impl(warp, (n - 1.0) / (p - 1.0), rho);
}

double RadialSolution::tail_integral(double rho) const {
  return tail_integral_impl(warp, (n - 1.0) / (p - 1.0), rho);
}

double RadialSolution::u(double rho) const {
  return tail_integral(rho) / normalization;
}

double RadialSolution::du(double rho) const {
  const double m_exp = (n - 1.0) / (p - 1.0);
  return -std::pow(warp.value(rho), -m_exp) / normalization;
}

double RadialSolution::level_radius(double level) const {
  if (!(level > 0.0 && level <= 1.0))
    throw domain_error("level_radius: level outside (0, 1]");
  if (level == 1.0) return rho0;
  double lo = rho0, hi = rho0 * 2.0;
  while (u(hi) > level) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (u(mid) > level)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * hi) break;
  }
  return 0.5 * (lo + hi);
}

RadialSolution radial_potential(const ManifoldModel& m,
                                std::string_view end_id, double rho0,
                                double p) {
  if (!(p > 1.0 && p < m.dimension))
    throw domain_error("radial_potential: p must lie in (1, n)");
  if (!(rho0 > 0.0))
    throw domain_error("radial_potential: rho0 must be positive");
  const auto& e = m.end(end_id);
  if (!(e.warp.slope > 0.0))
    throw invalid_model_error("radial_potential: divergent tail (slope <= 0)");

  RadialSolution sol;
  sol.n = m.dimension;
  sol.p = p;
  sol.rho0 = rho0;
  sol.warp = e.warp;
  sol.link = e.link;
  sol.normalization = sol.tail_integral(rho0);

  // Phi = |u'|^{p-1} f^{n-1} |L| collapses to |L| / I(rho0)^{p-1}.
  const double link_area = e.link.area(m.dimension);
  sol.flux = link_area / std::pow(sol.normalization, p - 1.0);
  const double n = m.dimension;
  sol.capacity = std::pow((p - 1.0) / (n - p), p - 1.0) * sol.flux /
                 unit_sphere_area(m.dimension);
  sol.gamma =
      std::pow(sol.capacity / avr_of_end(m, end_id), 1.0 / (p - 1.0));
  return sol;
}

double radial_capacity(const RadialSolution& sol) { return sol.capacity; }

std::vector<double> gamma_ladder_radii() { return {1e3, 1e4, 1e5}; }

GammaPair gamma_of(const RadialSolution& sol, const ManifoldModel& m,
                   std::string_view end_id) {
  GammaPair out;
  out.ladder_radii = gamma_ladder_radii();
  const double k = sol.decay_exponent();
  for (double s : out.ladder_radii)
    out.ladder.push_back(std::pow(s, k) * sol.u(s));
  const auto acc = richardson_extrapolate(out.ladder_radii, out.ladder, 1.0);
  out.limit = acc.limit;
  out.spread = acc.spread;
  out.formula =
      std::pow(sol.capacity / avr_of_end(m, end_id), 1.0 / (sol.p - 1.0));
  if (out.spread > 1e-4)
    throw diagnostics_error("gamma_of: accelerated ladder spread exceeds 1e-4");
  return out;
}

double RadialImcf::w(double rho) const {
  if (exact_cone) return (n - 1.0) * std::log(rho / rho0);
  // linear extrapolation in (p-1) from the two smallest ladder entries
  const auto& s1 = ladder_solutions[ladder_solutions.size() - 2];
  const auto& s2 = ladder_solutions[ladder_solutions.size() - 1];
  const double x1 = s1.p - 1.0, x2 = s2.p - 1.0;
  const double w1 = -x1 * std::log(std::max(s1.u(rho), 1e-300));
  const double w2 = -x2 * std::log(std::max(s2.u(rho), 1e-300));
  return w2 + (w2 - w1) * x2 / (x1 - x2);
}

double RadialImcf::dw(double rho) const {
  if (exact_cone) return (n - 1.0) / rho;
  const auto& s1 = ladder_solutions[ladder_solutions.size() - 2];
  const auto& s2 = ladder_solutions[ladder_solutions.size() - 1];
  const double x1 = s1.p - 1.0, x2 = s2.p - 1.0;
  const double d1 = -x1 * s1.du(rho) / s1.u(rho);
  const double d2 = -x2 * s2.du(rho) / s2.u(rho);
  return d2 + (d2 - d1) * x2 / (x1 - x2);
}

double RadialImcf::level_radius(double t) const {
  if (t < 0.0) throw domain_error("level_radius: negative flow time");
  double lo = rho0, hi = rho0 * 2.0;
  while (w(hi) < t) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (w(mid) < t)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * hi) break;
  }
  return 0.5 * (lo + hi);
}

RadialImcf radial_imcf(const ManifoldModel& m, std::string_view end_id,
                       double rho0, std::vector<double> p_ladder) {
  RadialImcf out;
  out.n = m.dimension;
  out.rho0 = rho0;
  const auto& e = m.end(end_id);
  if (e.warp.kind == WarpProfile::Kind::Cone) {
    out.exact_cone = true;
    return out;
  }
  if (p_ladder.size() < 3)
    throw domain_error("radial_imcf: need at least 3 ladder entries");
  std::sort(p_ladder.begin(), p_ladder.end(), std::greater<>());
  out.p_ladder = p_ladder;
  for (double p : p_ladder)
    out.ladder_solutions.push_back(radial_potential(m, end_id, rho0, p));

  // spread between the 2-point and 3-point extrapolations at the test radius
  const double rho_test = 10.0 * rho0;
  const std::size_t k = out.ladder_solutions.size();
  auto wp = [&](std::size_t i) {
    const auto& s = out.ladder_solutions[i];
    return -(s.p - 1.0) * std::log(s.u(rho_test));
  };
  const double x0 = out.ladder_solutions[k - 3].p - 1.0;
  const double x1 = out.ladder_solutions[k - 2].p - 1.0;
  const double x2 = out.ladder_solutions[k - 1].p - 1.0;
  const double w0 = wp(k - 3), w1 = wp(k - 2), w2 = wp(k - 1);
  const double lin = w2 + (w2 - w1) * x2 / (x1 - x2);
  // quadratic through the three smallest entries, evaluated at x = 0
  const double quad = w0 * x1 * x2 / ((x0 - x1) * (x0 - x2)) +
                      w1 * x0 * x2 / ((x1 - x0) * (x1 - x2)) +
                      w2 * x0 * x1 / ((x2 - x0) * (x2 - x1));
  out.extrapolation_spread = std::abs(quad - lin);
  if (out.extrapolation_spread > 1e-3)
    throw diagnostics_error("radial_imcf: extrapolation spread exceeds 1e-3");
  return out;
}

}  // namespace conecap
