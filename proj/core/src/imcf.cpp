#include "conecap/imcf.hpp"

#include <algorithm>
#include <cmath>

#include "conecap/errors.hpp"
#include "conecap/richardson.hpp"
#include "conecap/special.hpp"

namespace conecap {

DiscreteField moser_transform(const DiscreteField& u_field, double p) {
  DiscreteField w;
  w.grid = u_field.grid;
  w.p = p;
  w.achieved_eps = u_field.achieved_eps;
  w.values.resize(u_field.values.size());
  for (std::size_t k = 0; k < u_field.values.size(); ++k) {
    const double u = u_field.values[k];
    if (!(u > 0.0))
      throw domain_error("moser_transform: non-positive potential value");
    w.values[k] = -(p - 1.0) * std::log(u);
  }
  // exact zero on the Dirichlet row
  for (std::size_t j = 0; j < w.grid.theta.size(); ++j) w.values[j] = 0.0;
  return w;
}

ExtrapolatedImcf p_to_one_extrapolate(const std::vector<DiscreteField>& w_ps,
                                      const std::vector<double>& p_ladder) {
  if (w_ps.size() != p_ladder.size() || w_ps.size() < 3)
    throw domain_error("p_to_one_extrapolate: need >= 3 ladder fields");
  // sort indices by decreasing p
  std::vector<std::size_t> order(p_ladder.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_ladder[a] > p_ladder[b];
  });
  const std::size_t m = order.size();
  const std::size_t i0 = order[m - 3], i1 = order[m - 2], i2 = order[m - 1];
  const double x0 = p_ladder[i0] - 1.0;
  const double x1 = p_ladder[i1] - 1.0;
  const double x2 = p_ladder[i2] - 1.0;

  ExtrapolatedImcf out;
  out.p_ladder = p_ladder;
  out.w.grid = w_ps[i2].grid;
  out.w.p = 1.0;
  out.w.achieved_eps = w_ps[i2].achieved_eps;
  const std::size_t n_nodes = w_ps[i2].values.size();
  out.w.values.resize(n_nodes);

  // linear in (p-1) through the two smallest entries; quadratic through the
  // three smallest is the diagnostic
  const double c1 = x2 / (x1 - x2);
  std::vector<double> quad(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double w0 = w_ps[i0].values[k];
    const double w1 = w_ps[i1].values[k];
    const double w2 = w_ps[i2].values[k];
    out.w.values[k] = w2 + (w2 - w1) * c1;
    quad[k] = w0 * x1 * x2 / ((x0 - x1) * (x0 - x2)) +
              w1 * x0 * x2 / ((x1 - x0) * (x1 - x2)) +
              w2 * x0 * x1 / ((x2 - x0) * (x2 - x1));
  }

  // spread at the calibration sphere
  const Grid& g = out.w.grid;
  const double inner = g.domain.max_radius();
  out.calibration_radius =
      std::min(10.0 * inner, 0.5 * g.rt.back());
  DiscreteField quad_field = out.w;
  quad_field.values = std::move(quad);
  const auto lin_s = sample_sphere_linear(out.w, out.calibration_radius);
  const auto quad_s = sample_sphere_linear(quad_field, out.calibration_radius);
  double spread = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < lin_s.u.size(); ++j) {
    spread = std::max(spread, std::abs(lin_s.u[j] - quad_s.u[j]));
    scale = std::max(scale, std::abs(lin_s.u[j]));
  }
  out.spread = spread;
  if (spread > 1e-2 * std::max(scale, 1.0))
    throw extrapolation_error(
        "p_to_one_extrapolate: ladder spread above 1e-2 of the field scale");
  return out;
}

HullAreaEstimate hull_area_estimate(const std::vector<double>& p_ladder,
                                    const std::vector<double>& capacities,
                                    int n) {
  if (p_ladder.size() != capacities.size() || p_ladder.size() < 2)
    throw domain_error("hull_area_estimate: ladder size mismatch");
  std::vector<std::size_t> order(p_ladder.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_ladder[a] > p_ladder[b];
  });

  HullAreaEstimate out;
  for (std::size_t i : order) out.ladder.push_back(capacities[i]);
  for (std::size_t k = 0; k + 1 < out.ladder.size(); ++k)
    if (out.ladder[k + 1] < out.ladder[k] * (1.0 - 1e-9)) out.monotone = false;

  const std::size_t m = order.size();
  const double x1 = p_ladder[order[m - 2]] - 1.0;
  const double x2 = p_ladder[order[m - 1]] - 1.0;
  const double c1 = capacities[order[m - 2]];
  const double c2 = capacities[order[m - 1]];
  out.extrapolated_capacity = c2 + (c2 - c1) * x2 / (x1 - x2);
  out.area = out.extrapolated_capacity * unit_sphere_area(n);
  return out;
}

namespace {

ImcfConstants constants_from_ladder(const std::vector<double>& radii,
                                    const std::vector<double>& means,
                                    const std::vector<double>& oscs,
                                    double hull_area, double avr, int n) {
  ImcfConstants out;
  out.ladder_means = means;
  const auto acc = richardson_extrapolate(radii, means, 1.0);
  out.measured = acc.limit;
  out.predicted = -std::log(hull_area / (avr * unit_sphere_area(n)));
  out.residual = std::abs(out.measured - out.predicted);
  if (oscs.size() >= 2) out.oscillation_ok = oscs.back() <= oscs.front() + 1e-9;
  return out;
}

}  // namespace

ImcfConstants imcf_constant_check(const DiscreteField& w, double hull_area,
                                  double avr,
                                  const std::vector<double>& s_ladder) {
  const int n = w.grid.model.dimension;
  std::vector<double> radii, means, oscs;
  for (double s : s_ladder) {
    const auto samples = sample_sphere_linear(w, s);
    SphereSamples shifted = samples;
    for (auto& v : shifted.u) v -= (n - 1.0) * std::log(s);
    radii.push_back(s);
    means.push_back(shifted.mean(w.grid));
    oscs.push_back(shifted.sup() - shifted.inf());
  }
  return constants_from_ladder(radii, means, oscs, hull_area, avr, n);
}

ImcfConstants imcf_constant_check(const RadialImcf& w, const ManifoldModel& m,
                                  std::string_view end_id, double hull_area,
                                  double avr,
                                  const std::vector<double>& s_ladder) {
  (void)m;
  (void)end_id;
  std::vector<double> radii, means, oscs;
  for (double s : s_ladder) {
    radii.push_back(s);
    means.push_back(w.w(s) - (w.n - 1.0) * std::log(s));
    oscs.push_back(0.0);
  }
  return constants_from_ladder(radii, means, oscs, hull_area, avr, w.n);
}

GrowthTable exponential_growth_check(const DiscreteField& w,
                                     const std::vector<double>& t_ladder) {
  GrowthTable out;
  for (double t : t_ladder) {
    const auto ls = extract_level_set(w, t);
    out.rows.push_back({t, ls.area, ls.area * std::exp(-t)});
  }
  double lo = out.rows.front().ratio, hi = lo;
  for (const auto& r : out.rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  out.max_relative_deviation = (hi - lo) / (0.5 * (hi + lo));
  return out;
}

GrowthTable exponential_growth_check(const RadialImcf& w,
                                     const ManifoldModel& m,
                                     std::string_view end_id,
                                     const std::vector<double>& t_ladder) {
  GrowthTable out;
  for (double t : t_ladder) {
    const double rho_t = w.level_radius(t);
    const double area = sphere_area(m, end_id, rho_t);
    out.rows.push_back({t, area, area * std::exp(-t)});
  }
  double lo = out.rows.front().ratio, hi = lo;
  for (const auto& r : out.rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  out.max_relative_deviation = (hi - lo) / (0.5 * (hi + lo));
  return out;
}

std::vector<std::pair<double, double>> imcf_gradient_check(
    const DiscreteField& w, const std::vector<double>& s_ladder) {
  std::vector<std::pair<double, double>> out;
  for (double s : s_ladder) {
    const auto samples = sample_sphere_linear(w, s);
    double sup = 0.0;
    for (std::size_t j = 0; j < samples.u.size(); ++j)
      sup = std::max(sup,
                     s * std::hypot(samples.du_rho[j], samples.du_theta[j]));
    out.emplace_back(s, sup);
  }
  return out;
}

std::vector<std::pair<double, double>> imcf_gradient_check(
    const RadialImcf& w, const std::vector<double>& s_ladder) {
  std::vector<std::pair<double, double>> out;
  for (double s : s_ladder) out.emplace_back(s, s * w.dw(s));
  return out;
}

}  // namespace conecap
