#include "conecap/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "conecap/errors.hpp"
#include "conecap/quadrature.hpp"
#include "conecap/special.hpp"

namespace conecap {

namespace {

double angular_factor(const Grid& g) {
  const int n = g.model.dimension;
  const double a = g.model.ends[g.end].link.scale;
  return std::pow(a, n - 1) * (n > 2 ? unit_sphere_area(n - 1) : 2.0);
}

// nodal integral against sin^{n-2}, exact angular weights
double theta_integral(const Grid& g, const std::vector<double>& integrand) {
  const auto w = angular_node_weights(g.theta, g.model.dimension);
  double acc = 0.0;
  for (std::size_t j = 0; j < g.theta.size(); ++j) acc += w[j] * integrand[j];
  return acc;
}

double inner_boundary_max_radius(const Grid& g) {
  return g.domain.max_radius();
}

}  // namespace

double flux_capacity_at(const DiscreteField& field, double s) {
  const Grid& g = field.grid;
  const int n = g.model.dimension;
  const double p = field.p;
  if (!(s > inner_boundary_max_radius(g)))
    throw domain_error("flux_capacity_at: sphere intersects the domain");

  const auto samples = sample_sphere(field, s);
  const double eps = field.achieved_eps;
  const double f = g.model.ends[g.end].warp.value(s);
  std::vector<double> integrand(samples.u.size());
  for (std::size_t j = 0; j < samples.u.size(); ++j) {
    const double g2 = samples.du_rho[j] * samples.du_rho[j] +
                      samples.du_theta[j] * samples.du_theta[j];
    // regularized integrand: the quantity the discrete solve conserves
    integrand[j] = std::pow(g2 + eps * eps, 0.5 * (p - 2.0)) *
                   (-samples.du_rho[j]);
  }
  const double flux =
      theta_integral(g, integrand) * std::pow(f, n - 1) * angular_factor(g);
  return std::pow((p - 1.0) / (n - p), p - 1.0) * flux / unit_sphere_area(n);
}

namespace {

double reference_radius(const DiscreteField& field) {
  const double inner = inner_boundary_max_radius(field.grid);
  const double blend = field.grid.domain.is_graph()
                           ? field.grid.blend_end
                           : inner;
  return std::sqrt(std::max(inner * 1.2, blend) * field.grid.rt.back());
}

}  // namespace

CapacityReport per_end_capacity(
    const std::vector<std::pair<std::string, const DiscreteField*>>& fields) {
  if (fields.empty()) throw domain_error("per_end_capacity: no fields");
  CapacityReport rep;
  rep.p = fields.front().second->p;
  for (const auto& [id, f] : fields) {
    const double c = flux_capacity_at(*f, reference_radius(*f));
    rep.per_end[id] = c;
    rep.total += c;
  }
  return rep;
}

CapacityReport per_end_capacity(
    const std::vector<std::pair<std::string, const RadialSolution*>>& sols) {
  if (sols.empty()) throw domain_error("per_end_capacity: no solutions");
  CapacityReport rep;
  rep.p = sols.front().second->p;
  for (const auto& [id, s] : sols) {
    rep.per_end[id] = s->capacity;
    rep.total += s->capacity;
  }
  return rep;
}

CapacityReport capacity_report(const DiscreteField& field,
                               const std::vector<double>& t_ladder) {
  CapacityReport rep;
  rep.p = field.p;
  rep.total = flux_capacity_at(field, reference_radius(field));
  rep.boundary_flux =
      flux_capacity_at(field, inner_boundary_max_radius(field.grid) * 1.05);

  double lo = rep.total, hi = rep.total;
  for (double t : t_ladder) {
    const auto ls = extract_level_set(field, 1.0 / t);
    const double s_enc =
        std::min(ls.r_max * 1.05, max_sphere_radius(field));
    FluxEntry entry;
    entry.t = t;
    entry.radius = s_enc;
    entry.value = flux_capacity_at(field, s_enc);
    rep.flux_table.push_back(entry);
    rep.scaling_residuals.push_back(
        std::abs(entry.value - rep.total) / rep.total);
    lo = std::min(lo, entry.value);
    hi = std::max(hi, entry.value);
  }
  rep.spread = (hi - lo) / (0.5 * (hi + lo));
  return rep;
}

LevelSet extract_level_set(const DiscreteField& field, double level) {
  const Grid& g = field.grid;
  const int n = g.model.dimension;
  const auto& e = g.model.ends[g.end];
  const double a_link = e.link.scale;
  const std::size_t NI = g.rt.size(), NJ = g.theta.size();

  double vmin = field.values[0], vmax = field.values[0];
  for (double v : field.values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (!(level > vmin && level < vmax))
    throw domain_error("extract_level_set: level outside the field range");

  LevelSet out;
  out.level = level;
  out.r_min = std::numeric_limits<double>::infinity();
  out.r_max = 0.0;

  auto phys = [&](double rt_v, double th_v) {
    return g.mapping(rt_v, th_v).rho;
  };

  // cell-local segments (marching squares, linear edge interpolation)
  for (std::size_t i = 0; i + 1 < NI; ++i) {
    for (std::size_t j = 0; j + 1 < NJ; ++j) {
      const double v00 = field.values[g.node(i, j)] - level;
      const double v10 = field.values[g.node(i + 1, j)] - level;
      const double v01 = field.values[g.node(i, j + 1)] - level;
      const double v11 = field.values[g.node(i + 1, j + 1)] - level;
      // edge crossings in (rt, theta)
      std::vector<std::array<double, 2>> pts;
      auto cross1d = [](double a, double b) { return a / (a - b); };
      if ((v00 > 0) != (v10 > 0))
        pts.push_back({g.rt[i] + cross1d(v00, v10) * (g.rt[i + 1] - g.rt[i]),
                       g.theta[j]});
      if ((v01 > 0) != (v11 > 0))
        pts.push_back({g.rt[i] + cross1d(v01, v11) * (g.rt[i + 1] - g.rt[i]),
                       g.theta[j + 1]});
      if ((v00 > 0) != (v01 > 0))
        pts.push_back({g.rt[i], g.theta[j] + cross1d(v00, v01) *
                                                 (g.theta[j + 1] - g.theta[j])});
      if ((v10 > 0) != (v11 > 0))
        pts.push_back({g.rt[i + 1], g.theta[j] + cross1d(v10, v11) *
                                                     (g.theta[j + 1] -
                                                      g.theta[j])});
      if (pts.size() < 2) continue;
      // ambiguous saddle cells contribute both pairs; order by theta
      std::sort(pts.begin(), pts.end(),
                [](const auto& a, const auto& b) { return a[1] < b[1]; });
      for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
        const double rho1 = phys(pts[k][0], pts[k][1]);
        const double rho2 = phys(pts[k + 1][0], pts[k + 1][1]);
        out.segments.push_back({rho1, pts[k][1], rho2, pts[k + 1][1]});
        out.r_min = std::min({out.r_min, rho1, rho2});
        out.r_max = std::max({out.r_max, rho1, rho2});
      }
    }
  }
  if (out.segments.empty())
    throw domain_error("extract_level_set: empty level set");

  // induced measure per segment in the warped metric
  double area = 0.0;
  for (const auto& seg : out.segments) {
    const double rho_mid = 0.5 * (seg[0] + seg[2]);
    const double th_mid = 0.5 * (seg[1] + seg[3]);
    const double f = e.warp.value(rho_mid);
    const double dl = std::hypot(seg[2] - seg[0], f * a_link * (seg[3] - seg[1]));
    const double orbit = std::pow(f * a_link * std::sin(th_mid), n - 2) *
                         (n > 2 ? unit_sphere_area(n - 1) : 2.0);
    area += dl * orbit;
  }
  out.area = area;

  // loop count via radial crossing parity per theta column
  for (std::size_t j = 0; j < NJ; ++j) {
    int crossings = 0;
    for (std::size_t i = 0; i + 1 < NI; ++i) {
      const double a = field.values[g.node(i, j)] - level;
      const double b = field.values[g.node(i + 1, j)] - level;
      if ((a > 0) != (b > 0)) ++crossings;
    }
    if (crossings != 1) {
      out.multi_loop = true;
      break;
    }
  }
  return out;
}

EccentricityTable eccentricity(const DiscreteField& field,
                               const std::vector<double>& t_ladder) {
  EccentricityTable out;
  const auto& d = field.grid.domain;
  for (double t : t_ladder) {
    EccentricityRow row;
    row.t = t;
    if (t == 1.0) {
      // the boundary level is the domain itself
      row.ratio = d.max_radius() / d.min_radius();
    } else {
      const auto ls = extract_level_set(field, 1.0 / t);
      if (ls.multi_loop)
        throw domain_error(
            "eccentricity: level set has more than one loop at t = " +
            std::to_string(t));
      row.ratio = ls.r_max / ls.r_min;
    }
    out.rows.push_back(row);
  }
  for (std::size_t k = 0; k + 1 < out.rows.size(); ++k) {
    const double inc = out.rows[k + 1].ratio - out.rows[k].ratio;
    out.max_increase = std::max(out.max_increase, inc);
  }
  out.non_increasing = out.max_increase <= 1e-3;
  return out;
}

double domain_volume(const ManifoldModel& m, const DomainSpec& d,
                     std::string_view end_id) {
  const auto& e = m.end(end_id);
  const int n = m.dimension;
  if (!d.is_graph()) {
    const double radial = integrate_value(
        [&](double s) { return std::pow(e.warp.value(s), n - 1); }, 0.0,
        d.rho0);
    return radial * e.link.area(n);
  }
  const double af =
      std::pow(e.link.scale, n - 1) * (n > 2 ? unit_sphere_area(n - 1) : 2.0);
  return af * integrate_value(
                  [&](double th) {
                    const double radial = integrate_value(
                        [&](double s) {
                          return std::pow(e.warp.value(s), n - 1);
                        },
                        0.0, d.h(th));
                    return radial * std::pow(std::sin(th), n - 2);
                  },
                  0.0, M_PI, 1e-10, 1e-8);
}

namespace {

// physical crossing radius of {field = level} along each theta column,
// log-log interpolation (the field must be radially monotone there)
std::vector<double> column_crossings(const DiscreteField& field, double level,
                                     bool decreasing) {
  const Grid& g = field.grid;
  const std::size_t NI = g.rt.size(), NJ = g.theta.size();
  std::vector<double> rho_star(NJ);
  for (std::size_t j = 0; j < NJ; ++j) {
    std::size_t k = NI;
    for (std::size_t i = 0; i + 1 < NI; ++i) {
      const double a = field.values[g.node(i, j)];
      const double b = field.values[g.node(i + 1, j)];
      const bool hit = decreasing ? (a >= level && b < level)
                                  : (a <= level && b > level);
      if (hit) {
        k = i;
        break;
      }
    }
    if (k == NI)
      throw domain_error("level crossing not covered by the grid");
    const double va = field.values[g.node(k, j)];
    const double vb = field.values[g.node(k + 1, j)];
    double rt_star;
    if (va > 0.0 && vb > 0.0 && level > 0.0) {
      const double la = std::log(va), lb = std::log(vb);
      const double w = (std::log(level) - la) / (lb - la);
      rt_star = std::exp((1.0 - w) * std::log(g.rt[k]) +
                         w * std::log(g.rt[k + 1]));
    } else {
      const double w = (level - va) / (vb - va);
      rt_star = g.rt[k] + w * (g.rt[k + 1] - g.rt[k]);
    }
    rho_star[j] = g.mapping(rt_star, g.theta[j]).rho;
  }
  return rho_star;
}

}  // namespace

std::vector<LevelGeometryRow> level_area_volume(
    const DiscreteField& field, double v_scale,
    const std::vector<double>& s_ladder) {
  const Grid& g = field.grid;
  const int n = g.model.dimension;
  const double p = field.p;
  const auto& e = g.model.ends[g.end];
  if (g.model.topology == ManifoldModel::Topology::DoubleEnd)
    throw unsupported_topology_error(
        "level_area_volume: volumes need a single-end model");
  const double expo = (n - p) / (p - 1.0);

  std::vector<LevelGeometryRow> out;
  for (double s : s_ladder) {
    const double u_level = std::pow(s / v_scale, -expo);
    LevelGeometryRow row;
    row.s = s;
    row.area = extract_level_set(field, u_level).area;

    const auto rho_star = column_crossings(field, u_level, true);
    std::vector<double> radial(rho_star.size());
    for (std::size_t j = 0; j < rho_star.size(); ++j)
      radial[j] = integrate_value(
          [&](double r) { return std::pow(e.warp.value(r), n - 1); }, 0.0,
          rho_star[j], 1e-12, 1e-10);
    row.volume = theta_integral(g, radial) * angular_factor(g);

    row.area_ratio =
        row.area / (std::pow(s, n - 1) * unit_sphere_area(n));
    row.volume_ratio = row.volume / (std::pow(s, n) * unit_ball_volume(n));
    out.push_back(row);
  }
  return out;
}

std::vector<LevelGeometryRow> level_area_volume(
    const RadialSolution& sol, const ManifoldModel& m, std::string_view end_id,
    double v_scale, const std::vector<double>& s_ladder) {
  const int n = m.dimension;
  const double expo = (n - sol.p) / (sol.p - 1.0);
  std::vector<LevelGeometryRow> out;
  for (double s : s_ladder) {
    const double u_level = std::pow(s / v_scale, -expo);
    const double rho_s = sol.level_radius(u_level);
    LevelGeometryRow row;
    row.s = s;
    row.area = sphere_area(m, end_id, rho_s);
    row.volume = annulus_volume(m, end_id, 1e-12, rho_s);
    row.area_ratio = row.area / (std::pow(s, n - 1) * unit_sphere_area(n));
    row.volume_ratio = row.volume / (std::pow(s, n) * unit_ball_volume(n));
    out.push_back(row);
  }
  return out;
}

std::vector<LevelCapacityRow> capacity_level_sets(
    const RadialSolution& sol, const ManifoldModel& m, std::string_view end_id,
    double v_scale, const std::vector<double>& s_ladder) {
  const int n = m.dimension;
  const double p = sol.p;
  const double expo = (n - p) / (p - 1.0);
  std::vector<LevelCapacityRow> out;
  for (double s : s_ladder) {
    const double u_level = std::pow(s / v_scale, -expo);
    const double rho_s = sol.level_radius(u_level);
    // fresh oracle on the enclosing sublevel: an independent route to the
    // same capacity the scaling identity predicts
    const auto fresh = radial_potential(m, end_id, rho_s, p);
    LevelCapacityRow row;
    row.s = s;
    row.normalized = std::pow((n - p) / (p - 1.0), p - 1.0) * fresh.capacity /
                     std::pow(s, n - p);
    out.push_back(row);
  }
  return out;
}

std::vector<LevelCapacityRow> capacity_level_sets(
    const DiscreteField& field, double v_scale,
    const std::vector<double>& s_ladder) {
  const Grid& g = field.grid;
  const int n = g.model.dimension;
  const double p = field.p;
  const double expo = (n - p) / (p - 1.0);
  std::vector<LevelCapacityRow> out;
  for (double s : s_ladder) {
    const double u_level = std::pow(s / v_scale, -expo);
    const double t = 1.0 / u_level;
    const auto ls = extract_level_set(field, u_level);
    const double s_enc = std::min(ls.r_max * 1.05, max_sphere_radius(field));
    const double c_omega = flux_capacity_at(field, s_enc);
    LevelCapacityRow row;
    row.s = s;
    row.normalized = std::pow((n - p) / (p - 1.0), p - 1.0) *
                     std::pow(t, p - 1.0) * c_omega / std::pow(s, n - p);
    out.push_back(row);
  }
  return out;
}

}  // namespace conecap
