#include "conecap/grid.hpp"

#include <cmath>

#include "conecap/errors.hpp"
#include "conecap/quadrature.hpp"
#include "conecap/special.hpp"

namespace conecap {

namespace {

// C^1 blend from 1 at rt = 1 down to 0 at rt = blend_end.
double blend(double rt, double blend_end) {
  if (rt <= 1.0) return 1.0;
  if (rt >= blend_end) return 0.0;
  const double t = (rt - 1.0) / (blend_end - 1.0);
  return 2.0 * t * t * t - 3.0 * t * t + 1.0;
}

double blend_derivative(double rt, double blend_end) {
  if (rt <= 1.0 || rt >= blend_end) return 0.0;
  const double t = (rt - 1.0) / (blend_end - 1.0);
  return (6.0 * t * t - 6.0 * t) / (blend_end - 1.0);
}

std::vector<double> geometric_nodes(double a, double b, std::size_t count,
                                    double q) {
  std::vector<double> nodes(count + 1);
  if (std::abs(q - 1.0) < 1e-14) {
    for (std::size_t i = 0; i <= count; ++i)
      nodes[i] = a + (b - a) * static_cast<double>(i) / count;
  } else {
    const double h0 = (b - a) * (q - 1.0) / (std::pow(q, count) - 1.0);
    for (std::size_t i = 0; i <= count; ++i)
      nodes[i] = a + h0 * (std::pow(q, static_cast<double>(i)) - 1.0) / (q - 1.0);
  }
  nodes.front() = a;
  nodes.back() = b;
  return nodes;
}

}  // namespace

Grid::Mapping Grid::mapping(double rt_value, double theta_value) const {
  if (domain.kind == DomainSpec::Kind::CoordinateSublevel)
    return {rt_value, 1.0, 0.0};
  const double h = domain.h(theta_value);
  const double dh = domain.dh(theta_value);
  const double ph = blend(rt_value, blend_end);
  const double dph = blend_derivative(rt_value, blend_end);
  Mapping mp;
  mp.rho = rt_value * (1.0 + (h - 1.0) * ph);
  mp.drho_drt = 1.0 + (h - 1.0) * (ph + rt_value * dph);
  mp.drho_dtheta = rt_value * dh * ph;
  return mp;
}

double Grid::rt_of_rho(double rho, double theta_value) const {
  if (domain.kind == DomainSpec::Kind::CoordinateSublevel) return rho;
  if (rho >= blend_end) return rho;  // identity zone
  double lo = rt.front(), hi = blend_end;
  const double rho_inner = mapping(lo, theta_value).rho;
  if (rho < rho_inner * (1.0 - 1e-12)) return lo - 1.0;  // inside the domain
  if (rho <= rho_inner) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mapping(mid, theta_value).rho < rho)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

bool Grid::identity_beyond(double rt_value) const {
  return domain.kind == DomainSpec::Kind::CoordinateSublevel ||
         rt_value >= blend_end;
}

double Grid::cell_weight_sum() const {
  double sum = 0.0;
  for (double w : cell_weights) sum += w;
  return sum;
}

std::vector<double> angular_node_weights(const std::vector<double>& theta,
                                         int n) {
  // two-point Gauss per interval: the same rule the cell assembly uses, so
  // nodal integrals are exactly consistent with the discrete operator
  std::vector<double> w(theta.size(), 0.0);
  double gx[2], gw[2];
  gauss_legendre(2, gx, gw);
  for (std::size_t j = 0; j + 1 < theta.size(); ++j) {
    const double a = theta[j], b = theta[j + 1];
    for (int q = 0; q < 2; ++q) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
      const double wq = 0.5 * (b - a) * gw[q] * std::pow(std::sin(t), n - 2);
      w[j] += wq * (b - t) / (b - a);
      w[j + 1] += wq * (t - a) / (b - a);
    }
  }
  return w;
}

Grid build_grid(const ManifoldModel& m, const DomainSpec& d,
                std::string_view end_id, double r_out, std::size_t radial,
                std::size_t angular, double q) {
  if (radial < 8 || angular < 8)
    throw domain_error("build_grid: grid too coarse (need I, J >= 8)");
  if (!(q >= 1.0 && q <= 1.2))
    throw domain_error("build_grid: stretch ratio must lie in [1, 1.2]");
  if (!(r_out > d.max_radius()))
    throw domain_error("build_grid: R_out must lie beyond the domain");
  if (d.is_graph() && m.end(end_id).link.kind != LinkSpec::Kind::RoundSphereScaled)
    throw unsupported_topology_error(
        "build_grid: graph domains require a round link");

  Grid g;
  g.model = m;
  g.domain = d;
  g.end = m.end_index(end_id);
  g.stretch = q;
  const double inner = d.is_graph() ? 1.0 : d.rho0;
  g.rt = geometric_nodes(inner, r_out, radial, q);
  g.theta.resize(angular + 1);
  for (std::size_t j = 0; j <= angular; ++j)
    g.theta[j] = M_PI * static_cast<double>(j) / angular;

  if (d.is_graph()) {
    // Blend zone wide enough to keep the radial map monotone:
    // drho/drt = 1 + (h-1)(phi + rt phi') stays positive when
    // blend_end - 1 > ~1.2 (h_max - 1).
    g.blend_end = std::max(6.0, 1.0 + 2.0 * (d.max_radius() - 1.0));
    if (g.blend_end > 0.5 * r_out)
      throw domain_error("build_grid: R_out too small for the blend zone");
  }

  // Cell measures: 2x2 Gauss points against dmu = f^{n-1} a^{n-1} |S^{n-2}|
  // sin^{n-2}(theta) (drho/drt) drt dtheta.
  const auto& e = m.ends[g.end];
  const int n = m.dimension;
  const double a_link = e.link.scale;
  const double angular_factor =
      std::pow(a_link, n - 1) *
      (n > 2 ? unit_sphere_area(n - 1) : 2.0);
  const double gp = 1.0 / std::sqrt(3.0);
  const std::size_t I = g.radial_cells(), J = g.angular_cells();
  g.cell_weights.assign(I * J, 0.0);
  for (std::size_t ci = 0; ci < I; ++ci) {
    const double drt = g.rt[ci + 1] - g.rt[ci];
    for (std::size_t cj = 0; cj < J; ++cj) {
      const double dth = g.theta[cj + 1] - g.theta[cj];
      double w = 0.0;
      for (double xi : {-gp, gp}) {
        for (double eta : {-gp, gp}) {
          const double rtg = g.rt[ci] + 0.5 * (1.0 + xi) * drt;
          const double thg = g.theta[cj] + 0.5 * (1.0 + eta) * dth;
          const auto mp = g.mapping(rtg, thg);
          if (!(mp.drho_drt > 0.0))
            throw domain_error("build_grid: radial map not monotone");
          w += std::pow(e.warp.value(mp.rho), n - 1) *
               std::pow(std::sin(thg), n - 2) * mp.drho_drt *
               (drt * dth / 4.0);
        }
      }
      g.cell_weights[ci * J + cj] = w * angular_factor;
    }
  }
  return g;
}

}  // namespace conecap
