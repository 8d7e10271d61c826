#include "conecap/plap_solver.hpp"

#include <algorithm>
#include <cmath>

#include "conecap/radial_oracle.hpp"
#include "conecap/sparse.hpp"
#include "conecap/special.hpp"

namespace conecap {

namespace {

// Per-Gauss-point assembly data for the 2x2 rule on bilinear cells.
// The orthonormal-frame gradient at a point is T * (v_rt, v_theta) with
//   T = [ 1/Psi_rt              0       ]
//       [ -Psi_th/(Psi_rt f a)  1/(f a) ]
// and the weight folds in the measure and the mapping Jacobian.
struct GaussPoint {
  std::size_t nodes[4];
  double b_rt[4];
  double b_th[4];
  double t11, t21, t22;
  double weight;
};

// Outer boundary: the decay condition du/drho = kappa u with
// kappa = I'(R)/I(R) from the warp's tail integral, exact for radial
// solutions on every registry warp (the lambda/rho Robin condition on
// cones). It enters as the p-homogeneous functional
//   B(v) = (1/p) |kappa|^{p-1} surf_int |v|^p dsigma,
// whose lagged quadratic shares the bulk majorization constant, so the
// damped iteration is a genuine descent for p <= 2.
struct Assembly {
  std::vector<GaussPoint> gps;
  std::vector<double> boundary_weight;  // dsigma hat-weights, outer row
  double kappa_mag = 0.0;
};

Assembly build_assembly(const Grid& grid, double p) {
  const auto& model = grid.model;
  const auto& e = model.ends[grid.end];
  const int n = model.dimension;
  const double a_link = e.link.scale;
  const double angular_factor =
      std::pow(a_link, n - 1) * (n > 2 ? unit_sphere_area(n - 1) : 2.0);
  const double gp1 = 1.0 / std::sqrt(3.0);
  const std::size_t I = grid.radial_cells(), J = grid.angular_cells();

  Assembly out;
  out.gps.reserve(I * J * 4);
  for (std::size_t ci = 0; ci < I; ++ci) {
    const double drt = grid.rt[ci + 1] - grid.rt[ci];
    for (std::size_t cj = 0; cj < J; ++cj) {
      const double dth = grid.theta[cj + 1] - grid.theta[cj];
      const std::size_t nodes[4] = {
          grid.node(ci, cj), grid.node(ci + 1, cj), grid.node(ci, cj + 1),
          grid.node(ci + 1, cj + 1)};
      for (double xi : {-gp1, gp1}) {
        for (double eta : {-gp1, gp1}) {
          GaussPoint g;
          std::copy(nodes, nodes + 4, g.nodes);
          const double dnx[4] = {-(1 - eta) / 4, (1 - eta) / 4, -(1 + eta) / 4,
                                 (1 + eta) / 4};
          const double dne[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 - xi) / 4,
                                 (1 + xi) / 4};
          for (int k = 0; k < 4; ++k) {
            g.b_rt[k] = dnx[k] * 2.0 / drt;
            g.b_th[k] = dne[k] * 2.0 / dth;
          }
          const double rtg = grid.rt[ci] + 0.5 * (1.0 + xi) * drt;
          const double thg = grid.theta[cj] + 0.5 * (1.0 + eta) * dth;
          const auto mp = grid.mapping(rtg, thg);
          const double f = e.warp.value(mp.rho);
          g.t11 = 1.0 / mp.drho_drt;
          g.t21 = -(mp.drho_dtheta / mp.drho_drt) / (f * a_link);
          g.t22 = 1.0 / (f * a_link);
          g.weight = std::pow(f, n - 1) * std::pow(std::sin(thg), n - 2) *
                     mp.drho_drt * (drt * dth / 4.0) * angular_factor;
          out.gps.push_back(g);
        }
      }
    }
  }

  const double R = grid.rt.back();
  out.kappa_mag = std::pow(e.warp.value(R), -(n - 1.0) / (p - 1.0)) /
                  warp_tail_integral(e.warp, n, p, R);
  const double surface_factor =
      std::pow(e.warp.value(R), n - 1) * angular_factor;
  out.boundary_weight = angular_node_weights(grid.theta, n);
  for (double& w : out.boundary_weight) w *= surface_factor;
  return out;
}

double gp_gradsq(const GaussPoint& g, const std::vector<double>& u) {
  double grt = 0.0, gth = 0.0;
  for (int k = 0; k < 4; ++k) {
    grt += g.b_rt[k] * u[g.nodes[k]];
    gth += g.b_th[k] * u[g.nodes[k]];
  }
  const double e1 = g.t11 * grt;
  const double e2 = g.t21 * grt + g.t22 * gth;
  return e1 * e1 + e2 * e2;
}

constexpr double kValueFloor = 1e-300;

// Regularized bulk energy plus the decay boundary functional; the objective
// the damping rule watches.
double objective(const Assembly& as, const Grid& grid,
                 const std::vector<double>& u, double p, double eps) {
  double E = 0.0;
  for (const auto& g : as.gps)
    E += g.weight * std::pow(gp_gradsq(g, u) + eps * eps, 0.5 * p);
  const std::size_t last = grid.rt.size() - 1;
  const double gcoef = std::pow(as.kappa_mag, p - 1.0) / p;
  for (std::size_t j = 0; j < grid.theta.size(); ++j) {
    const double uv = std::abs(u[grid.node(last, j)]);
    E += gcoef * std::pow(uv, p) * as.boundary_weight[j];
  }
  return E;
}

// Stiffness of the frozen-coefficient quadratic form. Bulk coefficient per
// Gauss point is (|grad u|^2 + eps^2)^{expo}; the boundary diagonal is the
// matching lagged coefficient |kappa|^{p-1} |u|^{p-2}. expo = 0 selects the
// linear initial guess (unit coefficients, p = 2 boundary form).
CsrMatrix assemble_matrix(const Assembly& as, const Grid& grid,
                          const std::vector<double>& u, double p, double expo,
                          double eps, std::size_t n_nodes) {
  std::vector<std::size_t> rows, cols;
  std::vector<double> vals;
  const std::size_t reserve = as.gps.size() * 16 + grid.theta.size();
  rows.reserve(reserve);
  cols.reserve(reserve);
  vals.reserve(reserve);
  for (const auto& g : as.gps) {
    const double coeff =
        expo == 0.0 ? g.weight
                    : g.weight * std::pow(gp_gradsq(g, u) + eps * eps, expo);
    const double m11 = g.t11 * g.t11 + g.t21 * g.t21;
    const double m12 = g.t21 * g.t22;
    const double m22 = g.t22 * g.t22;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        const double v =
            coeff * (g.b_rt[r] * m11 * g.b_rt[c] +
                     (g.b_rt[r] * g.b_th[c] + g.b_th[r] * g.b_rt[c]) * m12 +
                     g.b_th[r] * m22 * g.b_th[c]);
        rows.push_back(g.nodes[r]);
        cols.push_back(g.nodes[c]);
        vals.push_back(v);
      }
    }
  }
  const std::size_t last = grid.rt.size() - 1;
  for (std::size_t j = 0; j < grid.theta.size(); ++j) {
    const std::size_t node = grid.node(last, j);
    double bcoef;
    if (expo == 0.0) {
      bcoef = as.kappa_mag;
    } else {
      const double uv = std::max(std::abs(u[node]), kValueFloor);
      bcoef = std::pow(as.kappa_mag, p - 1.0) * std::pow(uv, p - 2.0);
    }
    rows.push_back(node);
    cols.push_back(node);
    vals.push_back(bcoef * as.boundary_weight[j]);
  }
  return CsrMatrix::from_triplets(n_nodes, rows, cols, vals);
}

}  // namespace

void SolverConfig::validate(int dimension) const {
  const double lo = 1.02;
  const double hi = std::min(dimension - 0.05, 3.5);
  if (!(p >= lo && p <= hi))
    throw domain_error("solver: p outside the supported range [1.02, " +
                       std::to_string(hi) + "]");
  if (eps_min == 0.0 || eps_start <= 0.0 || update_tol <= 0.0 ||
      linear_tol <= 0.0)
    throw domain_error("solver: tolerances must be positive");
}

std::pair<DiscreteField, ResidualStats> solve_p_laplace(
    const ManifoldModel& m, const DomainSpec& d, const Grid& grid,
    const SolverConfig& cfg, const DiscreteField* warm_start) {
  cfg.validate(m.dimension);
  (void)d;

  const double p = cfg.p;
  const std::size_t n_nodes = grid.node_count();
  const std::size_t J1 = grid.theta.size();
  const double eps_min =
      cfg.eps_min > 0.0 ? cfg.eps_min : 1e-6 / grid.outer_radius();

  const Assembly as = build_assembly(grid, p);

  // Dirichlet row i = 0; everything else is an unknown.
  std::vector<std::size_t> free_of_node(n_nodes, static_cast<std::size_t>(-1));
  std::vector<std::size_t> node_of_free;
  node_of_free.reserve(n_nodes - J1);
  for (std::size_t id = J1; id < n_nodes; ++id) {
    free_of_node[id] = node_of_free.size();
    node_of_free.push_back(id);
  }
  const std::size_t n_free = node_of_free.size();

  std::vector<double> u(n_nodes, 0.0);
  for (std::size_t j = 0; j < J1; ++j) u[j] = 1.0;
  if (warm_start && warm_start->values.size() == n_nodes) {
    u = warm_start->values;
    for (std::size_t j = 0; j < J1; ++j) u[j] = 1.0;
  }

  ResidualStats stats;

  auto linear_step = [&](double expo, double eps,
                         int* pcg_iters) -> std::vector<double> {
    CsrMatrix K = assemble_matrix(as, grid, u, p, expo, eps, n_nodes);
    std::vector<std::size_t> rr, cc;
    std::vector<double> vv;
    std::vector<double> rhs(n_free, 0.0);
    for (std::size_t r = 0; r < n_nodes; ++r) {
      const std::size_t fr = free_of_node[r];
      if (fr == static_cast<std::size_t>(-1)) continue;
      for (std::size_t k = K.row_ptr[r]; k < K.row_ptr[r + 1]; ++k) {
        const std::size_t fc = free_of_node[K.col[k]];
        if (fc == static_cast<std::size_t>(-1))
          rhs[fr] -= K.val[k] * u[K.col[k]];
        else {
          rr.push_back(fr);
          cc.push_back(fc);
          vv.push_back(K.val[k]);
        }
      }
    }
    CsrMatrix Kff = CsrMatrix::from_triplets(n_free, rr, cc, vv);
    IncompleteCholesky prec;
    prec.factor(Kff);
    std::vector<double> x(n_free);
    for (std::size_t i = 0; i < n_free; ++i) x[i] = u[node_of_free[i]];
    const auto res =
        pcg_solve(Kff, prec, rhs, x, cfg.linear_tol, cfg.max_linear_iter);
    if (pcg_iters) *pcg_iters = res.iterations;
    std::vector<double> out = u;
    for (std::size_t i = 0; i < n_free; ++i) out[node_of_free[i]] = x[i];
    return out;
  };

  if (!warm_start) u = linear_step(0.0, cfg.eps_start, nullptr);

  double eps = cfg.eps_start;
  const double expo = 0.5 * (p - 2.0);
  bool done = false;
  double last_update = 0.0;
  std::vector<double> update_history;

  while (!done) {
    const bool final_stage = eps <= eps_min * (1.0 + 1e-12);
    const double tol = final_stage ? cfg.update_tol : cfg.stage_tol;
    double E_prev = objective(as, grid, u, p, eps);
    update_history.clear();

    const int inner_cap = final_stage ? cfg.max_outer : 16;
    for (int inner = 0; inner < inner_cap; ++inner) {
      if (stats.outer_iterations >= cfg.max_outer) break;
      int pcg_iters = 0;
      std::vector<double> u_lin = linear_step(expo, eps, &pcg_iters);

      double raw_update = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n_nodes; ++i) {
        raw_update = std::max(raw_update, std::abs(u_lin[i] - u[i]));
        scale = std::max(scale, std::abs(u_lin[i]));
      }

      // Aitken step extension when the contraction ratio is steady; the
      // energy check below still guards the extended step.
      double step = 1.0;
      if (cfg.accelerate && update_history.size() >= 2 && raw_update > 0.0) {
        const double h1 = update_history.back();
        const double h0 = update_history[update_history.size() - 2];
        if (h1 > 0.0 && h0 > 0.0) {
          const double r1 = raw_update / h1;
          const double r0 = h1 / h0;
          if (r1 > 0.3 && r1 < 0.9999 && std::abs(r1 - r0) < 0.05 * r1)
            step = std::min(1.0 / (1.0 - r1), 1e4);
        }
      }

      bool accepted = false;
      std::vector<double> u_try(n_nodes);
      double E_try = 0.0;
      for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
        for (std::size_t i = 0; i < n_nodes; ++i)
          u_try[i] = u[i] + step * (u_lin[i] - u[i]);
        E_try = objective(as, grid, u_try, p, eps);
        if (E_try <= E_prev + 1e-12 * std::abs(E_prev)) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (raw_update < 1e2 * cfg.update_tol * scale) break;
        stats.converged = false;
        stats.achieved_eps = eps;
        throw solver_stall_error(
            "solve_p_laplace: damping exhausted without energy decrease",
            stats);
      }

      update_history.push_back(raw_update);
      u.swap(u_try);
      E_prev = E_try;
      last_update = raw_update / std::max(scale, kValueFloor);
      stats.energy.push_back(E_try);
      stats.updates.push_back(last_update);
      stats.linear_iters.push_back(pcg_iters);
      stats.stage_eps.push_back(eps);
      stats.outer_iterations += 1;
      if (last_update < tol) break;
    }

    if (final_stage) {
      done = true;
      stats.converged = last_update < cfg.update_tol * 10.0;
      if (!stats.converged && stats.outer_iterations >= cfg.max_outer) {
        stats.achieved_eps = eps;
        throw solver_stall_error(
            "solve_p_laplace: iteration budget exhausted before convergence",
            stats);
      }
    } else {
      eps = std::max(eps_min, eps * cfg.eps_factor);
    }
  }

  stats.achieved_eps = eps_min;
  stats.final_update = last_update;

  DiscreteField field;
  field.grid = grid;
  field.values = std::move(u);
  field.p = p;
  field.achieved_eps = eps_min;
  return {std::move(field), std::move(stats)};
}

double energy_of(const DiscreteField& field, double p, double eps) {
  Assembly as = build_assembly(field.grid, p);
  double E = 0.0;
  for (const auto& g : as.gps)
    E += g.weight * std::pow(gp_gradsq(g, field.values) + eps * eps, 0.5 * p);
  return E;
}

namespace {

// second-order 3-point derivative on nonuniform abscissae
double d3p(double x0, double x1, double x2, double y0, double y1, double y2,
           double at) {
  return y0 * (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
         y1 * (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
         y2 * (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
}

}  // namespace

GradientField discrete_gradient(const DiscreteField& field) {
  const Grid& g = field.grid;
  const auto& e = g.model.ends[g.end];
  const double a_link = e.link.scale;
  const std::size_t NI = g.rt.size(), NJ = g.theta.size();
  GradientField out;
  out.d_rho.assign(NI * NJ, 0.0);
  out.d_theta.assign(NI * NJ, 0.0);

  auto val = [&](std::size_t i, std::size_t j) {
    return field.values[g.node(i, j)];
  };

  for (std::size_t i = 0; i < NI; ++i) {
    const std::size_t i0 = (i == 0) ? 0 : (i == NI - 1 ? NI - 3 : i - 1);
    const double x0 = g.rt[i0], x1 = g.rt[i0 + 1], x2 = g.rt[i0 + 2];
    for (std::size_t j = 0; j < NJ; ++j) {
      const double drt =
          d3p(x0, x1, x2, val(i0, j), val(i0 + 1, j), val(i0 + 2, j), g.rt[i]);
      const std::size_t j0 = (j == 0) ? 0 : (j == NJ - 1 ? NJ - 3 : j - 1);
      const double t0 = g.theta[j0], t1 = g.theta[j0 + 1], t2 = g.theta[j0 + 2];
      const double dth = d3p(t0, t1, t2, val(i, j0), val(i, j0 + 1),
                             val(i, j0 + 2), g.theta[j]);
      const auto mp = g.mapping(g.rt[i], g.theta[j]);
      const double f = e.warp.value(mp.rho);
      out.d_rho[g.node(i, j)] = drt / mp.drho_drt;
      out.d_theta[g.node(i, j)] =
          (dth - (mp.drho_dtheta / mp.drho_drt) * drt) / (f * a_link);
    }
  }
  return out;
}

double SphereSamples::sup() const {
  return *std::max_element(u.begin(), u.end());
}

double SphereSamples::inf() const {
  return *std::min_element(u.begin(), u.end());
}

double SphereSamples::mean(const Grid& grid) const {
  const auto w = angular_node_weights(grid.theta, grid.model.dimension);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < grid.theta.size(); ++j) {
    num += w[j] * u[j];
    den += w[j];
  }
  return num / den;
}

SphereSamples sample_sphere(const DiscreteField& field, double s) {
  const Grid& g = field.grid;
  const auto& e = g.model.ends[g.end];
  const double a_link = e.link.scale;
  const std::size_t NI = g.rt.size(), NJ = g.theta.size();
  if (!(s < g.rt.back()))
    throw domain_error("sample_sphere: radius outside grid coverage");

  SphereSamples out;
  out.s = s;
  out.u.resize(NJ);
  out.du_rho.resize(NJ);
  out.du_theta.resize(NJ);

  for (std::size_t j = 0; j < NJ; ++j) {
    const double rts = g.rt_of_rho(s, g.theta[j]);
    if (!(rts >= g.rt.front()))
      throw domain_error("sample_sphere: sphere dips inside the domain");
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(g.rt.begin(), g.rt.end(), rts) - g.rt.begin());
    k = std::min(std::max<std::size_t>(k, 2), NI - 1);
    const std::size_t k0 = k - 2;
    double lx[3], ly[3];
    for (int q = 0; q < 3; ++q) {
      lx[q] = std::log(g.rt[k0 + q]);
      ly[q] = std::log(std::max(field.values[g.node(k0 + q, j)], kValueFloor));
    }
    const double at = std::log(rts);
    const double L0 =
        (at - lx[1]) * (at - lx[2]) / ((lx[0] - lx[1]) * (lx[0] - lx[2]));
    const double L1 =
        (at - lx[0]) * (at - lx[2]) / ((lx[1] - lx[0]) * (lx[1] - lx[2]));
    const double L2 =
        (at - lx[0]) * (at - lx[1]) / ((lx[2] - lx[0]) * (lx[2] - lx[1]));
    const double uval = std::exp(L0 * ly[0] + L1 * ly[1] + L2 * ly[2]);
    const double dlog = d3p(lx[0], lx[1], lx[2], ly[0], ly[1], ly[2], at);
    out.u[j] = uval;
    const auto mp = g.mapping(rts, g.theta[j]);
    out.du_rho[j] = uval * dlog / rts / mp.drho_drt;
  }
  const double f = e.warp.value(s);
  for (std::size_t j = 0; j < NJ; ++j) {
    const std::size_t j0 = (j == 0) ? 0 : (j == NJ - 1 ? NJ - 3 : j - 1);
    const double dth =
        d3p(g.theta[j0], g.theta[j0 + 1], g.theta[j0 + 2], out.u[j0],
            out.u[j0 + 1], out.u[j0 + 2], g.theta[j]);
    out.du_theta[j] = dth / (f * a_link);
  }
  return out;
}

SphereSamples sample_sphere_linear(const DiscreteField& field, double s) {
  const Grid& g = field.grid;
  const auto& e = g.model.ends[g.end];
  const double a_link = e.link.scale;
  const std::size_t NI = g.rt.size(), NJ = g.theta.size();
  if (!(s < g.rt.back()))
    throw domain_error("sample_sphere_linear: radius outside grid coverage");

  SphereSamples out;
  out.s = s;
  out.u.resize(NJ);
  out.du_rho.resize(NJ);
  out.du_theta.resize(NJ);

  for (std::size_t j = 0; j < NJ; ++j) {
    const double rts = g.rt_of_rho(s, g.theta[j]);
    if (!(rts >= g.rt.front()))
      throw domain_error("sample_sphere_linear: sphere dips inside the domain");
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(g.rt.begin(), g.rt.end(), rts) - g.rt.begin());
    k = std::min(std::max<std::size_t>(k, 2), NI - 1);
    const std::size_t k0 = k - 2;
    const double x0 = g.rt[k0], x1 = g.rt[k0 + 1], x2 = g.rt[k0 + 2];
    const double y0 = field.values[g.node(k0, j)];
    const double y1 = field.values[g.node(k0 + 1, j)];
    const double y2 = field.values[g.node(k0 + 2, j)];
    const double L0 = (rts - x1) * (rts - x2) / ((x0 - x1) * (x0 - x2));
    const double L1 = (rts - x0) * (rts - x2) / ((x1 - x0) * (x1 - x2));
    const double L2 = (rts - x0) * (rts - x1) / ((x2 - x0) * (x2 - x1));
    out.u[j] = L0 * y0 + L1 * y1 + L2 * y2;
    const auto mp = g.mapping(rts, g.theta[j]);
    out.du_rho[j] = d3p(x0, x1, x2, y0, y1, y2, rts) / mp.drho_drt;
  }
  const double f = e.warp.value(s);
  for (std::size_t j = 0; j < NJ; ++j) {
    const std::size_t j0 = (j == 0) ? 0 : (j == NJ - 1 ? NJ - 3 : j - 1);
    const double dth =
        d3p(g.theta[j0], g.theta[j0 + 1], g.theta[j0 + 2], out.u[j0],
            out.u[j0 + 1], out.u[j0 + 2], g.theta[j]);
    out.du_theta[j] = dth / (f * a_link);
  }
  return out;
}

double max_sphere_radius(const DiscreteField& field) {
  return field.grid.rt.back() * 0.999;
}

}  // namespace conecap
