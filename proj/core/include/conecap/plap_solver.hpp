#pragma once

#include <optional>
#include <vector>

#include "conecap/errors.hpp"
#include "conecap/grid.hpp"

namespace conecap {

struct SolverConfig {
  double p = 2.0;
  double eps_min = -1.0;        // < 0: default 1e-6 / R_out
  double eps_start = 0.1;
  double eps_factor = 0.25;     // continuation schedule eps_k = eps0 * factor^k
  int max_outer = 200;
  double update_tol = 1e-8;     // sup-norm relative update at the final stage
  double stage_tol = 1e-4;      // update tolerance at intermediate eps stages
  double linear_tol = 1e-10;    // PCG relative residual
  int max_linear_iter = 2000;
  int max_halvings = 30;
  bool accelerate = true;       // Aitken step extension on steady contraction

  void validate(int dimension) const;
};

struct ResidualStats {
  std::vector<double> energy;      // accepted objective value per iteration
  std::vector<double> updates;     // sup-norm update per iteration
  std::vector<int> linear_iters;   // PCG iterations per outer iteration
  std::vector<double> stage_eps;   // continuation eps of each iteration
  double achieved_eps = 0.0;
  double final_update = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

/// Scalar field on grid nodes (index i * (J+1) + j).
struct DiscreteField {
  Grid grid;
  std::vector<double> values;
  double p = 2.0;
  double achieved_eps = 0.0;

  double value(std::size_t i, std::size_t j) const {
    return values[grid.node(i, j)];
  }
  std::size_t radial_nodes() const { return grid.rt.size(); }
  std::size_t angular_nodes() const { return grid.theta.size(); }
};

struct solver_stall_error : error {
  solver_stall_error(const std::string& what, ResidualStats s)
      : error(what), stats(std::move(s)) {}
  ResidualStats stats;
};

/// Minimizes the regularized p-Dirichlet energy
///   E_eps(v) = sum_gp w (|grad v|_g^2 + eps^2)^{p/2}
/// with v = 1 on the inner boundary and the outer row tied to its radial
/// neighbour by the exact decay ratio of radial solutions (the two-point
/// form of dv/drho + ((n-p)/(p-1)) v/rho = 0, exact on every registry
/// warp), by lagged diffusivity with eps continuation. A step is halved
/// whenever the energy would increase.
std::pair<DiscreteField, ResidualStats> solve_p_laplace(
    const ManifoldModel& m, const DomainSpec& d, const Grid& grid,
    const SolverConfig& cfg, const DiscreteField* warm_start = nullptr);

/// Quadrature of (|grad v|^2 + eps^2)^{p/2} over the grid.
double energy_of(const DiscreteField& field, double p, double eps);

/// Nodal gradient in the orthonormal frame (rho and theta components);
/// centered differences in the interior, one-sided at the boundary, both
/// second order, composed with the grid transform.
struct GradientField {
  std::vector<double> d_rho;
  std::vector<double> d_theta;
};
GradientField discrete_gradient(const DiscreteField& field);

/// Field values and radial derivatives sampled on the coordinate sphere
/// {rho = s} at the grid's theta nodes. Radial interpolation is linear in
/// log-log, exact for power-law profiles.
struct SphereSamples {
  double s = 0.0;
  std::vector<double> u;
  std::vector<double> du_rho;
  std::vector<double> du_theta;  // orthonormal theta component

  double sup() const;
  double inf() const;
  /// Mean against the induced sphere measure.
  double mean(const Grid& grid) const;
};
SphereSamples sample_sphere(const DiscreteField& field, double s);

/// Like sample_sphere but with plain polynomial interpolation; for fields
/// that change sign (for instance Moser-transformed flows).
SphereSamples sample_sphere_linear(const DiscreteField& field, double s);

/// Largest coordinate-sphere radius fully inside the grid.
double max_sphere_radius(const DiscreteField& field);

}  // namespace conecap
