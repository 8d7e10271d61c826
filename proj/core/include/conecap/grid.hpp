#pragma once

#include <cstddef>
#include <vector>

#include "conecap/geometry.hpp"

namespace conecap {

/// Tensor-product grid on one end, in coordinates (rt, theta). For sublevel
/// domains rt is the physical radius. For graph domains the inner boundary
/// is mapped to rt = 1 and the transform blends back to the identity at
/// rt = blend_end, so that coordinate spheres beyond the blend zone are grid
/// lines. Radial nodes are geometrically stretched with ratio q.
struct Grid {
  ManifoldModel model;
  DomainSpec domain;
  std::size_t end = 0;

  std::vector<double> rt;     // radial nodes, size I+1, strictly increasing
  std::vector<double> theta;  // angular nodes, size J+1, uniform on [0, pi]
  double blend_end = 6.0;
  double stretch = 1.0;

  std::vector<double> cell_weights;  // measure of each (i, j) cell

  std::size_t radial_cells() const { return rt.size() - 1; }
  std::size_t angular_cells() const { return theta.size() - 1; }
  std::size_t node_count() const { return rt.size() * theta.size(); }
  std::size_t node(std::size_t i, std::size_t j) const {
    return i * theta.size() + j;
  }

  double outer_radius() const { return rt.back(); }

  /// Physical radius and its partial derivatives at a grid point.
  struct Mapping {
    double rho;
    double drho_drt;
    double drho_dtheta;
  };
  Mapping mapping(double rt_value, double theta_value) const;

  /// Inverse of the radial mapping at fixed theta (monotone bisection).
  double rt_of_rho(double rho, double theta_value) const;

  /// True once rt >= blend_end, where the transform is the identity.
  bool identity_beyond(double rt_value) const;

  double cell_weight_sum() const;
};

/// Builds a conforming grid. Requires R_out beyond the domain, I, J >= 8 and
/// q in [1, 1.2]. Graph domains require a round link.
Grid build_grid(const ManifoldModel& m, const DomainSpec& d,
                std::string_view end_id, double r_out, std::size_t radial,
                std::size_t angular, double q);

/// Nodal weights for integrals against sin^{n-2}(theta) d(theta): the hat
/// function of each node integrated exactly (per-interval Gauss rule), so
/// that integrating a nodal field is second order with no weight bias.
std::vector<double> angular_node_weights(const std::vector<double>& theta,
                                         int n);

}  // namespace conecap
