#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace conecap {

/// Radial warp factor of the model metric g = d(rho)^2 + f(rho)^2 g_L.
/// The registry holds the closed-form profiles used throughout:
///   cone(c):        f = c rho
///   offset(c, b):   f = c rho + b
///   smoothed(c, b): f = c sqrt(rho^2 + b^2)
/// All are asymptotic to the cone of slope c.
struct WarpProfile {
  enum class Kind { Cone, Offset, Smoothed };

  Kind kind = Kind::Cone;
  double slope = 1.0;   // asymptotic slope c > 0
  double offset = 0.0;  // b parameter (unused for cone)

  static WarpProfile cone(double c);
  static WarpProfile offset_profile(double c, double b);
  static WarpProfile smoothed(double c, double b);

  double value(double rho) const;
  double derivative(double rho) const;
  double second_derivative(double rho) const;

  std::string name() const;
};

/// Cross-section of the asymptotic cone. Round links are spheres of radius
/// `scale`; explicit-area links carry only their total measure and are
/// restricted to radial runs.
struct LinkSpec {
  enum class Kind { RoundSphereScaled, ExplicitArea };

  Kind kind = Kind::RoundSphereScaled;
  double scale = 1.0;          // sphere radius a > 0
  double explicit_area = 0.0;  // |L| in its own metric, ExplicitArea only

  static LinkSpec round(double a);
  static LinkSpec explicit_link(double area);

  /// Total link area |L| for ambient dimension n.
  double area(int n) const;
};

struct EndSpec {
  std::string id;
  WarpProfile warp;
  LinkSpec link;
};

/// Warped-product model manifold with one or two asymptotically conical
/// ends. Two-end models use a single signed radial coordinate; each end is
/// parametrised by its own rho >= 0 half-line with its own warp profile.
struct ManifoldModel {
  enum class Topology { SingleEnd, DoubleEnd };

  int dimension = 3;
  Topology topology = Topology::SingleEnd;
  std::vector<EndSpec> ends;
  double ricci_profile_kappa = 0.0;  // metadata, recorded but never enforced

  std::size_t end_index(std::string_view end_id) const;
  const EndSpec& end(std::string_view end_id) const;
};

/// Builds and validates a model: 1 or 2 ends, positive warp samples, slope
/// consistent with the profile (|f/(c rho) - 1| < 1e-3 at rho = 1e6), and,
/// for two ends, C^1 matching of the warps across rho = 0. The Ricci kappa
/// metadata is estimated from the radial curvature -f''/f on samples.
ManifoldModel make_model(int n, std::vector<EndSpec> ends);

/// Asymptotic volume ratio of one end: c^{n-1} |L| / |S^{n-1}|.
double avr_of_end(const ManifoldModel& m, std::string_view end_id);

/// Sum of the per-end asymptotic volume ratios.
double avr_total(const ManifoldModel& m);

/// Area of the coordinate sphere {rho = s} on one end: f(s)^{n-1} |L|.
double sphere_area(const ManifoldModel& m, std::string_view end_id, double s);

/// Volume of the coordinate annulus {s1 <= rho <= s2} on one end, by
/// adaptive quadrature of f^{n-1} (relative tolerance 1e-10).
double annulus_volume(const ManifoldModel& m, std::string_view end_id,
                      double s1, double s2);

/// Bounded starting domain. Either a coordinate sublevel {rho <= rho0} or an
/// axisymmetric graph {rho <= h(theta)} over the link polar angle.
struct DomainSpec {
  enum class Kind { CoordinateSublevel, Graph };
  enum class GraphKind { Ellipsoid };

  Kind kind = Kind::CoordinateSublevel;
  double rho0 = 1.0;  // sublevel radius

  // Graph profiles: ellipsoid(rx, rt) has h = 1/sqrt(cos^2/rx^2 + sin^2/rt^2),
  // the polar-graph of the spheroid with semi-axes (rx, rt, ..., rt).
  GraphKind graph_kind = GraphKind::Ellipsoid;
  double axis_polar = 2.0;       // rx, along theta = 0
  double axis_equatorial = 1.0;  // rt

  static DomainSpec sublevel(double rho0);
  static DomainSpec ellipsoid(double rx, double rt);

  bool is_graph() const { return kind == Kind::Graph; }
  double h(double theta) const;
  double dh(double theta) const;
  double min_radius() const;
  double max_radius() const;
};

}  // namespace conecap
