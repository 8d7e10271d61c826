#include "conecap/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "conecap/errors.hpp"
#include "conecap/quadrature.hpp"
#include "conecap/special.hpp"

namespace conecap {

WarpProfile WarpProfile::cone(double c) { return {Kind::Cone, c, 0.0}; }

WarpProfile WarpProfile::offset_profile(double c, double b) {
  return {Kind::Offset, c, b};
}

WarpProfile WarpProfile::smoothed(double c, double b) {
  return {Kind::Smoothed, c, b};
}

double WarpProfile::value(double rho) const {
  switch (kind) {
    case Kind::Cone:
      return slope * rho;
    case Kind::Offset:
      return slope * rho + offset;
    case Kind::Smoothed:
      return slope * std::sqrt(rho * rho + offset * offset);
  }
  return 0.0;
}

double WarpProfile::derivative(double rho) const {
  switch (kind) {
    case Kind::Cone:
    case Kind::Offset:
      return slope;
    case Kind::Smoothed:
      return slope * rho / std::sqrt(rho * rho + offset * offset);
  }
  return 0.0;
}

double WarpProfile::second_derivative(double rho) const {
  switch (kind) {
    case Kind::Cone:
    case Kind::Offset:
      return 0.0;
    case Kind::Smoothed: {
      const double r2 = rho * rho + offset * offset;
      return slope * offset * offset / (r2 * std::sqrt(r2));
    }
  }
  return 0.0;
}

std::string WarpProfile::name() const {
  switch (kind) {
    case Kind::Cone:
      return "cone";
    case Kind::Offset:
      return "offset";
    case Kind::Smoothed:
      return "smoothed";
  }
  return "?";
}

LinkSpec LinkSpec::round(double a) {
  return {Kind::RoundSphereScaled, a, 0.0};
}

LinkSpec LinkSpec::explicit_link(double area) {
  return {Kind::ExplicitArea, 1.0, area};
}

double LinkSpec::area(int n) const {
  if (kind == Kind::RoundSphereScaled)
    return std::pow(scale, n - 1) * unit_sphere_area(n);
  return explicit_area;
}

std::size_t ManifoldModel::end_index(std::string_view end_id) const {
  for (std::size_t i = 0; i < ends.size(); ++i)
    if (ends[i].id == end_id) return i;
  throw domain_error("unknown end id: " + std::string(end_id));
}

const EndSpec& ManifoldModel::end(std::string_view end_id) const {
  return ends[end_index(end_id)];
}

namespace {

void validate_end(const EndSpec& e, int n) {
  if (e.warp.slope <= 0.0)
    throw invalid_model_error("warp slope must be positive on end " + e.id);
  if (e.link.kind == LinkSpec::Kind::RoundSphereScaled && e.link.scale <= 0.0)
    throw invalid_model_error("link scale must be positive on end " + e.id);
  if (e.link.kind == LinkSpec::Kind::ExplicitArea && e.link.explicit_area <= 0.0)
    throw invalid_model_error("explicit link area must be positive on end " +
                              e.id);
  // positivity samples over a wide range
  for (double rho : {1e-3, 1e-1, 1.0, 1e1, 1e3, 1e6}) {
    if (!(e.warp.value(rho) > 0.0))
      throw invalid_model_error("non-positive warp sample on end " + e.id);
  }
  // slope consistency at rho = 1e6
  const double ratio = e.warp.value(1e6) / (e.warp.slope * 1e6);
  if (std::abs(ratio - 1.0) >= 1e-3)
    throw invalid_model_error("warp is not asymptotic to its slope on end " +
                              e.id);
  (void)n;
}

double kappa_estimate(const ManifoldModel& m) {
  // Radial curvature -f''/f; the bound constant absorbs only the negative
  // part, sampled on a coarse ladder.
  double kappa_sq = 0.0;
  for (const auto& e : m.ends) {
    for (double rho : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0, 256.0}) {
      const double f = e.warp.value(std::max(rho, 1e-9));
      const double fpp = e.warp.second_derivative(std::max(rho, 1e-9));
      const double val = fpp / f * (1.0 + rho) * (1.0 + rho);
      kappa_sq = std::max(kappa_sq, val);
    }
  }
  return std::sqrt(kappa_sq);
}

}  // namespace

ManifoldModel make_model(int n, std::vector<EndSpec> ends) {
  if (n < 3) throw invalid_model_error("dimension must be at least 3");
  if (ends.empty() || ends.size() > 2)
    throw unsupported_topology_error("models support one or two ends");
  for (const auto& e : ends) validate_end(e, n);

  ManifoldModel m;
  m.dimension = n;
  m.ends = std::move(ends);
  m.topology = m.ends.size() == 1 ? ManifoldModel::Topology::SingleEnd
                                  : ManifoldModel::Topology::DoubleEnd;
  if (m.topology == ManifoldModel::Topology::DoubleEnd) {
    const auto& a = m.ends[0];
    const auto& b = m.ends[1];
    if (a.link.kind != b.link.kind)
      throw invalid_model_error("two-end models need matching link topology");
    // C^1 matching of the glued warp across rho = 0 in the signed coordinate.
    const double f0a = a.warp.value(0.0), f0b = b.warp.value(0.0);
    if (std::abs(f0a - f0b) > 1e-12 * std::max(f0a, f0b))
      throw invalid_model_error("two-end warps disagree at rho = 0");
    const double d0a = a.warp.derivative(0.0), d0b = b.warp.derivative(0.0);
    if (std::abs(d0a) > 1e-9 || std::abs(d0b) > 1e-9)
      throw invalid_model_error(
          "two-end warps must have vanishing slope at rho = 0");
  }
  m.ricci_profile_kappa = kappa_estimate(m);
  return m;
}

double avr_of_end(const ManifoldModel& m, std::string_view end_id) {
  const auto& e = m.end(end_id);
  return std::pow(e.warp.slope, m.dimension - 1) * e.link.area(m.dimension) /
         unit_sphere_area(m.dimension);
}

double avr_total(const ManifoldModel& m) {
  double sum = 0.0;
  for (const auto& e : m.ends) sum += avr_of_end(m, e.id);
  return sum;
}

double sphere_area(const ManifoldModel& m, std::string_view end_id, double s) {
  if (!(s >= 0.0)) throw domain_error("sphere_area: radius outside domain");
  const auto& e = m.end(end_id);
  return std::pow(e.warp.value(s), m.dimension - 1) * e.link.area(m.dimension);
}

double annulus_volume(const ManifoldModel& m, std::string_view end_id,
                      double s1, double s2) {
  if (!(s1 < s2)) throw domain_error("annulus_volume: reversed bounds");
  if (s1 < 0.0) throw domain_error("annulus_volume: negative radius");
  const auto& e = m.end(end_id);
  const int n = m.dimension;
  const double radial = integrate_value(
      [&](double s) { return std::pow(e.warp.value(s), n - 1); }, s1, s2);
  return radial * e.link.area(n);
}

DomainSpec DomainSpec::sublevel(double rho0) {
  DomainSpec d;
  d.kind = Kind::CoordinateSublevel;
  d.rho0 = rho0;
  return d;
}

DomainSpec DomainSpec::ellipsoid(double rx, double rt) {
  DomainSpec d;
  d.kind = Kind::Graph;
  d.graph_kind = GraphKind::Ellipsoid;
  d.axis_polar = rx;
  d.axis_equatorial = rt;
  return d;
}

double DomainSpec::h(double theta) const {
  if (kind == Kind::CoordinateSublevel) return rho0;
  const double c = std::cos(theta), s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / (axis_polar * axis_polar) +
                         s * s / (axis_equatorial * axis_equatorial));
}

double DomainSpec::dh(double theta) const {
  if (kind == Kind::CoordinateSublevel) return 0.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const double ax2 = axis_polar * axis_polar;
  const double at2 = axis_equatorial * axis_equatorial;
  const double g = c * c / ax2 + s * s / at2;
  const double dg = 2.0 * s * c * (1.0 / at2 - 1.0 / ax2);
  return -0.5 * dg / (g * std::sqrt(g));
}

double DomainSpec::min_radius() const {
  if (kind == Kind::CoordinateSublevel) return rho0;
  return std::min(axis_polar, axis_equatorial);
}

double DomainSpec::max_radius() const {
  if (kind == Kind::CoordinateSublevel) return rho0;
  return std::max(axis_polar, axis_equatorial);
}

}  // namespace conecap
