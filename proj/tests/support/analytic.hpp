#pragma once

#include <cmath>

#include "conecap/geometry.hpp"
#include "conecap/quadrature.hpp"

namespace conecap::testing {

// Closed forms used as independent oracles against the library paths.

/// Prolate spheroid (a, b, b) harmonic capacity, normalized to 1 for the
/// unit ball: sqrt(a^2-b^2) / log((a + sqrt(a^2-b^2)) / b).
inline double spheroid_capacity(double a, double b) {
  const double c = std::sqrt(a * a - b * b);
  return c / std::log((a + c) / b);
}

/// Prolate spheroid surface area by quadrature of the revolution integral.
inline double spheroid_area(double a, double b) {
  return 2.0 * M_PI *
         integrate_value(
             [=](double t) {
               const double st = std::sin(t), ct = std::cos(t);
               return b * st * std::hypot(a * st, b * ct);
             },
             0.0, M_PI);
}

/// Exact tail integral int_rho^inf (c s + b)^{-m} ds for offset warps.
inline double offset_tail(double c, double b, double m, double rho) {
  return std::pow(c * rho + b, 1.0 - m) / (c * (m - 1.0));
}

inline ManifoldModel flat_model() {
  return make_model(
      3, {{"E1", WarpProfile::cone(1.0), LinkSpec::round(1.0)}});
}

inline ManifoldModel cone_model(double a) {
  return make_model(3, {{"E1", WarpProfile::cone(1.0), LinkSpec::round(a)}});
}

inline ManifoldModel offset_model() {
  return make_model(
      3, {{"E1", WarpProfile::offset_profile(1.0, 0.5), LinkSpec::round(1.0)}});
}

inline ManifoldModel two_end_model() {
  return make_model(
      3, {{"E1", WarpProfile::smoothed(1.0, 1.0), LinkSpec::round(1.0)},
          {"E2", WarpProfile::smoothed(1.0, 1.0), LinkSpec::round(1.0)}});
}

}  // namespace conecap::testing
