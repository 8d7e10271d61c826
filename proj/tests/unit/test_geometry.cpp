#include <cmath>

#include "../support/analytic.hpp"
#include "conecap/errors.hpp"
#include "conecap/geometry.hpp"
#include "conecap/special.hpp"
#include "doctest.h"

using namespace conecap;
using namespace conecap::testing;

TEST_CASE("model construction and validation") {
  const auto flat = flat_model();
  CHECK(flat.dimension == 3);
  CHECK(flat.topology == ManifoldModel::Topology::SingleEnd);

  const auto two = two_end_model();
  CHECK(two.topology == ManifoldModel::Topology::DoubleEnd);
  // slope check on both ends: f / rho -> 1
  for (const auto& e : two.ends)
    CHECK(std::abs(e.warp.value(1e6) / 1e6 - 1.0) < 1e-3);

  SUBCASE("three ends rejected") {
    std::vector<EndSpec> ends(3,
                              {"E", WarpProfile::cone(1.0), LinkSpec::round(1.0)});
    CHECK_THROWS_AS(make_model(3, ends), unsupported_topology_error);
  }
  SUBCASE("non-positive warp rejected") {
    // negative offset drives f below zero near the tip
    CHECK_THROWS_AS(
        make_model(3, {{"E1", WarpProfile::offset_profile(1.0, -0.5),
                        LinkSpec::round(1.0)}}),
        invalid_model_error);
  }
  SUBCASE("two-end warps must match at the neck") {
    CHECK_THROWS_AS(
        make_model(3, {{"E1", WarpProfile::smoothed(1.0, 1.0),
                        LinkSpec::round(1.0)},
                       {"E2", WarpProfile::smoothed(1.0, 2.0),
                        LinkSpec::round(1.0)}}),
        invalid_model_error);
  }
  SUBCASE("dimension below three rejected") {
    CHECK_THROWS_AS(
        make_model(2, {{"E1", WarpProfile::cone(1.0), LinkSpec::round(1.0)}}),
        invalid_model_error);
  }
}

TEST_CASE("ricci profile metadata") {
  CHECK(flat_model().ricci_profile_kappa == doctest::Approx(0.0));
  const auto two = two_end_model();
  // smoothed(1, 1): (1+rho)^2 f''/f = (1+rho)^2/(1+rho^2)^2 peaks near 1.42
  CHECK(two.ricci_profile_kappa >= 1.0);
  CHECK(two.ricci_profile_kappa <= 1.25);
}

TEST_CASE("asymptotic volume ratios") {
  CHECK(avr_of_end(flat_model(), "E1") == doctest::Approx(1.0));
  CHECK(avr_of_end(cone_model(0.9), "E1") == doctest::Approx(0.81));
  CHECK(avr_of_end(offset_model(), "E1") == doctest::Approx(1.0));
  const auto two = two_end_model();
  CHECK(avr_of_end(two, "E1") == doctest::Approx(1.0));
  CHECK(avr_total(two) == doctest::Approx(2.0));
  CHECK_THROWS_AS(avr_of_end(two, "E9"), domain_error);
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(flat_model(), "E1", 2.0) ==
        doctest::Approx(16.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_area(cone_model(0.9), "E1", 1.0) ==
        doctest::Approx(4.0 * M_PI * 0.81).epsilon(1e-14));
  const auto two = two_end_model();
  CHECK(sphere_area(two, "E1", 1.0) ==
        doctest::Approx(8.0 * M_PI).epsilon(1e-14));
  // cross-check with the volume derivative
  const double h = 1e-5;
  const double fd =
      (annulus_volume(two, "E1", 0.5, 1.0 + h) -
       annulus_volume(two, "E1", 0.5, 1.0 - h)) /
      (2.0 * h);
  CHECK(fd == doctest::Approx(sphere_area(two, "E1", 1.0)).epsilon(1e-8));
}

TEST_CASE("annulus volumes") {
  CHECK(annulus_volume(flat_model(), "E1", 1.0, 2.0) ==
        doctest::Approx(28.0 * M_PI / 3.0).epsilon(1e-12));
  CHECK(annulus_volume(cone_model(0.9), "E1", 1.0, 2.0) ==
        doctest::Approx(0.81 * 28.0 * M_PI / 3.0).epsilon(1e-12));
  // offset warp against the exact antiderivative
  CHECK(annulus_volume(offset_model(), "E1", 1.0, 2.0) ==
        doctest::Approx(4.0 * M_PI * (std::pow(2.5, 3) - std::pow(1.5, 3)) /
                        3.0)
            .epsilon(1e-12));
  CHECK_THROWS_AS(annulus_volume(flat_model(), "E1", 2.0, 1.0), domain_error);
}

TEST_CASE("ratios approach the volume ratio") {
  const auto m = offset_model();
  const double avr = avr_of_end(m, "E1");
  double prev_dev_area = 1e9, prev_dev_vol = 1e9;
  for (double s : {1e2, 1e3, 1e4}) {
    const double area_ratio =
        sphere_area(m, "E1", s) / (unit_sphere_area(3) * s * s);
    const double vol_ratio =
        annulus_volume(m, "E1", 1.0, s) / (unit_ball_volume(3) * s * s * s);
    const double dev_area = std::abs(area_ratio - avr);
    const double dev_vol = std::abs(vol_ratio - avr);
    CHECK(dev_area < prev_dev_area);
    CHECK(dev_vol < prev_dev_vol);
    prev_dev_area = dev_area;
    prev_dev_vol = dev_vol;
  }
  // pure cone: exact at every radius
  const auto cone = cone_model(0.9);
  for (double s : {2.0, 8.0, 64.0}) {
    CHECK(sphere_area(cone, "E1", s) / (unit_sphere_area(3) * s * s) ==
          doctest::Approx(0.81).epsilon(1e-10));
    CHECK(annulus_volume(cone, "E1", 1e-6, s) /
              (unit_ball_volume(3) * s * s * s) ==
          doctest::Approx(0.81).epsilon(1e-6));
  }
}

TEST_CASE("domain profiles") {
  const auto ell = DomainSpec::ellipsoid(2.0, 1.0);
  CHECK(ell.h(0.0) == doctest::Approx(2.0));
  CHECK(ell.h(M_PI / 2) == doctest::Approx(1.0));
  CHECK(ell.min_radius() == doctest::Approx(1.0));
  CHECK(ell.max_radius() == doctest::Approx(2.0));
  // dh against finite differences
  for (double th : {0.3, 1.0, 2.0, 2.8}) {
    const double fd = (ell.h(th + 1e-6) - ell.h(th - 1e-6)) / 2e-6;
    CHECK(ell.dh(th) == doctest::Approx(fd).epsilon(1e-6));
  }
  const auto ball = DomainSpec::sublevel(1.5);
  CHECK(ball.h(0.7) == doctest::Approx(1.5));
  CHECK(ball.max_radius() == doctest::Approx(1.5));
}
