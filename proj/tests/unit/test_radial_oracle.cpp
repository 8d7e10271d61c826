#include <cmath>

#include "../support/analytic.hpp"
#include "conecap/errors.hpp"
#include "conecap/radial_oracle.hpp"
#include "doctest.h"

using namespace conecap;
using namespace conecap::testing;

TEST_CASE("flat-space potentials are exact powers") {
  const auto m = flat_model();
  for (double p : {1.5, 2.0, 2.5}) {
    const auto sol = radial_potential(m, "E1", 1.0, p);
    const double k = (3.0 - p) / (p - 1.0);
    for (double rho : {2.0, 10.0, 100.0}) {
      CHECK(std::abs(sol.u(rho) - std::pow(rho, -k)) <=
            1e-8 * std::pow(rho, -k));
    }
    CHECK(sol.capacity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.u(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("offset warp closed form") {
  const auto m = offset_model();
  const auto sol = radial_potential(m, "E1", 1.0, 2.0);
  // independent oracle: exact antiderivative of (s + 1/2)^{-2}
  for (double rho : {1.0, 2.0, 8.0, 100.0}) {
    const double exact = offset_tail(1.0, 0.5, 2.0, rho) /
                         offset_tail(1.0, 0.5, 2.0, 1.0);
    CHECK(sol.u(rho) == doctest::Approx(exact).epsilon(1e-10));
  }
  CHECK(sol.capacity == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(sol.gamma == doctest::Approx(1.5).epsilon(1e-9));

  // p = 1.5 variant: u = ((rho+1/2)/1.5)^{-3}, capacity 1.5^{3/2}
  const auto sol15 = radial_potential(m, "E1", 1.0, 1.5);
  CHECK(sol15.u(2.0) ==
        doctest::Approx(std::pow(2.5 / 1.5, -3.0)).epsilon(1e-9));
  CHECK(sol15.capacity ==
        doctest::Approx(std::pow(1.5, 1.5)).epsilon(1e-9));
}

TEST_CASE("cone capacity equals the volume ratio at every p") {
  const auto m = cone_model(0.9);
  for (double p : {1.2, 1.5, 2.0, 2.5}) {
    const auto sol = radial_potential(m, "E1", 1.0, p);
    CHECK(sol.capacity == doctest::Approx(0.81).epsilon(1e-9));
  }
}

TEST_CASE("two-end arctangent profile") {
  const auto m = two_end_model();
  const auto sol = radial_potential(m, "E1", 1.0, 2.0);
  for (double rho : {1.0, 2.0, 8.0}) {
    const double exact = (M_PI / 2 - std::atan(rho)) / (M_PI / 4);
    CHECK(sol.u(rho) == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK(sol.capacity == doctest::Approx(4.0 / M_PI).epsilon(1e-9));
}

TEST_CASE("flux is radius independent") {
  const auto m = offset_model();
  for (double p : {1.5, 2.0}) {
    const auto sol = radial_potential(m, "E1", 1.0, p);
    const double link = 4.0 * M_PI;
    double lo = 1e300, hi = 0.0;
    for (double rho : {2.0, 5.0, 10.0, 100.0, 1000.0}) {
      const double f = std::pow(std::abs(sol.du(rho)), p - 1.0) *
                       std::pow(m.end("E1").warp.value(rho), 2) * link;
      lo = std::min(lo, f);
      hi = std::max(hi, f);
      CHECK(f == doctest::Approx(sol.flux).epsilon(1e-8));
    }
    CHECK((hi - lo) / hi <= 1e-8);
  }
}

TEST_CASE("capacity scaling under sublevel enlargement") {
  const auto m = offset_model();
  const auto sol = radial_potential(m, "E1", 1.0, 2.0);
  for (double t : {2.0, 4.0, 8.0, 16.0}) {
    const double rho_t = sol.level_radius(1.0 / t);
    const auto enlarged = radial_potential(m, "E1", rho_t, 2.0);
    CHECK(enlarged.capacity ==
          doctest::Approx(t * sol.capacity).epsilon(1e-8));
  }
}

TEST_CASE("gamma ladder and formula agree") {
  const auto m = offset_model();
  const auto sol = radial_potential(m, "E1", 1.0, 2.0);
  const auto pair = gamma_of(sol, m, "E1");
  CHECK(pair.limit == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(pair.formula == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(pair.spread <= 1e-4);

  const auto cone = cone_model(0.9);
  const auto csol = radial_potential(cone, "E1", 1.0, 1.5);
  const auto cpair = gamma_of(csol, cone, "E1");
  CHECK(std::abs(cpair.limit - cpair.formula) <= 1e-8);
  CHECK(cpair.formula == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("oracle input validation") {
  const auto m = flat_model();
  CHECK_THROWS_AS(radial_potential(m, "E1", 1.0, 3.0), domain_error);
  CHECK_THROWS_AS(radial_potential(m, "E1", 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(radial_potential(m, "E1", -1.0, 2.0), domain_error);
}

TEST_CASE("radial flow profile") {
  SUBCASE("exact on cones") {
    const auto m = cone_model(0.9);
    const auto w = radial_imcf(m, "E1", 1.0);
    CHECK(w.exact_cone);
    CHECK(w.w(5.0) == doctest::Approx(2.0 * std::log(5.0)).epsilon(1e-14));
    CHECK(w.dw(5.0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(w.level_radius(2.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
  }
  SUBCASE("moser ladder on the offset warp") {
    const auto m = offset_model();
    const auto w = radial_imcf(m, "E1", 1.0);
    CHECK(w.extrapolation_spread <= 1e-3);
    // w_p is linear in p here, so the extrapolation is the p = 1 value
    for (double rho : {2.0, 10.0, 50.0}) {
      const double exact = 2.0 * std::log((rho + 0.5) / 1.5);
      CHECK(w.w(rho) == doctest::Approx(exact).epsilon(1e-7));
    }
    // additive constant at a radius still inside double range for the
    // smallest ladder exponent
    CHECK(w.w(200.0) - 2.0 * std::log(200.0) ==
          doctest::Approx(2.0 * std::log((200.5) / 1.5) -
                          2.0 * std::log(200.0))
              .epsilon(1e-6));
  }
}
