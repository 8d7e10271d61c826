#include <cmath>

#include "../support/analytic.hpp"
#include "../support/bem_oracle.hpp"
#include "doctest.h"

using namespace conecap::testing;

TEST_CASE("bem capacity of the unit sphere") {
  const double c = bem_capacity_polar([](double) { return 1.0; }, 48);
  CHECK(c == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("bem capacity of the prolate spheroid matches the closed form") {
  const double exact = spheroid_capacity(2.0, 1.0);
  CHECK(exact == doctest::Approx(1.3151907222).epsilon(1e-9));
  const double c = bem_capacity_polar(
      [](double th) {
        const double ct = std::cos(th), st = std::sin(th);
        return 1.0 / std::sqrt(ct * ct / 4.0 + st * st);
      },
      64);
  CHECK(c == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("spheroid area quadrature matches the closed form") {
  // 2 pi b^2 (1 + (a/(b e)) asin e), e = sqrt(1 - b^2/a^2)
  const double e = std::sqrt(3.0) / 2.0;
  const double closed = 2.0 * M_PI * (1.0 + (2.0 / e) * std::asin(e));
  CHECK(spheroid_area(2.0, 1.0) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(spheroid_area(2.0, 1.0) == doctest::Approx(21.4784353).epsilon(1e-7));
}
