#include <cmath>

#include "../support/analytic.hpp"
#include "conecap/imcf.hpp"
#include "doctest.h"

using namespace conecap;
using namespace conecap::testing;

namespace {

DiscreteField power_field(const Grid& g, double p) {
  DiscreteField f;
  f.grid = g;
  f.p = p;
  f.achieved_eps = 0.0;
  f.values.resize(g.node_count());
  const double k = (3.0 - p) / (p - 1.0);
  for (std::size_t i = 0; i < g.rt.size(); ++i)
    for (std::size_t j = 0; j < g.theta.size(); ++j) {
      const auto mp = g.mapping(g.rt[i], g.theta[j]);
      f.values[g.node(i, j)] = std::pow(mp.rho, -k);
    }
  return f;
}

}  // namespace

TEST_CASE("moser transform of power fields") {
  const auto m = flat_model();
  const auto g = build_grid(m, DomainSpec::sublevel(1.0), "E1", 32.0, 64, 8,
                            1.05);
  for (double p : {1.1, 1.5, 2.0}) {
    const auto u = power_field(g, p);
    const auto w = moser_transform(u, p);
    for (std::size_t i = 0; i < g.rt.size(); ++i) {
      const double exact = (3.0 - p) * std::log(g.rt[i]);
      CHECK(w.value(i, 0) == doctest::Approx(exact).epsilon(1e-10));
    }
  }
  SUBCASE("rejects non-positive values") {
    auto u = power_field(g, 2.0);
    u.values[u.grid.node(5, 3)] = 0.0;
    CHECK_THROWS_AS(moser_transform(u, 2.0), domain_error);
  }
}

TEST_CASE("p to one extrapolation is exact for power ladders") {
  const auto m = flat_model();
  const auto g = build_grid(m, DomainSpec::sublevel(1.0), "E1", 32.0, 64, 8,
                            1.05);
  const std::vector<double> ladder{1.2, 1.1, 1.05, 1.025};
  std::vector<DiscreteField> ws;
  for (double p : ladder) ws.push_back(moser_transform(power_field(g, p), p));
  const auto ex = p_to_one_extrapolate(ws, ladder);
  CHECK(ex.spread <= 1e-10);
  for (std::size_t i = 0; i < g.rt.size(); ++i)
    CHECK(ex.w.value(i, 0) ==
          doctest::Approx(2.0 * std::log(g.rt[i])).epsilon(1e-9));
}

TEST_CASE("hull area from the capacity ladder") {
  const std::vector<double> ladder{1.2, 1.1, 1.05, 1.025};
  std::vector<double> caps;
  for (double p : ladder) caps.push_back(std::pow(1.5, 3.0 - p));
  const auto est = hull_area_estimate(ladder, caps, 3);
  CHECK(est.monotone);
  CHECK(est.extrapolated_capacity == doctest::Approx(2.25).epsilon(2e-4));
  CHECK(est.area == doctest::Approx(2.25 * 4.0 * M_PI).epsilon(2e-4));
}

TEST_CASE("flow constants on radial profiles") {
  SUBCASE("cone is exactly consistent") {
    const auto m = cone_model(0.9);
    const auto w = radial_imcf(m, "E1", 1.0);
    const double hull = sphere_area(m, "E1", 1.0);  // 0.81 * 4 pi
    const auto cst =
        imcf_constant_check(w, m, "E1", hull, 0.81, {8.0, 16.0, 32.0});
    CHECK(cst.predicted == doctest::Approx(0.0));
    CHECK(std::abs(cst.measured) <= 1e-10);
    CHECK(cst.residual <= 1e-10);
  }
  SUBCASE("ball of radius two in flat space") {
    const auto m = flat_model();
    const auto w = radial_imcf(m, "E1", 2.0);
    const double hull = sphere_area(m, "E1", 2.0);  // 16 pi
    const auto cst =
        imcf_constant_check(w, m, "E1", hull, 1.0, {8.0, 16.0, 32.0});
    CHECK(cst.predicted == doctest::Approx(-std::log(4.0)).epsilon(1e-12));
    CHECK(cst.measured ==
          doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-9));
    CHECK(cst.residual <= 1e-9);
  }
  SUBCASE("offset warp through the moser ladder") {
    const auto m = offset_model();
    const auto w = radial_imcf(m, "E1", 1.0);
    std::vector<double> caps;
    const std::vector<double> ladder{1.2, 1.1, 1.05, 1.025};
    for (double p : ladder)
      caps.push_back(radial_potential(m, "E1", 1.0, p).capacity);
    const auto hull = hull_area_estimate(ladder, caps, 3);
    CHECK(hull.area == doctest::Approx(2.25 * 4 * M_PI).epsilon(5e-4));
    const auto cst = imcf_constant_check(w, m, "E1", hull.area, 1.0,
                                         {8.0, 16.0, 32.0});
    CHECK(cst.predicted ==
          doctest::Approx(-2.0 * std::log(1.5)).epsilon(5e-4));
    CHECK(cst.residual <= 5e-2 * 1.0);
  }
}

TEST_CASE("exponential growth tables") {
  SUBCASE("cone") {
    const auto m = cone_model(0.9);
    const auto w = radial_imcf(m, "E1", 1.0);
    const auto tab =
        exponential_growth_check(w, m, "E1", {2.0, 3.0, 4.0, 5.0, 6.0});
    for (const auto& r : tab.rows)
      CHECK(r.ratio == doctest::Approx(0.81 * 4 * M_PI).epsilon(1e-9));
    CHECK(tab.max_relative_deviation <= 1e-9);
  }
  SUBCASE("flat ball of radius two") {
    const auto m = flat_model();
    const auto w = radial_imcf(m, "E1", 2.0);
    const auto tab = exponential_growth_check(w, m, "E1", {2.0, 4.0, 6.0});
    for (const auto& r : tab.rows)
      CHECK(r.ratio == doctest::Approx(16.0 * M_PI).epsilon(1e-9));
  }
  SUBCASE("offset ladder stays within budget") {
    const auto m = offset_model();
    const auto w = radial_imcf(m, "E1", 1.0);
    const auto tab =
        exponential_growth_check(w, m, "E1", {2.0, 3.0, 4.0, 5.0, 6.0});
    CHECK(tab.max_relative_deviation <= 5e-2);
  }
}

TEST_CASE("flow gradient bound") {
  const auto cone = cone_model(0.9);
  const auto wc = radial_imcf(cone, "E1", 1.0);
  for (const auto& [s, b] : imcf_gradient_check(wc, {8.0, 64.0}))
    CHECK(b == doctest::Approx(2.0).epsilon(1e-12));

  const auto m = offset_model();
  const auto w = radial_imcf(m, "E1", 1.0);
  for (const auto& [s, b] : imcf_gradient_check(w, {8.0, 64.0, 512.0}))
    CHECK(b == doctest::Approx(2.0 * s / (s + 0.5)).epsilon(1e-4));
}

TEST_CASE("coherence of the two constant routes") {
  // -(p-1) log gamma_p extrapolates to the predicted flow constant
  const auto m = offset_model();
  const std::vector<double> ladder{1.1, 1.05, 1.025};
  std::vector<double> kappa_p;
  for (double p : ladder) {
    const auto sol = radial_potential(m, "E1", 1.0, p);
    kappa_p.push_back(-(p - 1.0) *
                      std::log(std::pow(sol.capacity / 1.0, 1.0 / (p - 1.0))));
  }
  const double x1 = ladder[1] - 1.0, x2 = ladder[2] - 1.0;
  const double lin = kappa_p[2] + (kappa_p[2] - kappa_p[1]) * x2 / (x1 - x2);
  CHECK(lin == doctest::Approx(-2.0 * std::log(1.5)).epsilon(1e-4));
}
