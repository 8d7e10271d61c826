#include <cmath>

#include "../support/analytic.hpp"
#include "conecap/capacity.hpp"
#include "doctest.h"

using namespace conecap;
using namespace conecap::testing;

namespace {

DiscreteField solve_flat(double r_out = 32.0, std::size_t radial = 96,
                         std::size_t angular = 12) {
  const auto m = flat_model();
  const auto d = DomainSpec::sublevel(1.0);
  const auto g = build_grid(m, d, "E1", r_out, radial, angular, 1.05);
  SolverConfig cfg;
  cfg.p = 2.0;
  return solve_p_laplace(m, d, g, cfg).first;
}

}  // namespace

TEST_CASE("flux capacity on enclosing spheres") {
  const auto field = solve_flat();
  for (double s : {2.0, 4.0, 8.0, 16.0}) {
    CHECK(flux_capacity_at(field, s) ==
          doctest::Approx(1.0).epsilon(2e-3));
  }
  CHECK_THROWS_AS(flux_capacity_at(field, 0.5), domain_error);
}

TEST_CASE("flux table and scaling residuals") {
  const auto field = solve_flat();
  const auto rep = capacity_report(field, {2.0, 4.0, 8.0, 16.0});
  CHECK(rep.total == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(rep.boundary_flux == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(rep.spread <= 5e-3);
  for (double r : rep.scaling_residuals) CHECK(r <= 5e-3);
}

TEST_CASE("per-end capacities on the two-end model") {
  const auto m = two_end_model();
  const auto d = DomainSpec::sublevel(1.0);
  SolverConfig cfg;
  cfg.p = 2.0;
  std::vector<DiscreteField> fields;
  for (const auto& e : m.ends) {
    const auto g = build_grid(m, d, e.id, 32.0, 96, 12, 1.05);
    fields.push_back(solve_p_laplace(m, d, g, cfg).first);
  }
  const auto rep = per_end_capacity(
      {{m.ends[0].id, &fields[0]}, {m.ends[1].id, &fields[1]}});
  const double exact = 4.0 / M_PI;
  CHECK(rep.per_end.at("E1") == doctest::Approx(exact).epsilon(3e-3));
  CHECK(rep.per_end.at("E2") == doctest::Approx(exact).epsilon(3e-3));
  CHECK(rep.total ==
        doctest::Approx(rep.per_end.at("E1") + rep.per_end.at("E2")));
}

TEST_CASE("asymmetric two-end oracle decomposition") {
  // slopes 1 and 0.8 with matched neck: f(0) = 1 on both sides
  const auto m = make_model(
      3, {{"E1", WarpProfile::smoothed(1.0, 1.0), LinkSpec::round(1.0)},
          {"E2", WarpProfile::smoothed(0.8, 1.25), LinkSpec::round(1.0)}});
  const auto s1 = radial_potential(m, "E1", 1.0, 2.0);
  const auto s2 = radial_potential(m, "E2", 1.0, 2.0);
  const auto rep = per_end_capacity(
      std::vector<std::pair<std::string, const RadialSolution*>>{
          {"E1", &s1}, {"E2", &s2}});
  CHECK(rep.per_end.at("E1") == doctest::Approx(4.0 / M_PI).epsilon(1e-8));
  CHECK(rep.per_end.at("E2") < rep.per_end.at("E1"));
  // closed form for the slope-0.8 end
  const double i0 =
      1.25 * (M_PI / 2 - std::atan(0.8));
  CHECK(rep.per_end.at("E2") == doctest::Approx(1.0 / i0).epsilon(1e-8));
  CHECK(rep.total ==
        doctest::Approx(rep.per_end.at("E1") + rep.per_end.at("E2")));
}

TEST_CASE("level-set extraction on a radial field") {
  const auto field = solve_flat();
  const auto ls = extract_level_set(field, 0.25);
  CHECK(ls.r_min == doctest::Approx(4.0).epsilon(2e-3));
  CHECK(ls.r_max == doctest::Approx(4.0).epsilon(2e-3));
  CHECK_FALSE(ls.multi_loop);
  CHECK(ls.area ==
        doctest::Approx(4.0 * M_PI * ls.r_min * ls.r_min).epsilon(1e-2));
  CHECK_THROWS_AS(extract_level_set(field, 2.0), domain_error);
}

TEST_CASE("eccentricity tables") {
  SUBCASE("radial fields stay round") {
    const auto field = solve_flat();
    const auto tab = eccentricity(field, {2.0, 4.0, 8.0});
    for (const auto& row : tab.rows)
      CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(tab.non_increasing);
  }
  SUBCASE("ellipsoid levels round off") {
    const auto m = flat_model();
    const auto d = DomainSpec::ellipsoid(2.0, 1.0);
    const auto g = build_grid(m, d, "E1", 32.0, 128, 32, 1.05);
    SolverConfig cfg;
    cfg.p = 2.0;
    const auto field = solve_p_laplace(m, d, g, cfg).first;
    const auto tab = eccentricity(field, {1.0, 2.0, 4.0, 8.0});
    CHECK(tab.rows.front().ratio == doctest::Approx(2.0));
    CHECK(tab.non_increasing);
    CHECK(tab.rows.back().ratio < 1.4);
  }
}

TEST_CASE("level geometry ratios, radial route") {
  const auto m = offset_model();
  const auto sol = radial_potential(m, "E1", 1.0, 2.0);
  const double avr = 1.0;
  const double v_scale = std::pow(sol.capacity / avr, 1.0);  // 1/(n-p) = 1
  const auto rows = level_area_volume(sol, m, "E1", v_scale, {8.0, 16.0, 32.0});
  // v = rho + 1/2 exactly, so the area ratio is 1 at every level
  for (const auto& r : rows) {
    CHECK(r.area_ratio == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.volume_ratio ==
          doctest::Approx(1.0 - 0.125 / std::pow(r.s, 3)).epsilon(1e-6));
  }

  const auto caps = capacity_level_sets(sol, m, "E1", v_scale,
                                        {8.0, 16.0, 32.0});
  for (const auto& r : caps)
    CHECK(r.normalized == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("level capacity on the discrete field") {
  const auto field = solve_flat();
  const auto caps = capacity_level_sets(field, 1.0, {4.0, 8.0, 16.0});
  for (const auto& r : caps)
    CHECK(r.normalized == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("domain volumes") {
  const auto m = flat_model();
  CHECK(domain_volume(m, DomainSpec::sublevel(1.0), "E1") ==
        doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-9));
  // spheroid (2,1,1): volume 8 pi / 3
  CHECK(domain_volume(m, DomainSpec::ellipsoid(2.0, 1.0), "E1") ==
        doctest::Approx(8.0 * M_PI / 3.0).epsilon(1e-6));
}
