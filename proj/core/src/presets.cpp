#include "conecap/presets.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>

#include "json.hpp"

#include "conecap/capacity.hpp"
#include "conecap/csv.hpp"
#include "conecap/field_io.hpp"
#include "conecap/imcf.hpp"
#include "conecap/richardson.hpp"
#include "conecap/special.hpp"

namespace conecap {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

class StageClock {
 public:
  StageClock(RunManifest& manifest, std::string name)
      : manifest_(manifest),
        name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}
  ~StageClock() { finish("ok"); }
  void finish(const std::string& status) {
    if (done_) return;
    done_ = true;
    const auto end = std::chrono::steady_clock::now();
    const double sec =
        std::chrono::duration_cast<std::chrono::duration<double>>(end - start_)
            .count();
    manifest_.stages.push_back({name_, status, sec});
  }

 private:
  RunManifest& manifest_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
  bool done_ = false;
};

struct Emitter {
  fs::path dir;
  RunManifest& manifest;
  json summary;

  void add_table(const CsvTable& t, std::size_t x_col,
                 std::vector<std::size_t> y_cols, const std::string& title) {
    write_csv(t, dir.string());
    manifest.files.push_back(t.name + ".csv");
    write_plot_script(t, x_col, y_cols, title, dir.string());
    manifest.files.push_back(t.name + ".plt");
  }

  void add_field(const DiscreteField& f, const std::string& stem) {
    write_field_binary(f, (dir / (stem + ".bin")).string());
    manifest.files.push_back(stem + ".bin");
  }

  void check(const std::string& name, bool passed, double value,
             double tolerance) {
    json c;
    c["name"] = name;
    c["passed"] = passed;
    c["value"] = value;
    c["tolerance"] = tolerance;
    summary["checks"].push_back(c);
    char line[160];
    std::snprintf(line, sizeof(line), "[%s] %s (value=%.6g, tol=%.3g)",
                  passed ? "PASS" : "FAIL", name.c_str(), value, tolerance);
    manifest.check_lines.push_back(line);
    if (!passed) manifest.passed = false;
  }

  void finalize() {
    std::ofstream f(dir / "summary.json", std::ios::binary);
    f << summary.dump(2) << "\n";
    manifest.files.push_back("summary.json");
  }
};

bool radial_route(const ExperimentConfig& cfg) {
  return !cfg.domain.is_graph();
}

// scale_cells = 1/2 coarsens self-similarly: halve the counts and square the
// stretch ratio, which nests the coarse nodes exactly inside the fine ones.
Grid make_grid(const ExperimentConfig& cfg, std::string_view end_id,
               double scale_cells = 1.0, double scale_r = 1.0) {
  const double q = std::pow(cfg.grid.stretch, 1.0 / scale_cells);
  return build_grid(cfg.model, cfg.domain, end_id, cfg.grid.r_out * scale_r,
                    std::max<std::size_t>(8, static_cast<std::size_t>(
                                                 cfg.grid.radial * scale_cells)),
                    std::max<std::size_t>(8, static_cast<std::size_t>(
                                                 cfg.grid.angular * scale_cells)),
                    q);
}

DiscreteField solve_once(const ExperimentConfig& cfg, const Grid& grid,
                         double p) {
  SolverConfig sc = cfg.solver;
  sc.p = p;
  return solve_p_laplace(cfg.model, cfg.domain, grid, sc).first;
}

// sequential warm-started descent along a decreasing p ladder
std::vector<DiscreteField> solve_ladder(const ExperimentConfig& cfg,
                                        const Grid& grid,
                                        std::vector<double> ladder) {
  std::sort(ladder.begin(), ladder.end(), std::greater<>());
  std::vector<DiscreteField> fields;
  const DiscreteField* warm = nullptr;
  for (double p : ladder) {
    SolverConfig sc = cfg.solver;
    sc.p = p;
    auto [field, stats] =
        solve_p_laplace(cfg.model, cfg.domain, grid, sc, warm);
    fields.push_back(std::move(field));
    warm = &fields.back();
  }
  return fields;
}

double gamma_from_field(const ExperimentConfig& cfg, const DiscreteField& f,
                        std::vector<BlowDownRow>* profile_out = nullptr) {
  const auto profile = blow_down_profile(f, cfg.s_ladder);
  std::vector<double> radii, means;
  for (const auto& r : profile) {
    radii.push_back(r.s);
    means.push_back(r.mean);
  }
  if (profile_out) *profile_out = profile;
  return richardson_extrapolate(radii, means, 1.0).limit;
}

void run_tasks(std::vector<std::function<void()>> tasks, int threads) {
  if (threads <= 1 || tasks.size() <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::vector<std::future<void>> futures;
  for (auto& t : tasks)
    futures.push_back(std::async(std::launch::async, std::move(t)));
  for (auto& f : futures) f.get();
}

// ---------------------------------------------------------------------------
// preset pipelines
// ---------------------------------------------------------------------------

void preset_thm1(const ExperimentConfig& cfg, Emitter& em,
                 RunManifest& manifest, int threads) {
  const auto& end_id = cfg.model.ends.front().id;
  const double p = cfg.p();
  const double avr = avr_of_end(cfg.model, end_id);

  AsymptoticsReport rep;
  rep.end_id = end_id;
  rep.p = p;
  rep.avr = avr;

  double gamma_final = 0.0;
  double cap = 0.0;

  if (radial_route(cfg)) {
    StageClock stage(manifest, "radial-oracle");
    const auto sol = radial_potential(cfg.model, end_id, cfg.domain.rho0, p);
    cap = sol.capacity;
    const auto pair = gamma_of(sol, cfg.model, end_id);
    std::vector<double> big_ladder = gamma_ladder_radii();
    rep.blow_down = blow_down_profile(sol, big_ladder);
    rep.gamma = gamma_estimate(rep.blow_down, cap, avr, p);
    rep.liyau = liyau_check(sol, cfg.s_ladder);
    rep.gradient_bound = gradient_bound_check(sol, {1e1, 1e2, 1e3});
    rep.derivative_table = derivative_asymptotics(sol, pair.formula, cfg.s_ladder);
    rep.end_capacity = cap;
    gamma_final = rep.gamma.measured;
  } else {
    StageClock stage(manifest, "pde-solves");
    Grid base = make_grid(cfg, end_id);
    Grid half = make_grid(cfg, end_id, 0.5);
    Grid bigr = make_grid(cfg, end_id, 1.0, 2.0);
    DiscreteField f_base, f_half, f_bigr;
    run_tasks({[&] { f_base = solve_once(cfg, base, p); },
               [&] { f_half = solve_once(cfg, half, p); },
               [&] { f_bigr = solve_once(cfg, bigr, p); }},
              threads);
    stage.finish("ok");

    StageClock stage2(manifest, "asymptotics");
    const double g_base = gamma_from_field(cfg, f_base, &rep.blow_down);
    const double g_half = gamma_from_field(cfg, f_half);
    const double g_bigr = gamma_from_field(cfg, f_bigr);
    // error model gamma(h, R) = gamma + a h^2 + b R^-2
    gamma_final =
        g_base + (g_base - g_half) / 3.0 + 4.0 / 3.0 * (g_bigr - g_base);
    cap = flux_capacity_at(f_base, 0.5 * (cfg.s_ladder.front() +
                                          cfg.s_ladder.back()));
    rep.end_capacity = cap;
    rep.gamma.measured = gamma_final;
    rep.gamma.formula = std::pow(cap / avr, 1.0 / (p - 1.0));
    rep.gamma.residual =
        std::abs(gamma_final - rep.gamma.formula) / rep.gamma.formula;
    rep.liyau = liyau_check(f_base, cfg.s_ladder);
    rep.gradient_bound = gradient_bound_check(f_base, cfg.s_ladder);
    rep.derivative_table =
        derivative_asymptotics(f_base, rep.gamma.formula, cfg.s_ladder);
    em.add_field(f_base, "u_field");
  }

  CsvTable blow{"blowdown",
                {"rescaled potential s^{(n-p)/(p-1)} u over {rho = s}",
                 "columns: s, sup, inf, mean, oscillation"},
                {"s", "sup", "inf", "mean", "osc"},
                {}};
  for (const auto& r : rep.blow_down)
    blow.rows.push_back({r.s, r.sup, r.inf, r.mean, r.osc()});
  em.add_table(blow, 0, {1, 2, 3}, "blow-down profile");

  CsvTable gl{"gamma_ladder",
              {"sphere means of the rescaled potential and the two gamma routes",
               "gamma_formula = (C_p/AVR)^{1/(p-1)}"},
              {"s", "mean"},
              {}};
  for (std::size_t k = 0; k < rep.blow_down.size(); ++k)
    gl.rows.push_back({rep.blow_down[k].s, rep.blow_down[k].mean});
  em.add_table(gl, 0, {1}, "gamma ladder");

  CsvTable liy{"liyau",
               {"two-sided decay ratio u rho^{(n-p)/(p-1)}"},
               {"s", "ratio"},
               {}};
  for (const auto& [s, r] : rep.liyau.ratio_table) liy.rows.push_back({s, r});
  em.add_table(liy, 0, {1}, "decay ratio");

  CsvTable gb{"gradient_bound",
              {"sup over {rho = s} of rho |grad u| / u"},
              {"s", "bound"},
              {}};
  for (const auto& [s, b] : rep.gradient_bound) gb.rows.push_back({s, b});
  em.add_table(gb, 0, {1}, "gradient bound");

  CsvTable da{"derivative_asymptotics",
              {"scaled first-derivative deviation from the model profile"},
              {"s", "deviation"},
              {}};
  for (const auto& [s, d] : rep.derivative_table) da.rows.push_back({s, d});
  em.add_table(da, 0, {1}, "derivative asymptotics");

  em.summary["results"]["gamma_measured"] = rep.gamma.measured;
  em.summary["results"]["gamma_formula"] = rep.gamma.formula;
  em.summary["results"]["gamma_residual"] = rep.gamma.residual;
  em.summary["results"]["capacity"] = cap;
  em.summary["results"]["avr"] = avr;
  em.summary["results"]["liyau_band"] = {rep.liyau.c_lower, rep.liyau.c_upper};

  const double tol = radial_route(cfg) ? 1e-4 : 2e-2;
  em.check("gamma measured vs formula", rep.gamma.residual <= tol,
           rep.gamma.residual, tol);
  bool osc_decreasing = true;
  for (std::size_t k = 0; k + 1 < rep.blow_down.size(); ++k)
    if (rep.blow_down[k + 1].osc() >
        rep.blow_down[k].osc() + 1e-9 + 1e-6 * rep.blow_down[k].mean)
      osc_decreasing = false;
  em.check("blow-down oscillation decreases", osc_decreasing,
           rep.blow_down.back().osc(), rep.blow_down.front().osc());
  // the ratio may approach gamma one-sidedly; allow the sampling-horizon gap
  const bool brackets =
      rep.liyau.c_lower <= rep.gamma.formula * (1.0 + 1e-4) &&
      rep.gamma.formula <= rep.liyau.c_upper * (1.0 + 1e-4);
  em.check("decay band brackets gamma", brackets, rep.gamma.formula, 0.0);
}

void preset_thm2(const ExperimentConfig& cfg, Emitter& em,
                 RunManifest& manifest, int threads) {
  (void)threads;
  const auto& end_id = cfg.model.ends.front().id;
  const double avr = avr_of_end(cfg.model, end_id);
  const int n = cfg.model.dimension;
  std::vector<double> ladder = cfg.p_ladder;
  if (ladder.size() < 3) ladder = {1.2, 1.1, 1.05, 1.025};

  ImcfReport rep;
  rep.end_id = end_id;
  rep.p_ladder = ladder;
  rep.avr = avr;
  rep.extrapolation_note =
      "linear extrapolation in (p-1); order validated on the ladder spread, "
      "not asserted";

  const std::vector<double> s_ladder = cfg.s_ladder;

  const bool radial = radial_route(cfg);
  std::vector<double> coherence;  // kappa_p = -log(C_p / AVR) per ladder entry
  if (radial) {
    StageClock stage(manifest, "radial-ladder");
    std::vector<double> caps;
    for (double p : ladder)
      caps.push_back(
          radial_potential(cfg.model, end_id, cfg.domain.rho0, p).capacity);
    rep.hull = hull_area_estimate(ladder, caps, n);
    const auto rimcf = radial_imcf(cfg.model, end_id, cfg.domain.rho0, ladder);
    rep.extrapolation_spread = rimcf.extrapolation_spread;
    rep.constants = imcf_constant_check(rimcf, cfg.model, end_id,
                                        rep.hull.area, avr, s_ladder);
    rep.growth =
        exponential_growth_check(rimcf, cfg.model, end_id, cfg.t_ladder);
    rep.gradient_bound = imcf_gradient_check(rimcf, s_ladder);
  } else {
    // The nodewise Moser extrapolation of regularized discrete fields is
    // only meaningful where |grad u_p| clears the regularization floor; on
    // non-radial runs the constant is measured through the capacity route
    // instead, which stays accurate down to the smallest ladder entries.
    StageClock stage(manifest, "pde-ladder");
    Grid grid = make_grid(cfg, end_id);
    const auto fields = solve_ladder(cfg, grid, ladder);
    std::vector<double> sorted_ladder = ladder;
    std::sort(sorted_ladder.begin(), sorted_ladder.end(), std::greater<>());
    std::vector<double> caps;
    for (const auto& f : fields)
      caps.push_back(flux_capacity_at(f, s_ladder.front()));
    rep.hull = hull_area_estimate(sorted_ladder, caps, n);
    for (double c : caps) coherence.push_back(-std::log(c / avr));
    // linear extrapolation in (p-1) from the two smallest entries, the
    // three-point quadratic as spread
    const std::size_t m = sorted_ladder.size();
    const double x0 = sorted_ladder[m - 3] - 1.0;
    const double x1 = sorted_ladder[m - 2] - 1.0;
    const double x2 = sorted_ladder[m - 1] - 1.0;
    const double k0 = coherence[m - 3], k1 = coherence[m - 2],
                 k2 = coherence[m - 1];
    rep.constants.measured = k2 + (k2 - k1) * x2 / (x1 - x2);
    const double quad = k0 * x1 * x2 / ((x0 - x1) * (x0 - x2)) +
                        k1 * x0 * x2 / ((x1 - x0) * (x1 - x2)) +
                        k2 * x0 * x1 / ((x2 - x0) * (x2 - x1));
    rep.extrapolation_spread = std::abs(quad - rep.constants.measured);
    rep.constants.predicted =
        -std::log(rep.hull.area / (avr * unit_sphere_area(n)));
    rep.constants.residual =
        std::abs(rep.constants.measured - rep.constants.predicted);
    rep.constants.ladder_means = coherence;
    rep.extrapolation_note =
        "non-radial run: additive constant from the capacity coherence "
        "route; the nodewise Moser field is regularization-limited far out";
  }

  CsvTable hull{"hull_ladder",
                {"per-end normalized capacity along the p ladder; the p -> 1 "
                 "limit is |hull area| / |S^{n-1}|"},
                {"p", "capacity"},
                {}};
  {
    std::vector<double> sorted_ladder = ladder;
    std::sort(sorted_ladder.begin(), sorted_ladder.end(), std::greater<>());
    for (std::size_t k = 0; k < rep.hull.ladder.size(); ++k)
      hull.rows.push_back({sorted_ladder[k], rep.hull.ladder[k]});
  }
  em.add_table(hull, 0, {1}, "capacity ladder");

  if (radial) {
    CsvTable cst{"imcf_constant",
                 {"sphere means of w - (n-1) log rho along the radius ladder"},
                 {"s", "mean"},
                 {}};
    for (std::size_t k = 0; k < rep.constants.ladder_means.size(); ++k)
      cst.rows.push_back({s_ladder[k], rep.constants.ladder_means[k]});
    em.add_table(cst, 0, {1}, "flow additive constant");

    CsvTable gro{"area_growth",
                 {"|boundary of {w <= t}| / e^t, constant for the exact flow"},
                 {"t", "area", "ratio"},
                 {}};
    for (const auto& r : rep.growth.rows)
      gro.rows.push_back({r.t, r.area, r.ratio});
    em.add_table(gro, 0, {2}, "exponential area growth");

    CsvTable igb{"imcf_gradient",
                 {"sup over {rho = s} of rho |grad w|"},
                 {"s", "bound"},
                 {}};
    for (const auto& [s, b] : rep.gradient_bound) igb.rows.push_back({s, b});
    em.add_table(igb, 0, {1}, "flow gradient bound");
  } else {
    std::vector<double> sorted_ladder = ladder;
    std::sort(sorted_ladder.begin(), sorted_ladder.end(), std::greater<>());
    CsvTable cst{"imcf_constant",
                 {"capacity-route constant -log(C_p/AVR) along the p ladder"},
                 {"p", "kappa"},
                 {}};
    for (std::size_t k = 0; k < coherence.size(); ++k)
      cst.rows.push_back({sorted_ladder[k], coherence[k]});
    em.add_table(cst, 0, {1}, "flow additive constant");
  }

  em.summary["results"]["kappa_measured"] = rep.constants.measured;
  em.summary["results"]["kappa_predicted"] = rep.constants.predicted;
  em.summary["results"]["kappa_residual"] = rep.constants.residual;
  em.summary["results"]["hull_area"] = rep.hull.area;
  em.summary["results"]["extrapolation_spread"] = rep.extrapolation_spread;
  em.summary["results"]["extrapolation_note"] = rep.extrapolation_note;

  const bool exact_cone =
      cfg.model.ends.front().warp.kind == WarpProfile::Kind::Cone && radial;
  const double kappa_tol = exact_cone ? 1e-6 : 5e-2;
  em.check("flow constant measured vs predicted",
           rep.constants.residual <= kappa_tol, rep.constants.residual,
           kappa_tol);
  if (radial) {
    em.summary["results"]["growth_deviation"] =
        rep.growth.max_relative_deviation;
    em.check("exponential growth deviation",
             rep.growth.max_relative_deviation <= 5e-2,
             rep.growth.max_relative_deviation, 5e-2);
  } else {
    em.check("hull ladder monotone", rep.hull.monotone,
             rep.hull.extrapolated_capacity, 0.0);
  }
}

void preset_scaling(const ExperimentConfig& cfg, Emitter& em,
                    RunManifest& manifest, int threads) {
  (void)threads;
  const auto& end_id = cfg.model.ends.front().id;
  StageClock stage(manifest, "pde-solve");
  Grid grid = make_grid(cfg, end_id);
  DiscreteField field = solve_once(cfg, grid, cfg.p());
  stage.finish("ok");

  const auto rep = capacity_report(field, cfg.t_ladder);

  CsvTable tab{"capacity_flux",
               {"flux-measured C_p(Omega_t) / t^{p-1} per level",
                "constant across t by the scaling identity"},
               {"t", "radius", "value", "residual"},
               {}};
  for (std::size_t k = 0; k < rep.flux_table.size(); ++k)
    tab.rows.push_back({rep.flux_table[k].t, rep.flux_table[k].radius,
                        rep.flux_table[k].value, rep.scaling_residuals[k]});
  em.add_table(tab, 0, {2}, "capacity scaling");

  em.summary["results"]["capacity"] = rep.total;
  em.summary["results"]["boundary_flux"] = rep.boundary_flux;
  em.summary["results"]["spread"] = rep.spread;
  em.check("scaling-law flux spread", rep.spread <= 5e-3, rep.spread, 5e-3);
}

void preset_liyau(const ExperimentConfig& cfg, Emitter& em,
                  RunManifest& manifest, int threads) {
  (void)threads;
  const auto& end_id = cfg.model.ends.front().id;
  const double p = cfg.p();
  const int n = cfg.model.dimension;
  const double avr = avr_of_end(cfg.model, end_id);
  const double cone_limit = (n - p) / (p - 1.0);

  LiYauBand band;
  std::vector<std::pair<double, double>> gradient;
  double gamma_formula = 0.0;

  if (radial_route(cfg)) {
    StageClock stage(manifest, "radial-oracle");
    const auto sol = radial_potential(cfg.model, end_id, cfg.domain.rho0, p);
    gamma_formula = std::pow(sol.capacity / avr, 1.0 / (p - 1.0));
    band = liyau_check(sol, cfg.s_ladder);
    gradient = gradient_bound_check(sol, {1e1, 1e2, 1e3});
  } else {
    StageClock stage(manifest, "pde-solve");
    Grid grid = make_grid(cfg, end_id);
    DiscreteField field = solve_once(cfg, grid, p);
    const double cap = flux_capacity_at(field, cfg.s_ladder.front());
    gamma_formula = std::pow(cap / avr, 1.0 / (p - 1.0));
    band = liyau_check(field, cfg.s_ladder);
    gradient = gradient_bound_check(field, cfg.s_ladder);
  }

  CsvTable liy{"liyau", {"decay ratio table"}, {"s", "ratio"}, {}};
  for (const auto& [s, r] : band.ratio_table) liy.rows.push_back({s, r});
  em.add_table(liy, 0, {1}, "decay ratio");
  CsvTable gb{"gradient_bound", {"rho |grad u| / u"}, {"s", "bound"}, {}};
  for (const auto& [s, b] : gradient) gb.rows.push_back({s, b});
  em.add_table(gb, 0, {1}, "gradient bound");

  em.summary["results"]["band"] = {band.c_lower, band.c_upper};
  em.summary["results"]["gamma_formula"] = gamma_formula;
  em.summary["results"]["cone_limit"] = cone_limit;

  const bool finite = band.c_lower > 0.0 && std::isfinite(band.c_upper);
  em.check("decay band finite", finite, band.c_upper, 0.0);
  em.check("band brackets gamma",
           band.c_lower <= gamma_formula * (1.0 + 1e-4) &&
               gamma_formula <= band.c_upper * (1.0 + 1e-4),
           gamma_formula, 0.0);
  if (radial_route(cfg)) {
    const double at_far = gradient.back().second;
    em.check("gradient bound cone limit",
             std::abs(at_far - cone_limit) <= 1e-2 * cone_limit, at_far,
             cone_limit);
  }
}

void preset_eccentricity(const ExperimentConfig& cfg, Emitter& em,
                         RunManifest& manifest, int threads) {
  (void)threads;
  const auto& end_id = cfg.model.ends.front().id;
  StageClock stage(manifest, "pde-solve");
  Grid grid = make_grid(cfg, end_id);
  DiscreteField field = solve_once(cfg, grid, cfg.p());
  stage.finish("ok");

  std::vector<double> ladder = cfg.t_ladder;
  if (ladder.front() != 1.0) ladder.insert(ladder.begin(), 1.0);
  const auto table = eccentricity(field, ladder);

  CsvTable tab{"eccentricity",
               {"R(t)/r(t) of the level {u = 1/t}"},
               {"t", "ecc"},
               {}};
  for (const auto& row : table.rows) tab.rows.push_back({row.t, row.ratio});
  em.add_table(tab, 0, {1}, "eccentricity");

  em.summary["results"]["max_increase"] = table.max_increase;
  em.summary["results"]["boundary_ecc"] = table.rows.front().ratio;
  em.check("eccentricity non-increasing", table.non_increasing,
           table.max_increase, 1e-3);
  em.add_field(field, "u_field");
}

void preset_level_areas(const ExperimentConfig& cfg, Emitter& em,
                        RunManifest& manifest, int threads) {
  (void)threads;
  if (!radial_route(cfg))
    throw domain_error("level-areas preset expects a sublevel domain");
  const auto& end_id = cfg.model.ends.front().id;
  const double p = cfg.p();
  const int n = cfg.model.dimension;
  const double avr = avr_of_end(cfg.model, end_id);

  StageClock stage(manifest, "radial-oracle");
  const auto sol = radial_potential(cfg.model, end_id, cfg.domain.rho0, p);
  const double v_scale = std::pow(sol.capacity / avr, 1.0 / (n - p));
  const auto geo = level_area_volume(sol, cfg.model, end_id, v_scale,
                                     cfg.s_ladder);
  const auto capt = capacity_level_sets(sol, cfg.model, end_id, v_scale,
                                        cfg.s_ladder);
  stage.finish("ok");

  CsvTable gt{"level_geometry",
              {"area({v = s}) / (s^{n-1}|S^{n-1}|) and volume({v <= s}) / "
               "(s^n |B^n|); both approach the AVR"},
              {"s", "area_ratio", "volume_ratio"},
              {}};
  for (const auto& r : geo)
    gt.rows.push_back({r.s, r.area_ratio, r.volume_ratio});
  em.add_table(gt, 0, {1, 2}, "level geometry ratios");

  CsvTable ct{"level_capacity",
              {"Cap_p({v <= s}) / (s^{n-p}|S^{n-1}|), limit ((n-p)/(p-1))^{p-1} AVR"},
              {"s", "normalized"},
              {}};
  for (const auto& r : capt) ct.rows.push_back({r.s, r.normalized});
  em.add_table(ct, 0, {1}, "level capacity");

  const double cap_limit = std::pow((n - p) / (p - 1.0), p - 1.0) * avr;
  auto deviations = [&](auto get) {
    std::vector<double> dev;
    for (std::size_t k = 0; k < geo.size(); ++k) dev.push_back(get(k));
    return dev;
  };
  const auto dev_area = deviations(
      [&](std::size_t k) { return std::abs(geo[k].area_ratio - avr) / avr; });
  const auto dev_vol = deviations([&](std::size_t k) {
    return std::abs(geo[k].volume_ratio - avr) / avr;
  });
  const auto dev_cap = deviations([&](std::size_t k) {
    return std::abs(capt[k].normalized - cap_limit) / cap_limit;
  });

  auto monotone = [](const std::vector<double>& dev) {
    // decreasing within a quadrature noise floor
    constexpr double kNoise = 1e-6;
    for (std::size_t k = 0; k + 1 < dev.size(); ++k)
      if (dev[k + 1] > dev[k] + kNoise) return false;
    return true;
  };

  em.summary["results"]["deviation_area"] = dev_area;
  em.summary["results"]["deviation_volume"] = dev_vol;
  em.summary["results"]["deviation_capacity"] = dev_cap;

  em.check("area ratio converges", monotone(dev_area) && dev_area.back() <= 1e-2,
           dev_area.back(), 1e-2);
  em.check("volume ratio converges",
           monotone(dev_vol) && dev_vol.back() <= 1e-2, dev_vol.back(), 1e-2);
  em.check("capacity ratio converges",
           monotone(dev_cap) && dev_cap.back() <= 1e-2, dev_cap.back(), 1e-2);
}

void preset_two_ends(const ExperimentConfig& cfg, Emitter& em,
                     RunManifest& manifest, int threads) {
  if (cfg.model.ends.size() != 2)
    throw unsupported_topology_error("two-ends preset needs a two-end model");
  if (!radial_route(cfg))
    throw domain_error("two-ends preset expects a sublevel domain");
  const double p = cfg.p();

  StageClock stage(manifest, "per-end-solves");
  std::vector<RadialSolution> sols;
  for (const auto& e : cfg.model.ends)
    sols.push_back(radial_potential(cfg.model, e.id, cfg.domain.rho0, p));

  std::vector<DiscreteField> fields(2);
  std::vector<std::function<void()>> tasks;
  for (std::size_t k = 0; k < 2; ++k)
    tasks.push_back([&, k] {
      Grid grid = make_grid(cfg, cfg.model.ends[k].id);
      fields[k] = solve_once(cfg, grid, p);
    });
  run_tasks(std::move(tasks), threads);
  stage.finish("ok");

  std::vector<std::pair<std::string, const RadialSolution*>> oracle_refs;
  std::vector<std::pair<std::string, const DiscreteField*>> field_refs;
  for (std::size_t k = 0; k < 2; ++k) {
    oracle_refs.emplace_back(cfg.model.ends[k].id, &sols[k]);
    field_refs.emplace_back(cfg.model.ends[k].id, &fields[k]);
  }
  const auto rep_oracle = per_end_capacity(oracle_refs);
  const auto rep_pde = per_end_capacity(field_refs);

  CsvTable tab{"per_end_capacity",
               {"per-end normalized capacities, oracle and discrete routes",
                "rows ordered as the model's end list"},
               {"end_index", "oracle", "pde", "avr"},
               {}};
  double max_rel = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& id = cfg.model.ends[k].id;
    const double o = rep_oracle.per_end.at(id);
    const double d = rep_pde.per_end.at(id);
    max_rel = std::max(max_rel, std::abs(d - o) / o);
    tab.rows.push_back({static_cast<double>(k), o, d,
                        avr_of_end(cfg.model, id)});
  }
  em.add_table(tab, 0, {1, 2}, "per-end capacities");

  // splittings are sums by construction; record them
  double avr_sum = 0.0;
  for (const auto& e : cfg.model.ends) avr_sum += avr_of_end(cfg.model, e.id);
  em.summary["results"]["capacity_total_oracle"] = rep_oracle.total;
  em.summary["results"]["capacity_total_pde"] = rep_pde.total;
  em.summary["results"]["avr_total"] = avr_sum;
  em.summary["results"]["per_end_oracle"] = rep_oracle.per_end;
  em.summary["results"]["per_end_pde"] = rep_pde.per_end;

  em.check("pde matches oracle per end", max_rel <= 1e-3, max_rel, 1e-3);
  double split_residual = std::abs(
      rep_oracle.total - (rep_oracle.per_end.begin()->second +
                          std::next(rep_oracle.per_end.begin())->second));
  em.check("capacity splitting sums exactly", split_residual == 0.0,
           split_residual, 0.0);
}

const std::vector<PresetInfo>& preset_registry() {
  static const std::vector<PresetInfo> presets = {
      {"thm1-potential",
       "first-order decay of the p-capacitary potential: u ~ "
       "(C_p/AVR)^{1/(p-1)} rho^{-(n-p)/(p-1)} on each end"},
      {"thm2-imcf",
       "large-time behaviour of the inverse mean curvature flow via the "
       "p -> 1 limit: w - (n-1) log rho -> -log(hull area / (AVR |S^{n-1}|))"},
      {"scaling-law",
       "capacity scaling of sublevel sets: C_p(Omega_t) = t^{p-1} C_p(Omega)"},
      {"liyau",
       "two-sided decay band for u and the gradient bound rho |grad u| / u"},
      {"eccentricity",
       "levels of the potential round off: R(t)/r(t) is non-increasing"},
      {"level-areas",
       "area, volume and capacity ratios of rescaled levels approach the "
       "asymptotic volume ratio"},
      {"two-ends",
       "per-end capacity decomposition and AVR splitting on two-end models"},
  };
  return presets;
}

}  // namespace

std::vector<PresetInfo> list_presets() { return preset_registry(); }

RunManifest run_preset(const std::string& name, const ExperimentConfig& cfg,
                       const std::string& out_dir, int threads) {
  RunManifest manifest;
  manifest.preset = name;
  manifest.artifact_version = kVersion;
  manifest.config_hash = config_hash(cfg);
  manifest.started = iso_now();
  manifest.passed = true;

  const PresetInfo* info = nullptr;
  for (const auto& p : preset_registry())
    if (p.name == name) info = &p;
  if (!info) {
    manifest.passed = false;
    manifest.exit_code = kExitInvalidConfig;
    manifest.check_lines.push_back("[FAIL] unknown preset: " + name);
    return manifest;
  }

  const fs::path run_dir =
      fs::path(out_dir) / (name + "-" + manifest.config_hash.substr(0, 12));
  fs::create_directories(run_dir);

  Emitter em{run_dir, manifest, json::object()};
  em.summary["preset"] = name;
  em.summary["verifies"] = info->verifies;
  em.summary["config_hash"] = manifest.config_hash;
  em.summary["artifact_version"] = kVersion;
  em.summary["config"] = json::parse(canonical_config(cfg));
  em.summary["checks"] = json::array();

  try {
    if (name == "thm1-potential")
      preset_thm1(cfg, em, manifest, threads);
    else if (name == "thm2-imcf")
      preset_thm2(cfg, em, manifest, threads);
    else if (name == "scaling-law")
      preset_scaling(cfg, em, manifest, threads);
    else if (name == "liyau")
      preset_liyau(cfg, em, manifest, threads);
    else if (name == "eccentricity")
      preset_eccentricity(cfg, em, manifest, threads);
    else if (name == "level-areas")
      preset_level_areas(cfg, em, manifest, threads);
    else if (name == "two-ends")
      preset_two_ends(cfg, em, manifest, threads);
    manifest.exit_code = manifest.passed ? kExitPass : kExitCheckFailed;
  } catch (const solver_stall_error& err) {
    manifest.passed = false;
    manifest.exit_code = kExitSolverStall;
    manifest.check_lines.push_back(std::string("[FAIL] ") + err.what());
    em.summary["error"] = err.what();
  } catch (const extrapolation_error& err) {
    manifest.passed = false;
    manifest.exit_code = kExitExtrapolation;
    manifest.check_lines.push_back(std::string("[FAIL] ") + err.what());
    em.summary["error"] = err.what();
  } catch (const diagnostics_error& err) {
    manifest.passed = false;
    manifest.exit_code = kExitExtrapolation;
    manifest.check_lines.push_back(std::string("[FAIL] ") + err.what());
    em.summary["error"] = err.what();
  }

  manifest.finished = iso_now();
  em.summary["passed"] = manifest.passed;
  em.finalize();

  // manifest file
  json jm;
  jm["preset"] = manifest.preset;
  jm["config_hash"] = manifest.config_hash;
  jm["artifact_version"] = manifest.artifact_version;
  jm["started"] = manifest.started;
  jm["finished"] = manifest.finished;
  jm["passed"] = manifest.passed;
  jm["exit_code"] = manifest.exit_code;
  for (const auto& s : manifest.stages)
    jm["stages"].push_back(
        {{"name", s.name}, {"status", s.status}, {"seconds", s.seconds}});
  manifest.files.push_back("run_manifest.json");
  jm["files"] = manifest.files;
  jm["checks"] = manifest.check_lines;
  std::ofstream mf(run_dir / "run_manifest.json", std::ios::binary);
  mf << jm.dump(2) << "\n";

  return manifest;
}

}  // namespace conecap
