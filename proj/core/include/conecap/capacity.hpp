#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "conecap/plap_solver.hpp"
#include "conecap/radial_oracle.hpp"

namespace conecap {

struct FluxEntry {
  double t = 1.0;        // level parameter
  double radius = 0.0;   // evaluation sphere
  double value = 0.0;    // C_p(Omega_t) / t^{p-1}
};

struct CapacityReport {
  double p = 2.0;
  double total = 0.0;
  std::map<std::string, double> per_end;
  std::vector<FluxEntry> flux_table;
  double boundary_flux = 0.0;
  std::vector<double> scaling_residuals;  // |C(t)/t^{p-1} - C| / C
  double spread = 0.0;                    // max pairwise flux-table spread
};

/// Normalized capacity from the flux of |grad u|^{p-2} du/drho through the
/// coordinate sphere {rho = s}; the integrand carries the achieved
/// regularization so the quantity is the one the discrete solve conserves.
double flux_capacity_at(const DiscreteField& field, double s);

/// Per-end capacities for fields solved end by end; the total is their sum.
CapacityReport per_end_capacity(
    const std::vector<std::pair<std::string, const DiscreteField*>>& fields);

/// Oracle route: per-end capacities of radial solutions.
CapacityReport per_end_capacity(
    const std::vector<std::pair<std::string, const RadialSolution*>>& sols);

/// Flux table over a level ladder plus scaling residuals; each level t is
/// evaluated at the first grid sphere enclosing {u > 1/t}.
CapacityReport capacity_report(const DiscreteField& field,
                               const std::vector<double>& t_ladder);

/// Level set {field = level} as cell-local segments plus the radial span.
struct LevelSet {
  double level = 0.0;
  double r_min = 0.0;  // min physical rho over the level set
  double r_max = 0.0;
  double area = 0.0;   // induced (n-1)-measure
  bool multi_loop = false;
  std::vector<std::array<double, 4>> segments;  // (rho1,th1,rho2,th2)
};
LevelSet extract_level_set(const DiscreteField& field, double level);

struct EccentricityRow {
  double t = 1.0;
  double ratio = 1.0;  // R(t)/r(t)
};
struct EccentricityTable {
  std::vector<EccentricityRow> rows;
  bool non_increasing = true;  // within tolerance 1e-3
  double max_increase = 0.0;
};
/// Eccentricity of the levels {u = 1/t}; rejects multi-loop level sets.
EccentricityTable eccentricity(const DiscreteField& field,
                               const std::vector<double>& t_ladder);

struct LevelGeometryRow {
  double s = 0.0;
  double area = 0.0;
  double volume = 0.0;
  double area_ratio = 0.0;    // area / (s^{n-1} |S^{n-1}|)
  double volume_ratio = 0.0;  // volume / (s^n |B^n|)
};
/// Geometry of the levels {v = s} with v = scale * u^{-(p-1)/(n-p)};
/// volumes include the starting domain.
std::vector<LevelGeometryRow> level_area_volume(
    const DiscreteField& field, double v_scale,
    const std::vector<double>& s_ladder);
std::vector<LevelGeometryRow> level_area_volume(
    const RadialSolution& sol, const ManifoldModel& m, std::string_view end_id,
    double v_scale, const std::vector<double>& s_ladder);

struct LevelCapacityRow {
  double s = 0.0;
  double normalized = 0.0;  // Cap_p({v<=s})/(s^{n-p} |S^{n-1}|)
};
/// Normalized p-capacity of sublevel sets of v along the ladder; the limit
/// is ((n-p)/(p-1))^{p-1} AVR. Radial route solves a fresh oracle per level.
std::vector<LevelCapacityRow> capacity_level_sets(
    const RadialSolution& sol, const ManifoldModel& m, std::string_view end_id,
    double v_scale, const std::vector<double>& s_ladder);
std::vector<LevelCapacityRow> capacity_level_sets(
    const DiscreteField& field, double v_scale,
    const std::vector<double>& s_ladder);

/// Volume of the starting domain (the region inside the grid's inner
/// boundary), by model quadrature.
double domain_volume(const ManifoldModel& m, const DomainSpec& d,
                     std::string_view end_id);

}  // namespace conecap
