#pragma once

#include <string>
#include <vector>

#include "conecap/asymptotics.hpp"

namespace conecap {

/// Pointwise Moser transform w_p = -(p-1) log u_p; zero on the inner
/// boundary row. Throws on non-positive values.
DiscreteField moser_transform(const DiscreteField& u_field, double p);

/// Nodewise linear extrapolation in (p-1) from the two smallest ladder
/// entries; the 3-point quadratic serves as the spread diagnostic. Throws
/// extrapolation_error if the spread at the calibration radius exceeds
/// 1e-2 times the field scale.
struct ExtrapolatedImcf {
  DiscreteField w;
  double spread = 0.0;
  double calibration_radius = 0.0;
  std::vector<double> p_ladder;
};
ExtrapolatedImcf p_to_one_extrapolate(const std::vector<DiscreteField>& w_ps,
                                      const std::vector<double>& p_ladder);

/// Hull area from the p -> 1 capacity limit: |S^{n-1}| times the linear
/// extrapolation of the per-end capacities. Flags a non-monotone ladder.
struct HullAreaEstimate {
  double area = 0.0;
  double extrapolated_capacity = 0.0;
  bool monotone = true;
  std::vector<double> ladder;  // per-end capacity per ladder entry
};
HullAreaEstimate hull_area_estimate(const std::vector<double>& p_ladder,
                                    const std::vector<double>& capacities,
                                    int n);

struct ImcfConstants {
  double measured = 0.0;   // Richardson limit of mean[w - (n-1) log rho]
  double predicted = 0.0;  // -log(hull_area / (AVR |S^{n-1}|))
  double residual = 0.0;   // |measured - predicted| on the log scale
  std::vector<double> ladder_means;
  bool oscillation_ok = true;
};
ImcfConstants imcf_constant_check(const DiscreteField& w, double hull_area,
                                  double avr,
                                  const std::vector<double>& s_ladder);
ImcfConstants imcf_constant_check(const RadialImcf& w, const ManifoldModel& m,
                                  std::string_view end_id, double hull_area,
                                  double avr,
                                  const std::vector<double>& s_ladder);

struct GrowthRow {
  double t = 0.0;
  double area = 0.0;
  double ratio = 0.0;  // area / e^t
};
struct GrowthTable {
  std::vector<GrowthRow> rows;
  double max_relative_deviation = 0.0;
};
/// |boundary of {w <= t}| / e^t along the ladder; constant for the exact
/// flow.
GrowthTable exponential_growth_check(const DiscreteField& w,
                                     const std::vector<double>& t_ladder);
GrowthTable exponential_growth_check(const RadialImcf& w,
                                     const ManifoldModel& m,
                                     std::string_view end_id,
                                     const std::vector<double>& t_ladder);

/// Table s -> sup over {rho = s} of rho |grad w|; tends to n-1 on cones.
std::vector<std::pair<double, double>> imcf_gradient_check(
    const DiscreteField& w, const std::vector<double>& s_ladder);
std::vector<std::pair<double, double>> imcf_gradient_check(
    const RadialImcf& w, const std::vector<double>& s_ladder);

struct ImcfReport {
  std::string end_id;
  std::vector<double> p_ladder;
  double avr = 1.0;
  HullAreaEstimate hull;
  ImcfConstants constants;
  GrowthTable growth;
  std::vector<std::pair<double, double>> gradient_bound;
  double extrapolation_spread = 0.0;
  std::string extrapolation_note;  // validated-order flag, never asserted
};

}  // namespace conecap
