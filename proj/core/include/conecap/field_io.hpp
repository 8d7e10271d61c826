#pragma once

#include <string>

#include "conecap/plap_solver.hpp"

namespace conecap {

/// Writes (rho, theta, u) rows for every node.
void write_field_csv(const DiscreteField& field, const std::string& path);

/// Binary grid dump. Layout (little-endian, native doubles):
///   magic "CCFD", u32 version = 1, u32 radial node count, u32 angular node
///   count, f64 p, f64 achieved_eps, radial nodes, angular nodes, values
///   row-major (radial index outer).
void write_field_binary(const DiscreteField& field, const std::string& path);

struct FieldDump {
  std::vector<double> rt;
  std::vector<double> theta;
  std::vector<double> values;
  double p = 0.0;
  double achieved_eps = 0.0;
};
FieldDump read_field_binary(const std::string& path);

}  // namespace conecap
