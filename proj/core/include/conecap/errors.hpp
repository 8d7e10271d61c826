#pragma once

#include <stdexcept>
#include <string>

namespace conecap {

/// Base class for all conecap errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A model descriptor failed validation (non-positive warp, bad slope, ...).
struct invalid_model_error : error {
  using error::error;
};

/// More than two ends, or an end layout the solver does not support.
struct unsupported_topology_error : error {
  using error::error;
};

/// A requested coordinate or level lies outside the covered range.
struct domain_error : error {
  using error::error;
};

/// A convergence ladder failed its spread diagnostic.
struct diagnostics_error : error {
  using error::error;
};

/// A p -> 1 extrapolation exceeded its reliability threshold.
struct extrapolation_error : error {
  using error::error;
};

}  // namespace conecap
