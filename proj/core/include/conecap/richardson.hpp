#pragma once

#include <span>
#include <vector>

namespace conecap {

struct RichardsonResult {
  double limit = 0.0;       // accelerated value from the last abscissa pair
  double spread = 0.0;      // |difference| of the two last accelerated values
  std::vector<double> accelerated;  // one entry per adjacent pair
};

/// One-step Richardson extrapolation of a ladder A(s) = A + c s^{-order} + ...
/// sampled at increasing abscissae. Requires at least 3 entries.
RichardsonResult richardson_extrapolate(std::span<const double> abscissae,
                                        std::span<const double> values,
                                        double order);

}  // namespace conecap
