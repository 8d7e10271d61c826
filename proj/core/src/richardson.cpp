#include "conecap/richardson.hpp"

#include <cmath>
#include <stdexcept>

namespace conecap {

RichardsonResult richardson_extrapolate(std::span<const double> abscissae,
                                        std::span<const double> values,
                                        double order) {
  if (abscissae.size() != values.size())
    throw std::invalid_argument("richardson: size mismatch");
  if (abscissae.size() < 3)
    throw std::invalid_argument("richardson: need at least 3 ladder values");

  RichardsonResult out;
  for (std::size_t i = 0; i + 1 < abscissae.size(); ++i) {
    const double s1 = abscissae[i], s2 = abscissae[i + 1];
    if (!(s2 > s1) || s1 <= 0.0)
      throw std::invalid_argument("richardson: abscissae must increase");
    // Eliminate the c s^{-order} term between the pair.
    const double w1 = std::pow(s1, order), w2 = std::pow(s2, order);
    out.accelerated.push_back((w2 * values[i + 1] - w1 * values[i]) /
                              (w2 - w1));
  }
  const std::size_t m = out.accelerated.size();
  out.limit = out.accelerated[m - 1];
  out.spread = std::abs(out.accelerated[m - 1] - out.accelerated[m - 2]);
  return out;
}

}  // namespace conecap
