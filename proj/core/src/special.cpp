#include "conecap/special.hpp"

#include <cmath>
#include <stdexcept>

namespace conecap {

double unit_sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("unit_sphere_area: n >= 1 required");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

}  // namespace conecap
