#pragma once

namespace conecap {

/// Area of the unit sphere S^{n-1} embedded in R^n, e.g. |S^2| = 4*pi for n = 3.
double unit_sphere_area(int n);

/// Volume of the unit ball B^n, equal to |S^{n-1}| / n.
double unit_ball_volume(int n);

}  // namespace conecap
