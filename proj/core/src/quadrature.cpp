#include "conecap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace conecap {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

PanelResult gauss_kronrod(const std::function<double(double)>& f, double a,
                          double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kXgk[k];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    result_kronrod += kWgk[k] * (f1 + f2);
    if (k % 2 == 1) result_gauss += kWg[k / 2] * (f1 + f2);
  }
  result_gauss *= half;
  result_kronrod *= half;
  return {result_kronrod, std::abs(result_kronrod - result_gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, double rel_tol) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0};
    throw std::invalid_argument("integrate: reversed bounds");
  }

  struct Panel {
    double a, b, value, error;
  };

  QuadratureResult out;
  auto first = gauss_kronrod(f, a, b);
  out.evaluations = 15;
  std::vector<Panel> panels{{a, b, first.value, first.error}};
  double total = first.value;
  double total_err = first.error;

  const int max_panels = 4000;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(panels.size()) < max_panels) {
    // split the panel with the largest error estimate
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;
    Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // interval exhausted
    auto left = gauss_kronrod(f, p.a, mid);
    auto right = gauss_kronrod(f, mid, p.b);
    out.evaluations += 30;
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    panels[worst] = {p.a, mid, left.value, left.error};
    panels.push_back({mid, p.b, right.value, right.error});
  }

  out.value = total;
  out.error_estimate = total_err;
  return out;
}

double integrate_value(const std::function<double(double)>& f, double a,
                       double b, double abs_tol, double rel_tol) {
  return integrate(f, a, b, abs_tol, rel_tol).value;
}

double integrate_log_substituted(const std::function<double(double)>& f,
                                 double a, double b, double abs_tol,
                                 double rel_tol) {
  if (!(a > 0.0 && b > a)) {
    if (a == b) return 0.0;
    throw std::invalid_argument("integrate_log_substituted: need 0 < a < b");
  }
  auto g = [&f](double x) {
    const double s = std::exp(x);
    return f(s) * s;
  };
  return integrate(g, std::log(a), std::log(b), abs_tol, rel_tol).value;
}

void gauss_legendre(int npoints, double* nodes, double* weights) {
  // Newton iteration on Legendre polynomials, symmetric rule.
  const int n = npoints;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      const double dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p1 = 0.0;
    p0 = 1.0;
    for (int k = 0; k < n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
    }
    const double dp = n * (x * p0 - p1) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[n - 1 - i] = weights[i];
  }
}

}  // namespace conecap
