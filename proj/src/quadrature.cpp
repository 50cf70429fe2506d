#include <ofem/quadrature.hpp>

#include <cmath>
#include <stdexcept>

namespace ofem {

//------------------------------------------------------------------------------
// Gauss-Legendre on [0,1]
//------------------------------------------------------------------------------

namespace {

// Value and derivative of the Legendre polynomial P_n on [-1,1].
void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

QuadratureRule gauss_interval(int degree) {
  if (degree < 0) throw std::invalid_argument("gauss_interval: degree must be >= 0");
  const int n = (degree + 2) / 2; // n-point Gauss is exact up to degree 2n-1

  QuadratureRule rule;
  rule.dim = 1;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);

  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_eval(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_eval(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]; roots come out in descending order, store ascending
    rule.points[n - 1 - i] = {0.5 * (x + 1.0), 0.0};
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

//------------------------------------------------------------------------------
// Reference triangle rules
//------------------------------------------------------------------------------

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: degree must be >= 0");
  QuadratureRule rule;
  rule.dim = 2;

  auto push = [&rule](double x, double y, double w) {
    rule.points.push_back({x, y});
    rule.weights.push_back(w);
  };
  // orbit helpers: barycentric (a,a,a) -> 1 point, (a,a,b) -> 3 points
  auto push3 = [&push](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    push(a, a, w);
    push(b, a, w);
    push(a, b, w);
  };

  if (degree <= 1) {
    rule.degree = 1;
    push(1.0 / 3.0, 1.0 / 3.0, 0.5);
  } else if (degree == 2) {
    rule.degree = 2;
    push3(1.0 / 6.0, 1.0 / 6.0);
  } else if (degree <= 4) {
    // 6-point Dunavant rule, exact to degree 4, all weights positive
    rule.degree = 4;
    push3(0.445948490915965, 0.111690794839005);
    push3(0.091576213509771, 0.054975871827661);
  } else {
    // 7-point rule (centroid + two 3-orbits), exact to degree 5
    rule.degree = 5;
    push(1.0 / 3.0, 1.0 / 3.0, 0.1125);
    push3((6.0 + std::sqrt(15.0)) / 21.0, (155.0 + std::sqrt(15.0)) / 2400.0);
    push3((6.0 - std::sqrt(15.0)) / 21.0, (155.0 - std::sqrt(15.0)) / 2400.0);
  }
  return rule;
}

} // namespace ofem
