#pragma once

#include <vector>

namespace ofem {

//------------------------------------------------------------------------------
// Quadrature rules on the reference interval [0,1] and the reference triangle
// {(x,y) : x >= 0, y >= 0, x + y <= 1}.
//------------------------------------------------------------------------------

struct QuadraturePoint {
  double x;
  double y; // unused (0) for interval rules
};

struct QuadratureRule {
  int dim;    // 1 = interval, 2 = triangle
  int degree; // every polynomial up to this total degree is integrated exactly
  std::vector<QuadraturePoint> points;
  std::vector<double> weights; // sum to 1 (interval) or 1/2 (triangle)
};

// Gauss-Legendre rule on [0,1] exact for polynomials of degree <= `degree`.
// Uses ceil((degree+1)/2) points; nodes from Newton iteration on the Legendre
// polynomial, so any degree is available.
QuadratureRule gauss_interval(int degree);

// Symmetric all-positive-weight rules on the reference triangle.  Exact for
// total degree <= 5; higher requests are clamped to the degree-5 rule.
QuadratureRule triangle_rule(int degree);

} // namespace ofem
