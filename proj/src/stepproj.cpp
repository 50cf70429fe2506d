#include <ofem/stepproj.hpp>

#include <ofem/quadrature.hpp>
#include <ofem/sparse.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ofem {

//------------------------------------------------------------------------------
// spaces
//------------------------------------------------------------------------------

int dof_count(SpaceKind1D space, const Mesh1D& mesh) {
  switch (space) {
    case SpaceKind1D::P0: return mesh.n_elements();
    case SpaceKind1D::P1Discontinuous: return 2 * mesh.n_elements();
    case SpaceKind1D::P1Continuous: return mesh.n_nodes();
    case SpaceKind1D::P1ContinuousZeroBC: return mesh.n_nodes() - 2;
  }
  throw std::logic_error("dof_count: bad space");
}

std::string space_name(SpaceKind1D space) {
  switch (space) {
    case SpaceKind1D::P0: return "p0";
    case SpaceKind1D::P1Discontinuous: return "p1dg";
    case SpaceKind1D::P1Continuous: return "s1";
    case SpaceKind1D::P1ContinuousZeroBC: return "s1_0";
  }
  throw std::logic_error("space_name: bad space");
}

PiecewiseFunction as_piecewise(const StepFunction& u) {
  PiecewiseFunction f;
  const double x0 = u.jump_location, vl = u.left_value, vr = u.right_value;
  f.value = [x0, vl, vr](double x) { return x < x0 ? vl : vr; };
  f.breakpoints = {x0};
  return f;
}

namespace {

// global DOF ids of the element's local basis functions; -1 marks a slot held
// at zero (boundary nodes of the zero-BC space)
void local_dofs(SpaceKind1D space, const Mesh1D& mesh, int e, int out[2], int& nb) {
  switch (space) {
    case SpaceKind1D::P0:
      out[0] = e;
      nb = 1;
      return;
    case SpaceKind1D::P1Discontinuous:
      out[0] = 2 * e;
      out[1] = 2 * e + 1;
      nb = 2;
      return;
    case SpaceKind1D::P1Continuous:
      out[0] = e;
      out[1] = e + 1;
      nb = 2;
      return;
    case SpaceKind1D::P1ContinuousZeroBC:
      out[0] = (e == 0) ? -1 : e - 1;
      out[1] = (e + 1 == mesh.n_nodes() - 1) ? -1 : e;
      nb = 2;
      return;
  }
  throw std::logic_error("local_dofs: bad space");
}

double basis_value(SpaceKind1D space, int local, double s) {
  if (space == SpaceKind1D::P0) return 1.0;
  return local == 0 ? 1.0 - s : s;
}

double local_mass(SpaceKind1D space, int i, int j, double h) {
  if (space == SpaceKind1D::P0) return h;
  return (i == j) ? h / 3.0 : h / 6.0;
}

} // namespace

//------------------------------------------------------------------------------
// finite element functions
//------------------------------------------------------------------------------

double FEFunction::node_value(int node) const {
  switch (space) {
    case SpaceKind1D::P1Continuous:
      return coefficients.at(node);
    case SpaceKind1D::P1ContinuousZeroBC:
      if (node == 0 || node == mesh.n_nodes() - 1) return 0.0;
      return coefficients.at(node - 1);
    default:
      throw std::logic_error("node_value: space has no single nodal value");
  }
}

double FEFunction::eval_on_element(int e, double s) const {
  switch (space) {
    case SpaceKind1D::P0:
      return coefficients.at(e);
    case SpaceKind1D::P1Discontinuous:
      return coefficients.at(2 * e) * (1.0 - s) + coefficients.at(2 * e + 1) * s;
    case SpaceKind1D::P1Continuous:
      return coefficients.at(e) * (1.0 - s) + coefficients.at(e + 1) * s;
    case SpaceKind1D::P1ContinuousZeroBC:
      return node_value(e) * (1.0 - s) + node_value(e + 1) * s;
  }
  throw std::logic_error("eval_on_element: bad space");
}

double FEFunction::eval(double x) const {
  const int ne = mesh.n_elements();
  if (x <= mesh.domain_left()) return eval_on_element(0, 0.0);
  if (x >= mesh.domain_right()) return eval_on_element(ne - 1, 1.0);
  int lo = 0, hi = ne - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (mesh.element(mid).second > x)
      hi = mid;
    else
      lo = mid + 1;
  }
  const auto [xl, xr] = mesh.element(lo);
  return eval_on_element(lo, (x - xl) / (xr - xl));
}

double FEFunction::slope_on_element(int e) const {
  if (space == SpaceKind1D::P0) return 0.0;
  return (eval_on_element(e, 1.0) - eval_on_element(e, 0.0)) / mesh.length(e);
}

//------------------------------------------------------------------------------
// numeric projector
//------------------------------------------------------------------------------

FEFunction numeric_l2_project_pinned(const PiecewiseFunction& u, const Mesh1D& mesh,
                                     SpaceKind1D space,
                                     const std::vector<std::pair<int, double>>& pinned) {
  const int n = dof_count(space, mesh);
  std::map<int, double> pin(pinned.begin(), pinned.end());
  for (const auto& [d, v] : pin) {
    (void)v;
    if (d < 0 || d >= n) throw std::out_of_range("numeric_l2_project_pinned: bad dof");
  }

  SparseMatrix M(n, n);
  std::vector<double> rhs(n, 0.0);
  const QuadratureRule quad = gauss_interval(9);

  int dofs[2];
  int nb = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto [xl, xr] = mesh.element(e);
    const double h = xr - xl;
    local_dofs(space, mesh, e, dofs, nb);

    for (int i = 0; i < nb; ++i) {
      const int di = dofs[i];
      if (di < 0 || pin.count(di)) continue;
      for (int j = 0; j < nb; ++j) {
        const int dj = dofs[j];
        const double mij = local_mass(space, i, j, h);
        if (dj < 0) continue;
        if (auto it = pin.find(dj); it != pin.end())
          rhs[di] -= mij * it->second; // move the pinned column to the data side
        else
          M.add(di, dj, mij);
      }
    }

    // data side, split at breakpoints so each quadrature call sees one piece
    std::vector<double> cuts = {xl};
    for (double b : u.breakpoints)
      if (b > xl && b < xr) cuts.push_back(b);
    cuts.push_back(xr);
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double a = cuts[p], bb = cuts[p + 1];
      for (size_t k = 0; k < quad.points.size(); ++k) {
        const double x = a + (bb - a) * quad.points[k].x;
        const double w = (bb - a) * quad.weights[k];
        const double ux = u(x);
        const double s = (x - xl) / h;
        for (int i = 0; i < nb; ++i) {
          const int di = dofs[i];
          if (di < 0 || pin.count(di)) continue;
          rhs[di] += w * ux * basis_value(space, i, s);
        }
      }
    }
  }

  for (const auto& [d, v] : pin) {
    M.add(d, d, 1.0);
    rhs[d] = v;
  }

  LinearSolveOptions opts;
  opts.method = SolveMethod::DirectBanded;
  FEFunction fe;
  fe.space = space;
  fe.mesh = mesh;
  fe.coefficients = solve(M, rhs, opts);
  return fe;
}

FEFunction numeric_l2_project(const PiecewiseFunction& u, const Mesh1D& mesh,
                              SpaceKind1D space) {
  return numeric_l2_project_pinned(u, mesh, space, {});
}

FEFunction numeric_l2_project(const StepFunction& u, const Mesh1D& mesh,
                              SpaceKind1D space) {
  return numeric_l2_project_pinned(as_piecewise(u), mesh, space, {});
}

//------------------------------------------------------------------------------
// closed-form families (canonical step: -1 to +1 with jump at relative t)
//------------------------------------------------------------------------------

ProjectionResult closed_p0(const CutInterval& cut) {
  const double t = cut.t, h = cut.h;
  ProjectionResult r;
  const double c = 1.0 - 2.0 * t;
  r.U_minus1 = c;
  r.U_plus1 = c;
  r.overshoot = 0.0;
  r.l2_error_on_cut = 2.0 * std::sqrt(t * (1.0 - t) * h);
  return r;
}

ProjectionResult closed_p1disc(const CutInterval& cut) {
  const double t = cut.t, h = cut.h;
  ProjectionResult r;
  const double um = 1.0 - 8.0 * t + 6.0 * t * t;
  const double up = 1.0 + 4.0 * t - 6.0 * t * t;
  r.U_minus1 = um;
  r.U_plus1 = up;
  r.overshoot = std::max({up - 1.0, -(um + 1.0), 0.0}) + 0.0;
  r.l2_error_on_cut = 2.0 * std::sqrt(t * (1.0 - t) * (1.0 - 3.0 * t + 3.0 * t * t) * h);
  return r;
}

namespace {

double window_overshoot(double um2, double um1, double up1, double up2) {
  // left of the jump the exact value is -1, right of it +1
  return std::max({-(um2 + 1.0), -(um1 + 1.0), up1 - 1.0, up2 - 1.0, 0.0}) + 0.0;
}

} // namespace

ProjectionResult closed_s1_uniform(const CutInterval& cut) {
  const double t = cut.t, h = cut.h;
  ProjectionResult r;
  const double um2 = -3.0 * (87.0 - 60.0 * t + 38.0 * t * t) / 209.0;
  const double um1 = (-1.0 - 720.0 * t + 456.0 * t * t) / 209.0;
  const double up1 = (265.0 + 192.0 * t - 456.0 * t * t) / 209.0;
  const double up2 = 3.0 * (65.0 - 16.0 * t + 38.0 * t * t) / 209.0;
  r.U_minus2 = um2;
  r.U_minus1 = um1;
  r.U_plus1 = up1;
  r.U_plus2 = up2;
  r.overshoot = window_overshoot(um2, um1, up1, up2);
  const double poly =
      8869.0 + t * (60189.0 + t * (-294117.0 + t * (467856.0 - 233928.0 * t)));
  r.l2_error_on_cut = 2.0 * std::sqrt(h * poly / 131043.0);
  return r;
}

ProjectionResult closed_s1_graded(const CutInterval& cut) {
  const double t = cut.t, h = cut.h;
  ProjectionResult r;
  const double um2 = (-281.0 + 138.0 * t - 87.0 * t * t) / 241.0;
  const double um1 = 3.0 * (-27.0 - 184.0 * t + 116.0 * t * t) / 241.0;
  const double up1 = (325.0 + 144.0 * t - 468.0 * t * t) / 241.0;
  const double up2 = (227.0 - 24.0 * t + 78.0 * t * t) / 241.0;
  r.U_minus2 = um2;
  r.U_minus1 = um1;
  r.U_plus1 = up1;
  r.U_plus2 = up2;
  r.overshoot = window_overshoot(um2, um1, up1, up2);
  const double poly =
      20923.0 + t * (13173.0 + t * (-221541.0 + t * (450576.0 - 250668.0 * t)));
  r.l2_error_on_cut = 2.0 * std::sqrt(h * poly / 174243.0);
  return r;
}

double closed_s1_matched_local(double delta) { return 1.25 - 0.25 * delta; }

double closed_s1_coarsened(double c, double delta) {
  if (c < 1.0) throw std::invalid_argument("closed_s1_coarsened: need c >= 1");
  return 1.0 + (1.0 - c * delta) / (2.0 * (1.0 + c));
}

Mesh1D s1_uniform_window(const CutInterval& cut) {
  const double t = cut.t, h = cut.h;
  return Mesh1D::from_nodes({-(t + 2.0) * h, -(t + 1.0) * h, -t * h, (1.0 - t) * h,
                             (2.0 - t) * h, (3.0 - t) * h});
}

Mesh1D s1_graded_window(const CutInterval& cut) {
  const double t = cut.t, h = cut.h;
  return Mesh1D::from_nodes({-(t + 4.0) * h, -(t + 2.0) * h, -t * h, (1.0 - t) * h,
                             (2.0 - t) * h, (4.0 - t) * h});
}

//------------------------------------------------------------------------------
// measurement
//------------------------------------------------------------------------------

double overshoot_of(const FEFunction& fe, double exact_min, double exact_max) {
  if (!(exact_min <= exact_max))
    throw std::invalid_argument("overshoot_of: bad bounds");
  double os = 0.0;
  for (double v : fe.dof_values())
    os = std::max({os, v - exact_max, exact_min - v});
  return os;
}

std::vector<double> elementwise_l2_error(const FEFunction& fe, const PiecewiseFunction& u) {
  const QuadratureRule quad = gauss_interval(13);
  std::vector<double> out(fe.mesh.n_elements(), 0.0);
  for (int e = 0; e < fe.mesh.n_elements(); ++e) {
    const auto [xl, xr] = fe.mesh.element(e);
    const double h = xr - xl;
    std::vector<double> cuts = {xl};
    for (double b : u.breakpoints)
      if (b > xl && b < xr) cuts.push_back(b);
    cuts.push_back(xr);
    double acc = 0.0;
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double a = cuts[p], bb = cuts[p + 1];
      for (size_t k = 0; k < quad.points.size(); ++k) {
        const double x = a + (bb - a) * quad.points[k].x;
        const double w = (bb - a) * quad.weights[k];
        const double d = u(x) - fe.eval_on_element(e, (x - xl) / h);
        acc += w * d * d;
      }
    }
    out[e] = std::sqrt(acc);
  }
  return out;
}

double l2_error_on(const FEFunction& fe, const PiecewiseFunction& u, int element) {
  if (element < 0 || element >= fe.mesh.n_elements())
    throw std::out_of_range("l2_error_on: bad element");
  // reuse the elementwise routine on the single element of interest
  const auto [xl, xr] = fe.mesh.element(element);
  const double h = xr - xl;
  const QuadratureRule quad = gauss_interval(13);
  std::vector<double> cuts = {xl};
  for (double b : u.breakpoints)
    if (b > xl && b < xr) cuts.push_back(b);
  cuts.push_back(xr);
  double acc = 0.0;
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], bb = cuts[p + 1];
    for (size_t k = 0; k < quad.points.size(); ++k) {
      const double x = a + (bb - a) * quad.points[k].x;
      const double w = (bb - a) * quad.weights[k];
      const double d = u(x) - fe.eval_on_element(element, (x - xl) / h);
      acc += w * d * d;
    }
  }
  return std::sqrt(acc);
}

} // namespace ofem
