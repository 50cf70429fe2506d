#include <ofem/fem1d.hpp>

#include <ofem/quadrature.hpp>
#include <ofem/sparse.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofem {

namespace {

// integrate f * phi over one element against the two nodal hat functions,
// splitting at f's breakpoints; phi = (1-s, s) in the local coordinate
void element_load(const PiecewiseFunction& f, double xl, double xr, double out[2]) {
  static const QuadratureRule quad = gauss_interval(9);
  const double h = xr - xl;
  out[0] = out[1] = 0.0;
  std::vector<double> cuts = {xl};
  for (double b : f.breakpoints)
    if (b > xl && b < xr) cuts.push_back(b);
  cuts.push_back(xr);
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], bb = cuts[p + 1];
    for (size_t k = 0; k < quad.points.size(); ++k) {
      const double x = a + (bb - a) * quad.points[k].x;
      const double w = (bb - a) * quad.weights[k];
      const double fx = f(x);
      const double s = (x - xl) / h;
      out[0] += w * fx * (1.0 - s);
      out[1] += w * fx * s;
    }
  }
}

} // namespace

//------------------------------------------------------------------------------
// conforming P1
//------------------------------------------------------------------------------

FEFunction solve_p1_conforming(const ReactionDiffusionProblem& p, const Mesh1D& mesh) {
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("solve_p1_conforming: eps must be > 0");
  const int nn = mesh.n_nodes();
  const int n = nn - 2; // interior nodal unknowns
  if (n < 1) throw std::invalid_argument("solve_p1_conforming: mesh too coarse");

  SparseMatrix A(n, n);
  std::vector<double> rhs(n, 0.0);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto [xl, xr] = mesh.element(e);
    const double h = xr - xl;
    const int dof[2] = {e == 0 ? -1 : e - 1, e + 1 == nn - 1 ? -1 : e};
    const double stiff = p.epsilon / h;
    const double k_local[2][2] = {{stiff + h / 3.0, -stiff + h / 6.0},
                                  {-stiff + h / 6.0, stiff + h / 3.0}};
    double load[2];
    element_load(p.f, xl, xr, load);
    for (int i = 0; i < 2; ++i) {
      if (dof[i] < 0) continue;
      rhs[dof[i]] += load[i];
      for (int j = 0; j < 2; ++j) {
        if (dof[j] < 0) continue; // zero boundary value contributes nothing
        A.add(dof[i], dof[j], k_local[i][j]);
      }
    }
  }

  FEFunction u;
  u.space = SpaceKind1D::P1ContinuousZeroBC;
  u.mesh = mesh;
  u.coefficients = solve(A, rhs, {});
  return u;
}

//------------------------------------------------------------------------------
// discontinuous P1
//------------------------------------------------------------------------------

FEFunction solve_p1_dg(const ReactionDiffusionProblem& p, const Mesh1D& mesh,
                       const DgPenalty& pen) {
  if (!(pen.mu > 0.0)) throw std::invalid_argument("solve_p1_dg: mu must be > 0");
  const int ne = mesh.n_elements();
  const int n = 2 * ne;
  SparseMatrix A(n, n);
  std::vector<double> rhs(n, 0.0);

  // volume terms
  for (int e = 0; e < ne; ++e) {
    const auto [xl, xr] = mesh.element(e);
    const double h = xr - xl;
    const int d0 = 2 * e, d1 = 2 * e + 1;
    const double stiff = p.epsilon / h;
    A.add(d0, d0, stiff + h / 3.0);
    A.add(d0, d1, -stiff + h / 6.0);
    A.add(d1, d0, -stiff + h / 6.0);
    A.add(d1, d1, stiff + h / 3.0);
    double load[2];
    element_load(p.f, xl, xr, load);
    rhs[d0] += load[0];
    rhs[d1] += load[1];
  }

  // interior-node coupling: consistency, symmetry, and penalty terms built
  // from traces (left element's right value, right element's left value) and
  // the elementwise-constant slopes
  for (int i = 1; i < ne; ++i) {
    const int eL = i - 1, eR = i;
    const double hL = mesh.length(eL), hR = mesh.length(eR);
    // trace functionals as rows over the four local DOFs
    // order: [eL left, eL right, eR left, eR right]
    const int dofs[4] = {2 * eL, 2 * eL + 1, 2 * eR, 2 * eR + 1};
    const double jump[4] = {0.0, 1.0, -1.0, 0.0};           // v(x_i^-) - v(x_i^+)
    const double avg_slope[4] = {-0.5 / hL, 0.5 / hL, -0.5 / hR, 0.5 / hR};
    const double pen_coef = p.epsilon * pen.mu / (hL + hR);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        double v = 0.0;
        v -= p.epsilon * avg_slope[a] * jump[b]; // -{eps w'}[v]
        v -= p.epsilon * avg_slope[b] * jump[a]; // -{eps v'}[w]
        v += pen_coef * jump[a] * jump[b];
        if (v != 0.0) A.add(dofs[a], dofs[b], v);
      }
    }
  }

  FEFunction u;
  u.space = SpaceKind1D::P1Discontinuous;
  u.mesh = mesh;
  u.coefficients = solve(A, rhs, {});
  return u;
}

//------------------------------------------------------------------------------
// mixed P0 with continuous P1 flux
//------------------------------------------------------------------------------

std::pair<FEFunction, FEFunction> solve_p0_mixed(const ReactionDiffusionProblem& p,
                                                 const Mesh1D& mesh) {
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("solve_p0_mixed: eps must be > 0");
  const int nn = mesh.n_nodes();
  const int ne = mesh.n_elements();
  const int n = nn + ne; // [sigma nodal values; u cell values]
  SparseMatrix A(n, n);
  std::vector<double> rhs(n, 0.0);

  for (int e = 0; e < ne; ++e) {
    const auto [xl, xr] = mesh.element(e);
    const double h = xr - xl;
    const int s0 = e, s1 = e + 1; // sigma DOFs
    const int uu = nn + e;        // u DOF

    // (sigma, tau) - eps (tau', u) = 0, scaled so the mass block is O(h)
    A.add(s0, s0, h / 3.0);
    A.add(s0, s1, h / 6.0);
    A.add(s1, s0, h / 6.0);
    A.add(s1, s1, h / 3.0);
    // int_K tau' u = -u_e for the left hat, +u_e for the right hat
    A.add(s0, uu, p.epsilon);
    A.add(s1, uu, -p.epsilon);

    // (sigma', v) + (u, v) = (f, v) with int_K sigma' = sigma_1 - sigma_0
    A.add(uu, s0, -1.0);
    A.add(uu, s1, 1.0);
    A.add(uu, uu, h);
    double load[2];
    element_load(p.f, xl, xr, load);
    rhs[uu] += load[0] + load[1]; // (f, 1)_K
  }

  std::vector<double> sol = solve(A, rhs, {});

  FEFunction sigma;
  sigma.space = SpaceKind1D::P1Continuous;
  sigma.mesh = mesh;
  sigma.coefficients.assign(sol.begin(), sol.begin() + nn);
  FEFunction u;
  u.space = SpaceKind1D::P0;
  u.mesh = mesh;
  u.coefficients.assign(sol.begin() + nn, sol.end());
  return {sigma, u};
}

//------------------------------------------------------------------------------
// robust estimator
//------------------------------------------------------------------------------

IndicatorField estimate_robust(const FEFunction& u_h, const ReactionDiffusionProblem& p) {
  if (u_h.space != SpaceKind1D::P1ContinuousZeroBC &&
      u_h.space != SpaceKind1D::P1Continuous)
    throw std::invalid_argument("estimate_robust: expects a continuous P1 solution");
  const Mesh1D& mesh = u_h.mesh;
  const int ne = mesh.n_elements();
  const double sqrt_eps = std::sqrt(p.epsilon);
  static const QuadratureRule quad = gauss_interval(9);

  IndicatorField eta(ne, 0.0);
  for (int e = 0; e < ne; ++e) {
    const auto [xl, xr] = mesh.element(e);
    const double h = xr - xl;

    // element residual ||f - u_h||_K (the eps u_h'' term vanishes for P1)
    std::vector<double> cuts = {xl};
    for (double b : p.f.breakpoints)
      if (b > xl && b < xr) cuts.push_back(b);
    cuts.push_back(xr);
    double res2 = 0.0;
    for (size_t q = 0; q + 1 < cuts.size(); ++q) {
      const double a = cuts[q], bb = cuts[q + 1];
      for (size_t k = 0; k < quad.points.size(); ++k) {
        const double x = a + (bb - a) * quad.points[k].x;
        const double w = (bb - a) * quad.weights[k];
        const double d = p.f(x) - u_h.eval_on_element(e, (x - xl) / h);
        res2 += w * d * d;
      }
    }
    const double alpha_k = std::min(h / sqrt_eps, 1.0);
    eta[e] = alpha_k * std::sqrt(res2);

    // flux jumps at the element's interior endpoints
    for (int side = 0; side < 2; ++side) {
      const int node = e + side;
      if (node == 0 || node == mesh.n_nodes() - 1) continue;
      const double h_avg = 0.5 * (mesh.length(node - 1) + mesh.length(node));
      const double alpha_x = std::min(h_avg / sqrt_eps, 1.0);
      const double jump =
          p.epsilon * (u_h.slope_on_element(node - 1) - u_h.slope_on_element(node));
      eta[e] += 0.5 * std::sqrt(alpha_x / sqrt_eps) * std::abs(jump);
    }
  }
  return eta;
}

//------------------------------------------------------------------------------
// standard cases
//------------------------------------------------------------------------------

std::string rd_case_name(RdCase c) {
  switch (c) {
    case RdCase::Matched: return "matched";
    case RdCase::NonMatched: return "nonmatched";
    case RdCase::Coarsen: return "coarsen";
    case RdCase::F2: return "f2";
  }
  throw std::logic_error("rd_case_name: bad case");
}

std::optional<RdCase> parse_rd_case(const std::string& name) {
  if (name == "matched") return RdCase::Matched;
  if (name == "nonmatched") return RdCase::NonMatched;
  if (name == "coarsen") return RdCase::Coarsen;
  if (name == "f2") return RdCase::F2;
  return std::nullopt;
}

ReactionDiffusionProblem rd_problem(RdCase c, double epsilon) {
  ReactionDiffusionProblem p;
  p.epsilon = epsilon;
  if (c == RdCase::F2) {
    p.f.value = [](double x) { return x < 0.5 ? x * x : x * x - 1.0; };
    p.f.breakpoints = {0.5};
    p.f_min = -0.75;
    p.f_max = 0.25;
  } else {
    p.f.value = [](double x) { return x < 0.5 ? 2.0 * x : 2.0 * x - 2.0; };
    p.f.breakpoints = {0.5};
    p.f_min = -1.0;
    p.f_max = 1.0;
  }
  return p;
}

Mesh1D rd_initial_mesh(RdCase c) {
  switch (c) {
    case RdCase::Matched:
      return Mesh1D::from_nodes({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
    case RdCase::NonMatched:
      return Mesh1D::from_nodes({0.0, 1.0 / 3.0, 5.0 / 6.0, 1.0});
    case RdCase::Coarsen:
    case RdCase::F2:
      return Mesh1D::uniform(0.0, 1.0, 17);
  }
  throw std::logic_error("rd_initial_mesh: bad case");
}

MarkParams rd_default_marking(RdCase c) {
  MarkParams p;
  if (c == RdCase::Coarsen || c == RdCase::F2) {
    p.strategy = MarkStrategy::RefineCoarsen;
    p.theta_refine = 0.6;
    p.theta_coarsen = 0.3;
  } else {
    p.strategy = MarkStrategy::Maximum;
    p.theta = 0.8;
  }
  return p;
}

RdRunResult run_rd_case(RdCase c, double epsilon, const MarkParams& marking, int max_iter,
                        double mu) {
  const ReactionDiffusionProblem p = rd_problem(c, epsilon);
  RdRunResult result;

  SolveEstimate1D cb = [&](const Mesh1D& mesh, double* os, int* dofs) {
    FEFunction uc = solve_p1_conforming(p, mesh);
    IndicatorField eta = estimate_robust(uc, p);
    if (os == nullptr && dofs == nullptr)
      return eta; // estimate-only pass used for coarsening decisions

    FEFunction ud = solve_p1_dg(p, mesh, DgPenalty{mu});
    auto [sigma, um] = solve_p0_mixed(p, mesh);
    (void)sigma;

    RdIterationRecord rec;
    rec.iter = static_cast<int>(result.iterations.size());
    rec.dofs = uc.n_dofs();
    double tot2 = 0.0;
    for (double v : eta) tot2 += v * v;
    rec.eta_total = std::sqrt(tot2);
    double hmin = mesh.length(0);
    for (int e = 1; e < mesh.n_elements(); ++e) hmin = std::min(hmin, mesh.length(e));
    rec.h_min = hmin;
    rec.os_conforming = overshoot_of(uc, p.f_min, p.f_max);
    rec.os_dg = overshoot_of(ud, p.f_min, p.f_max);
    rec.os_mixed_u = overshoot_of(um, p.f_min, p.f_max);
    rec.min_dg = *std::min_element(ud.coefficients.begin(), ud.coefficients.end());
    rec.min_conforming = *std::min_element(uc.coefficients.begin(), uc.coefficients.end());
    rec.max_conforming = *std::max_element(uc.coefficients.begin(), uc.coefficients.end());
    result.iterations.push_back(rec);

    *os = rec.os_conforming;
    *dofs = rec.dofs;
    return eta;
  };

  AdaptiveRun1D run = run_adaptive(rd_initial_mesh(c), cb, marking, max_iter);
  result.meshes = std::move(run.meshes);
  return result;
}

} // namespace ofem
