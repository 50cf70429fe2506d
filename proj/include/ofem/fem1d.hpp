#pragma once

#include <ofem/adapt.hpp>
#include <ofem/stepproj.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ofem {

// -eps u'' + u = f on (0,1) with u(0) = u(1) = 0, eps small enough that the
// interior layer is unresolved and the discrete solution behaves like an L2
// projection of f

struct ReactionDiffusionProblem {
  double epsilon = 1e-16;
  PiecewiseFunction f;   // splitting points of f are honored in all quadrature
  double f_min = -1.0;   // range of f, used as the overshoot reference band
  double f_max = 1.0;
};

struct DgPenalty {
  double mu = 10.0;
};

// continuous P1 with zero boundary values: eps (u',v') + (u,v) = (f,v)
FEFunction solve_p1_conforming(const ReactionDiffusionProblem& p, const Mesh1D& mesh);

// discontinuous P1 with interior-node consistency/penalty terms
//   sum_K eps (w',v')_K + (w,v)
//   - sum_i ( {eps w'} [v] + {eps v'} [w] )(x_i)
//   + sum_i eps*mu/(h_i + h_{i-1}) [w][v](x_i)
// jumps taken left minus right; no boundary-node terms
FEFunction solve_p1_dg(const ReactionDiffusionProblem& p, const Mesh1D& mesh,
                       const DgPenalty& pen = {});

// first-order system with flux sigma = -eps u' in continuous P1 and u in P0:
//   (sigma, tau) - eps (tau', u) = 0          for all tau
//   (sigma', v) + (u, v) = (f, v)             for all v
// returned as (sigma, u); the first block is the eps-scaled flux equation so
// all matrix entries stay O(1)
std::pair<FEFunction, FEFunction> solve_p0_mixed(const ReactionDiffusionProblem& p,
                                                 const Mesh1D& mesh);

// residual estimator for the conforming solution, robust in eps:
//   eta_K = alpha_K ||f - u_h + eps u_h''||_K
//         + 1/2 sum_{interior endpoints x} sqrt(alpha_x / sqrt(eps)) |[eps u_h'](x)|
// with alpha_K = min(h_K / sqrt(eps), 1) and alpha_x built from the average of
// the two adjacent element lengths (u_h'' = 0 elementwise for P1)
IndicatorField estimate_robust(const FEFunction& u_h, const ReactionDiffusionProblem& p);

//------------------------------------------------------------------------------
// standard experiment cases
//------------------------------------------------------------------------------

enum class RdCase { Matched, NonMatched, Coarsen, F2 };

std::string rd_case_name(RdCase c);
std::optional<RdCase> parse_rd_case(const std::string& name);

// data: sawtooth 2x / 2x-2 with a jump at 1/2 (range [-1,1]); the F2 case
// uses x^2 / x^2-1 instead (range [-3/4,1/4])
ReactionDiffusionProblem rd_problem(RdCase c, double epsilon);
Mesh1D rd_initial_mesh(RdCase c);
MarkParams rd_default_marking(RdCase c);

// measurements taken on every adaptive iteration (all three methods are
// solved on the same conforming-driven mesh)
struct RdIterationRecord {
  int iter = 0;
  int dofs = 0;          // conforming unknowns
  double eta_total = 0.0;
  double h_min = 0.0;    // smallest element in the mesh
  double os_conforming = 0.0;
  double os_dg = 0.0;
  double os_mixed_u = 0.0;
  double min_dg = 0.0;   // smallest DG DOF value
  double min_conforming = 0.0; // nodal extremes of the conforming solution
  double max_conforming = 0.0;
};

struct RdRunResult {
  std::vector<RdIterationRecord> iterations;
  std::vector<Mesh1D> meshes; // iterations[i] was computed on meshes[i]
};

RdRunResult run_rd_case(RdCase c, double epsilon, const MarkParams& marking, int max_iter,
                        double mu = 10.0);

} // namespace ofem
