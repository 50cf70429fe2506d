#pragma once

#include <ofem/mesh1d.hpp>

#include <functional>
#include <utility>
#include <vector>

namespace ofem {

// marking strategies shared by the 1D and 2D adaptive loops, plus the generic
// solve -> estimate -> mark -> refine/coarsen driver for interval meshes

using IndicatorField = std::vector<double>; // one nonnegative entry per element

enum class MarkStrategy { Maximum, RefineCoarsen };

struct MarkParams {
  MarkStrategy strategy = MarkStrategy::Maximum;
  double theta = 0.8;          // maximum strategy threshold
  double theta_refine = 0.6;   // refine-coarsen upper fraction
  double theta_coarsen = 0.3;  // refine-coarsen lower fraction
};

// { K : eta_K > theta * max eta }, strict inequality; empty when max eta = 0
std::vector<int> mark_maximum(const IndicatorField& eta, double theta);

// refine = { eta_K > theta_refine * max }, coarsen = { eta_K < theta_coarsen * max };
// disjoint by construction, both empty when max eta = 0
std::pair<std::vector<int>, std::vector<int>> mark_refine_coarsen(const IndicatorField& eta,
                                                                  const MarkParams& p);

// one row per adaptive iteration; mesh_ref indexes the run's mesh store
struct AdaptRecord {
  int iter = 0;
  int dofs = 0;
  double eta_total = 0.0; // sqrt of the sum of squared element indicators
  double overshoot = 0.0;
  int mesh_ref = -1;
};

struct AdaptiveRun1D {
  std::vector<AdaptRecord> records;
  std::vector<Mesh1D> meshes;
};

// callback computes the per-element indicator on the given mesh and reports
// the solution's overshoot and DOF count through the out-parameters
using SolveEstimate1D =
    std::function<IndicatorField(const Mesh1D&, double* overshoot, int* dofs)>;

// drives at most max_iter refine/coarsen steps and stops early when nothing
// is marked; every recorded iteration carries a mesh snapshot.  Refinement is
// midpoint bisection.  Coarsening merges whole runs of adjacent marked
// elements (the merged element need not exist in the refinement history) and
// is decided from indicators re-evaluated on the refined mesh, so a fresh
// sibling in a smooth region can be absorbed immediately; the one exclusion
// is a merge that would exactly undo one of this iteration's bisections.
AdaptiveRun1D run_adaptive(const Mesh1D& initial, const SolveEstimate1D& solve_estimate,
                           const MarkParams& p, int max_iter);

} // namespace ofem
