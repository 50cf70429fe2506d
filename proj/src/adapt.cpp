#include <ofem/adapt.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofem {

//------------------------------------------------------------------------------
// marking
//------------------------------------------------------------------------------

namespace {

double max_indicator(const IndicatorField& eta) {
  double m = 0.0;
  for (double v : eta) {
    if (v < 0.0) throw std::invalid_argument("indicator entries must be nonnegative");
    m = std::max(m, v);
  }
  return m;
}

} // namespace

std::vector<int> mark_maximum(const IndicatorField& eta, double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("mark_maximum: need 0 < theta < 1");
  const double m = max_indicator(eta);
  std::vector<int> marked;
  if (m == 0.0) return marked; // converged state marks nothing
  for (size_t k = 0; k < eta.size(); ++k)
    if (eta[k] > theta * m) marked.push_back(static_cast<int>(k));
  return marked;
}

std::pair<std::vector<int>, std::vector<int>> mark_refine_coarsen(const IndicatorField& eta,
                                                                  const MarkParams& p) {
  if (!(p.theta_coarsen >= 0.0 && p.theta_coarsen < p.theta_refine && p.theta_refine <= 1.0))
    throw std::invalid_argument("mark_refine_coarsen: need 0 <= coarsen < refine <= 1");
  const double m = max_indicator(eta);
  std::vector<int> refine, coarsen;
  if (m == 0.0) return {refine, coarsen};
  for (size_t k = 0; k < eta.size(); ++k) {
    if (eta[k] > p.theta_refine * m)
      refine.push_back(static_cast<int>(k));
    else if (eta[k] < p.theta_coarsen * m)
      coarsen.push_back(static_cast<int>(k));
  }
  return {refine, coarsen};
}

//------------------------------------------------------------------------------
// driver
//------------------------------------------------------------------------------

AdaptiveRun1D run_adaptive(const Mesh1D& initial, const SolveEstimate1D& solve_estimate,
                           const MarkParams& p, int max_iter) {
  if (max_iter < 1) throw std::invalid_argument("run_adaptive: need max_iter >= 1");

  AdaptiveRun1D run;
  Mesh1D mesh = initial;

  for (int it = 0;; ++it) {
    double os = 0.0;
    int dofs = 0;
    IndicatorField eta = solve_estimate(mesh, &os, &dofs);
    if (static_cast<int>(eta.size()) != mesh.n_elements())
      throw std::logic_error("run_adaptive: indicator size mismatch");

    double total2 = 0.0;
    for (double v : eta) total2 += v * v;

    AdaptRecord rec;
    rec.iter = it;
    rec.dofs = dofs;
    rec.eta_total = std::sqrt(total2);
    rec.overshoot = os;
    rec.mesh_ref = static_cast<int>(run.meshes.size());
    run.records.push_back(rec);
    run.meshes.push_back(mesh);

    if (it == max_iter) break;

    if (p.strategy == MarkStrategy::Maximum) {
      const std::vector<int> refine = mark_maximum(eta, p.theta);
      if (refine.empty()) break;
      mesh = mesh.bisect(refine);
      continue;
    }

    auto [refine, coarsen] = mark_refine_coarsen(eta, p);
    if (refine.empty() && coarsen.empty()) break;

    // refine first, then decide coarsening from indicators on the refined
    // mesh: a fresh bisection sibling sitting in a smooth region may be
    // absorbed right away, which is what lets the mesh stay as small as the
    // equilibrium allows
    std::vector<int> old_to_new;
    std::vector<std::pair<int, int>> fresh_pairs;
    IndicatorField eta2 = eta;
    if (!refine.empty()) {
      mesh = mesh.bisect(refine, &old_to_new);
      for (int e : refine)
        fresh_pairs.emplace_back(old_to_new[e], old_to_new[e] + 1);
      eta2 = solve_estimate(mesh, nullptr, nullptr);
      if (static_cast<int>(eta2.size()) != mesh.n_elements())
        throw std::logic_error("run_adaptive: indicator size mismatch");
    }
    std::vector<int> coarsen2 = mark_refine_coarsen(eta2, p).second;

    // anti-livelock guard: a run consisting of exactly one just-created
    // sibling pair would undo the bisection we just performed
    std::vector<char> marked(mesh.n_elements(), 0);
    for (int e : coarsen2) marked.at(e) = 1;
    for (int e = 0; e < mesh.n_elements();) {
      if (!marked[e]) { ++e; continue; }
      int run_end = e;
      while (run_end + 1 < mesh.n_elements() && marked[run_end + 1]) ++run_end;
      if (run_end == e + 1) {
        for (const auto& [c0, c1] : fresh_pairs)
          if (c0 == e && c1 == run_end) { marked[e] = marked[run_end] = 0; break; }
      }
      e = run_end + 1;
    }
    std::vector<int> filtered;
    for (int e = 0; e < mesh.n_elements(); ++e)
      if (marked[e]) filtered.push_back(e);
    if (!filtered.empty()) mesh = mesh.merge_adjacent(filtered);
  }
  return run;
}

} // namespace ofem
