#pragma once

#include <ofem/mesh1d.hpp>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ofem {

// approximation spaces on a 1D mesh and L2 projections of piecewise-smooth
// data onto them.  Closed-form coefficient families for the element cut by a
// jump are provided next to a fully numeric projector so each can check the
// other.

enum class SpaceKind1D {
  P0,                  // one cell value per element
  P1Discontinuous,     // two endpoint values per element
  P1Continuous,        // one value per node
  P1ContinuousZeroBC,  // one value per interior node, zero at the ends
};

int dof_count(SpaceKind1D space, const Mesh1D& mesh);
std::string space_name(SpaceKind1D space);

// piecewise-smooth scalar function; integration routines split every element
// at the listed breakpoints so quadrature only ever sees a smooth piece
struct PiecewiseFunction {
  std::function<double(double)> value;
  std::vector<double> breakpoints; // strictly inside the domain, ascending

  double operator()(double x) const { return value(x); }
};

// step data: left_value for x < jump_location, right_value beyond it
struct StepFunction {
  double jump_location = 0.0;
  double left_value = -1.0;
  double right_value = 1.0;
};

PiecewiseFunction as_piecewise(const StepFunction& u);

// the element the jump passes through: relative position t in [0,1] and
// element length h, i.e. the interval (-t*h, (1-t)*h) around the jump
struct CutInterval {
  double t = 0.0;
  double h = 1.0;
};

// coefficients on and next to the cut element, indexed by nodal offset from
// the jump; slots that a space does not populate stay empty (P0 reports its
// single cell value in both near slots)
struct ProjectionResult {
  std::optional<double> U_minus2;
  std::optional<double> U_minus1;
  std::optional<double> U_plus1;
  std::optional<double> U_plus2;
  double overshoot = 0.0;
  double l2_error_on_cut = 0.0;
};

//------------------------------------------------------------------------------
// finite element functions
//------------------------------------------------------------------------------

struct FEFunction {
  SpaceKind1D space = SpaceKind1D::P0;
  Mesh1D mesh;
  std::vector<double> coefficients; // space-DOF order

  int n_dofs() const { return static_cast<int>(coefficients.size()); }

  // value at local coordinate s in [0,1] on element e
  double eval_on_element(int e, double s) const;

  // point evaluation; x clamped to the domain, interior nodes resolve to the
  // right element (so discontinuous spaces report the right-hand trace)
  double eval(double x) const;

  // du/dx on element e (0 for P0)
  double slope_on_element(int e) const;

  // values at the DOF sample points: cell values (P0), element endpoint
  // values (P1Discontinuous), nodal values (continuous spaces)
  const std::vector<double>& dof_values() const { return coefficients; }

  // nodal value helper for continuous spaces (handles the pinned zeros)
  double node_value(int node) const;
};

//------------------------------------------------------------------------------
// numeric projector
//------------------------------------------------------------------------------

// L2 projection by assembling the mass system exactly; elements are split at
// u.breakpoints so the right-hand side quadrature is exact for polynomial
// pieces up to degree 9
FEFunction numeric_l2_project(const PiecewiseFunction& u, const Mesh1D& mesh,
                              SpaceKind1D space);
FEFunction numeric_l2_project(const StepFunction& u, const Mesh1D& mesh,
                              SpaceKind1D space);

// same projector with selected DOFs held at fixed values (eliminated from the
// system); used to reproduce the local window derivations where far-field
// values are pinned to the exact states
FEFunction numeric_l2_project_pinned(const PiecewiseFunction& u, const Mesh1D& mesh,
                                     SpaceKind1D space,
                                     const std::vector<std::pair<int, double>>& pinned);

//------------------------------------------------------------------------------
// closed-form families on the cut element
//------------------------------------------------------------------------------

// P0: single cell value 1-2t, never overshoots; worst-case error at t=1/2
ProjectionResult closed_p0(const CutInterval& cut);

// discontinuous P1 on the cut element alone
ProjectionResult closed_p1disc(const CutInterval& cut);

// continuous P1 on a six-node window around the cut element, all elements of
// size h, end values pinned to -1 and +1
ProjectionResult closed_s1_uniform(const CutInterval& cut);

// continuous P1 on a six-node window whose outer elements have size 2h
ProjectionResult closed_s1_graded(const CutInterval& cut);

// matched-jump local model on (0, 2h): value pinned to 0 at the jump node and
// to 1+delta two nodes out; returns the intermediate nodal value 1.25-delta/4
double closed_s1_matched_local(double delta);

// coarsened local model with adjacent elements of size h and c*h; returns the
// nodal value 1 + (1-c*delta)/(2*(1+c))
double closed_s1_coarsened(double c, double delta);

// meshes realizing the window derivations (jump at x=0)
Mesh1D s1_uniform_window(const CutInterval& cut);
Mesh1D s1_graded_window(const CutInterval& cut);

//------------------------------------------------------------------------------
// measurement
//------------------------------------------------------------------------------

// max excess of any DOF sample value above exact_max or below exact_min
double overshoot_of(const FEFunction& fe, double exact_min, double exact_max);

// per-element L2 errors ||u - fe||_{0,K}; elements split at u.breakpoints
std::vector<double> elementwise_l2_error(const FEFunction& fe, const PiecewiseFunction& u);

// single-element restriction of the above
double l2_error_on(const FEFunction& fe, const PiecewiseFunction& u, int element);

} // namespace ofem
