#pragma once

#include <ofem/adapt.hpp>
#include <ofem/mesh2d.hpp>
#include <ofem/sparse.hpp>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ofem {

// upwind DG discretization of div(beta u) + gamma u = f with u = g on the
// inflow boundary, on P0 or P1 (elementwise, no continuity) triangle spaces

struct AmbiguousUpwind : std::runtime_error {
  explicit AmbiguousUpwind(const std::string& what) : std::runtime_error(what) {}
};

using ScalarField2D = std::function<double(double, double)>;
using VectorField2D = std::function<Vec2(double, double)>;

struct TransportProblem {
  VectorField2D beta;
  ScalarField2D gamma;    // null means 0
  ScalarField2D f;        // null means 0
  ScalarField2D g;        // inflow data, sampled where beta points inward
  ScalarField2D div_beta; // null means divergence-free (true for all benchmarks)
  double exact_min = 0.0; // reference band for overshoot measurement
  double exact_max = 1.0;
  ScalarField2D exact;    // optional closed-form solution
};

// elementwise polynomial function: k=0 stores one cell value per triangle,
// k=1 stores the three vertex values (triangle t owns coefficients
// [3t, 3t+2] in vertex order)
struct DgFunction2D {
  int k = 1;
  TriMesh2D mesh;
  std::vector<double> coefficients;

  int n_dofs() const { return static_cast<int>(coefficients.size()); }
  // evaluation by reference coordinates: value at barycentric
  // (1-r-s, r, s) over the triangle's vertex triple
  double eval_ref(int t, double r, double s) const;
  double vertex_value(int t, int local) const; // k=1 only
};

int transport_dof_count(const TriMesh2D& mesh, int k);

// matrix rows are test DOFs; face integrals split where beta.n crosses zero
// so each piece has one upwind side.  Throws AmbiguousUpwind when beta.n
// flips sign more than once along a single face (unresolved swirl)
void assemble_transport(const TransportProblem& p, const TriMesh2D& mesh, int k,
                        SparseMatrix& A, std::vector<double>& rhs);

DgFunction2D solve_transport(const TransportProblem& p, const TriMesh2D& mesh, int k);

// eta_K = h_K^{1/2} ||f - div(beta u_h) - gamma u_h||_K
//       + 1/2 sum over interior faces of K  || |beta.n|^{1/2} [u_h] ||_F
//       + sum over inflow faces of K        || |beta.n|^{1/2} (g - u_h) ||_F
IndicatorField estimate_transport(const DgFunction2D& u_h, const TransportProblem& p,
                                  const TriMesh2D& mesh);

// max excess of the DOF sample values (cell values for k=0, all vertex values
// for k=1) outside [exact_min, exact_max]
double overshoot_2d(const DgFunction2D& u_h, double exact_min, double exact_max);

//------------------------------------------------------------------------------
// benchmark problems
//------------------------------------------------------------------------------

enum class BenchmarkCase {
  StripPi3, // vertical transport of a 0/1 step at x = pi/3 on (0,2)x(0,1)
  HalfDisk, // circular transport of a radial 1/0 step at radius 1/2
  Curved2,  // curved flow on the unit square with an unresolved inner layer
};

std::string benchmark_case_name(BenchmarkCase c);
std::optional<BenchmarkCase> parse_benchmark_case(const std::string& name);

TransportProblem benchmark_problem(BenchmarkCase c);
TriMesh2D benchmark_mesh(BenchmarkCase c);

struct Benchmark2DResult {
  std::vector<AdaptRecord> records;
  std::vector<TriMesh2D> meshes; // records[i].mesh_ref indexes here
  DgFunction2D final_solution;
};

// adaptive loop with maximum marking; stops at iters, at the DOF cap, or when
// nothing is marked
Benchmark2DResult run_benchmark(BenchmarkCase c, int k, int iters, double theta = 0.8,
                                int dof_cap = 50000);

// (abscissa, value) scatter samples of the solution: abscissa is x for the
// strip and the distance from the flow center for the curved cases
std::vector<std::pair<double, double>> projected_samples(const DgFunction2D& u_h,
                                                         BenchmarkCase c);

} // namespace ofem
