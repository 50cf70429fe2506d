#include <ofem/transport2d.hpp>

#include <ofem/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofem {

namespace {

constexpr double kPi = 3.14159265358979323846;

double field_or_zero(const ScalarField2D& f, double x, double y) {
  return f ? f(x, y) : 0.0;
}

struct TriFrame {
  Vec2 p0, p1, p2;
  double det = 0.0; // twice the signed area
  // barycentric coordinates (r, s) of a physical point, so the point equals
  // p0 + r (p1 - p0) + s (p2 - p0)
  void barycentric(const Vec2& p, double& r, double& s) const {
    const double ax = p.x - p0.x, ay = p.y - p0.y;
    const double bx = p1.x - p0.x, by = p1.y - p0.y;
    const double cx = p2.x - p0.x, cy = p2.y - p0.y;
    r = (ax * cy - ay * cx) / det;
    s = (bx * ay - by * ax) / det;
  }
};

TriFrame frame_of(const TriMesh2D& mesh, int t) {
  TriFrame fr;
  fr.p0 = mesh.vertices[mesh.triangles[t].v[0]];
  fr.p1 = mesh.vertices[mesh.triangles[t].v[1]];
  fr.p2 = mesh.vertices[mesh.triangles[t].v[2]];
  fr.det = (fr.p1.x - fr.p0.x) * (fr.p2.y - fr.p0.y) -
           (fr.p1.y - fr.p0.y) * (fr.p2.x - fr.p0.x);
  return fr;
}

int local_dof_count(int k) { return k == 0 ? 1 : 3; }

void basis_at(int k, double r, double s, double phi[3]) {
  if (k == 0) {
    phi[0] = 1.0;
    return;
  }
  phi[0] = 1.0 - r - s;
  phi[1] = r;
  phi[2] = s;
}

// physical gradients of the k=1 basis (constant per triangle)
void basis_gradients(const TriFrame& fr, Vec2 grad[3]) {
  grad[0] = {(fr.p1.y - fr.p2.y) / fr.det, (fr.p2.x - fr.p1.x) / fr.det};
  grad[1] = {(fr.p2.y - fr.p0.y) / fr.det, (fr.p0.x - fr.p2.x) / fr.det};
  grad[2] = {(fr.p0.y - fr.p1.y) / fr.det, (fr.p1.x - fr.p0.x) / fr.det};
}

// beta.n along the face a->b, sampled to locate sign flips; returns the flip
// parameters strictly inside (0,1).  More than one flip means the flow swirls
// within a single face and the discretization cannot pick an upwind side.
std::vector<double> face_flips(const VectorField2D& beta, const Vec2& pa, const Vec2& pb,
                               const Vec2& n) {
  constexpr int ns = 17;
  double s[ns];
  double scale = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double sigma = static_cast<double>(i) / (ns - 1);
    const Vec2 b = beta(pa.x + sigma * (pb.x - pa.x), pa.y + sigma * (pb.y - pa.y));
    s[i] = b.x * n.x + b.y * n.y;
    scale = std::max(scale, std::abs(s[i]));
  }
  const double tol = 1e-13 * std::max(1.0, scale);

  std::vector<std::pair<int, int>> brackets;
  int last_sign = 0, last_idx = -1;
  for (int i = 0; i < ns; ++i) {
    const int sg = s[i] > tol ? 1 : (s[i] < -tol ? -1 : 0);
    if (sg == 0) continue;
    if (last_sign != 0 && sg != last_sign) brackets.emplace_back(last_idx, i);
    last_sign = sg;
    last_idx = i;
  }
  if (brackets.size() > 1)
    throw AmbiguousUpwind("face normal velocity flips sign more than once");
  std::vector<double> flips;
  if (brackets.empty()) return flips;

  double lo = static_cast<double>(brackets[0].first) / (ns - 1);
  double hi = static_cast<double>(brackets[0].second) / (ns - 1);
  double slo = s[brackets[0].first];
  for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Vec2 b = beta(pa.x + mid * (pb.x - pa.x), pa.y + mid * (pb.y - pa.y));
    const double sm = b.x * n.x + b.y * n.y;
    if ((sm > 0.0) == (slo > 0.0)) {
      lo = mid;
      slo = sm;
    } else {
      hi = mid;
    }
  }
  flips.push_back(0.5 * (lo + hi));
  return flips;
}

} // namespace

//------------------------------------------------------------------------------
// DG functions
//------------------------------------------------------------------------------

int transport_dof_count(const TriMesh2D& mesh, int k) {
  if (k != 0 && k != 1) throw std::invalid_argument("transport_dof_count: k must be 0 or 1");
  return mesh.n_triangles() * local_dof_count(k);
}

double DgFunction2D::eval_ref(int t, double r, double s) const {
  if (k == 0) return coefficients.at(t);
  return coefficients.at(3 * t) * (1.0 - r - s) + coefficients.at(3 * t + 1) * r +
         coefficients.at(3 * t + 2) * s;
}

double DgFunction2D::vertex_value(int t, int local) const {
  if (k != 1) throw std::logic_error("vertex_value: only the P1 layout has vertex values");
  return coefficients.at(3 * t + local);
}

//------------------------------------------------------------------------------
// assembly
//------------------------------------------------------------------------------

void assemble_transport(const TransportProblem& p, const TriMesh2D& mesh, int k,
                        SparseMatrix& A, std::vector<double>& rhs) {
  if (!p.beta) throw std::invalid_argument("assemble_transport: beta is required");
  const int n = transport_dof_count(mesh, k);
  const int nb = local_dof_count(k);
  A = SparseMatrix(n, n);
  rhs.assign(n, 0.0);

  // volume terms: (w, -beta.grad v)_K + (gamma w, v)_K and (f, v)_K
  const QuadratureRule vol = triangle_rule(5);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriFrame fr = frame_of(mesh, t);
    Vec2 grad[3];
    if (k == 1) basis_gradients(fr, grad);
    double phi[3];
    for (size_t q = 0; q < vol.points.size(); ++q) {
      const double r = vol.points[q].x, s = vol.points[q].y;
      const double w = vol.weights[q] * fr.det; // det = 2*area
      const Vec2 xy{fr.p0.x + r * (fr.p1.x - fr.p0.x) + s * (fr.p2.x - fr.p0.x),
                    fr.p0.y + r * (fr.p1.y - fr.p0.y) + s * (fr.p2.y - fr.p0.y)};
      basis_at(k, r, s, phi);
      const double gam = field_or_zero(p.gamma, xy.x, xy.y);
      const double fv = field_or_zero(p.f, xy.x, xy.y);
      const Vec2 b = p.beta(xy.x, xy.y);
      for (int i = 0; i < nb; ++i) { // test
        const int row = nb * t + i;
        rhs[row] += w * fv * phi[i];
        const double conv_i = (k == 1) ? b.x * grad[i].x + b.y * grad[i].y : 0.0;
        for (int j = 0; j < nb; ++j) { // trial
          const double val = w * phi[j] * (-conv_i + gam * phi[i]);
          if (val != 0.0) A.add(row, nb * t + j, val);
        }
      }
    }
  }

  // face terms with one upwind side per sign-definite piece
  const QuadratureRule seg = gauss_interval(3);
  const auto edges = collect_edges(mesh);
  for (const EdgeInfo& edge : edges) {
    const Vec2 pa = mesh.vertices[edge.a];
    const Vec2 pb = mesh.vertices[edge.b];
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    const Vec2 nrm{(pb.y - pa.y) / len, -(pb.x - pa.x) / len}; // left -> right

    std::vector<double> pieces = {0.0};
    for (double flip : face_flips(p.beta, pa, pb, nrm)) pieces.push_back(flip);
    pieces.push_back(1.0);

    const TriFrame frL = frame_of(mesh, edge.tri_left);
    const TriFrame frR = edge.tri_right >= 0 ? frame_of(mesh, edge.tri_right) : TriFrame{};

    for (size_t pc = 0; pc + 1 < pieces.size(); ++pc) {
      const double s0 = pieces[pc], s1 = pieces[pc + 1];
      const double smid_sigma = 0.5 * (s0 + s1);
      const Vec2 pmid{pa.x + smid_sigma * (pb.x - pa.x), pa.y + smid_sigma * (pb.y - pa.y)};
      const Vec2 bmid = p.beta(pmid.x, pmid.y);
      const double smid = bmid.x * nrm.x + bmid.y * nrm.y;

      for (size_t q = 0; q < seg.points.size(); ++q) {
        const double sigma = s0 + (s1 - s0) * seg.points[q].x;
        const double w = (s1 - s0) * seg.weights[q] * len;
        const Vec2 xy{pa.x + sigma * (pb.x - pa.x), pa.y + sigma * (pb.y - pa.y)};
        const Vec2 b = p.beta(xy.x, xy.y);
        const double sn = b.x * nrm.x + b.y * nrm.y;

        double phiL[3] = {0, 0, 0}, phiR[3] = {0, 0, 0};
        {
          double r, s;
          frL.barycentric(xy, r, s);
          basis_at(k, r, s, phiL);
        }
        if (edge.tri_right >= 0) {
          double r, s;
          frR.barycentric(xy, r, s);
          basis_at(k, r, s, phiR);
        }

        if (edge.tri_right >= 0) {
          // interior: (beta.n w_up, v_L - v_R)
          const bool up_left = smid >= 0.0;
          const int up_tri = up_left ? edge.tri_left : edge.tri_right;
          const double* up_phi = up_left ? phiL : phiR;
          for (int j = 0; j < nb; ++j) {
            const int col = nb * up_tri + j;
            const double wj = w * sn * up_phi[j];
            if (wj == 0.0) continue;
            for (int i = 0; i < nb; ++i) {
              if (phiL[i] != 0.0) A.add(nb * edge.tri_left + i, col, wj * phiL[i]);
              if (phiR[i] != 0.0) A.add(nb * edge.tri_right + i, col, -wj * phiR[i]);
            }
          }
        } else if (edge.tag == BoundaryTag::Inflow && smid < 0.0) {
          // inflow: data side carries -(beta.n g, v)
          const double gv = p.g ? p.g(xy.x, xy.y) : 0.0;
          for (int i = 0; i < nb; ++i)
            rhs[nb * edge.tri_left + i] -= w * sn * gv * phiL[i];
        } else if (smid > 0.0) {
          // outflow (and the outgoing part of characteristic faces):
          // (beta.n w, v) with the inside trace
          for (int j = 0; j < nb; ++j) {
            const double wj = w * sn * phiL[j];
            if (wj == 0.0) continue;
            for (int i = 0; i < nb; ++i)
              if (phiL[i] != 0.0)
                A.add(nb * edge.tri_left + i, nb * edge.tri_left + j, wj * phiL[i]);
          }
        }
        // remaining case: an inward sliver on a non-inflow boundary face has
        // no data to draw from; the exact normal velocity there is zero and
        // the term is dropped
      }
    }
  }
}

DgFunction2D solve_transport(const TransportProblem& p, const TriMesh2D& mesh, int k) {
  SparseMatrix A(1, 1);
  std::vector<double> rhs;
  assemble_transport(p, mesh, k, A, rhs);

  LinearSolveOptions opts;
  const int n = static_cast<int>(rhs.size());
  if (n < 5000) {
    opts.method = SolveMethod::DirectBanded;
  } else {
    opts.method = SolveMethod::Iterative;
    opts.tolerance = 1e-10;
    opts.max_iterations = 20000;
    opts.block_size = local_dof_count(k);
  }

  DgFunction2D u;
  u.k = k;
  u.mesh = mesh;
  u.coefficients = solve(A, rhs, opts);
  return u;
}

//------------------------------------------------------------------------------
// estimator
//------------------------------------------------------------------------------

IndicatorField estimate_transport(const DgFunction2D& u_h, const TransportProblem& p,
                                  const TriMesh2D& mesh) {
  const int k = u_h.k;
  IndicatorField eta(mesh.n_triangles(), 0.0);

  // element residual f - div(beta u_h) - gamma u_h, with div(beta u_h)
  // expanded as beta.grad u_h + (div beta) u_h
  const QuadratureRule vol = triangle_rule(5);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriFrame fr = frame_of(mesh, t);
    Vec2 grad[3];
    Vec2 gu{0.0, 0.0};
    if (k == 1) {
      basis_gradients(fr, grad);
      for (int i = 0; i < 3; ++i) {
        gu.x += u_h.coefficients[3 * t + i] * grad[i].x;
        gu.y += u_h.coefficients[3 * t + i] * grad[i].y;
      }
    }
    double acc = 0.0;
    for (size_t q = 0; q < vol.points.size(); ++q) {
      const double r = vol.points[q].x, s = vol.points[q].y;
      const double w = vol.weights[q] * fr.det;
      const Vec2 xy{fr.p0.x + r * (fr.p1.x - fr.p0.x) + s * (fr.p2.x - fr.p0.x),
                    fr.p0.y + r * (fr.p1.y - fr.p0.y) + s * (fr.p2.y - fr.p0.y)};
      const Vec2 b = p.beta(xy.x, xy.y);
      const double uv = u_h.eval_ref(t, r, s);
      const double res = field_or_zero(p.f, xy.x, xy.y) - (b.x * gu.x + b.y * gu.y) -
                         field_or_zero(p.div_beta, xy.x, xy.y) * uv -
                         field_or_zero(p.gamma, xy.x, xy.y) * uv;
      acc += w * res * res;
    }
    eta[t] = std::sqrt(mesh.diameter(t)) * std::sqrt(acc);
  }

  // face terms: half of the jump norm to each neighbor, the full data
  // mismatch norm to inflow-face owners
  const QuadratureRule seg = gauss_interval(5);
  const auto edges = collect_edges(mesh);
  for (const EdgeInfo& edge : edges) {
    const Vec2 pa = mesh.vertices[edge.a];
    const Vec2 pb = mesh.vertices[edge.b];
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    const Vec2 nrm{(pb.y - pa.y) / len, -(pb.x - pa.x) / len};
    if (edge.boundary && edge.tag != BoundaryTag::Inflow) continue;

    const TriFrame frL = frame_of(mesh, edge.tri_left);
    const TriFrame frR = edge.tri_right >= 0 ? frame_of(mesh, edge.tri_right) : TriFrame{};
    double acc = 0.0;
    for (size_t q = 0; q < seg.points.size(); ++q) {
      const double sigma = seg.points[q].x;
      const double w = seg.weights[q] * len;
      const Vec2 xy{pa.x + sigma * (pb.x - pa.x), pa.y + sigma * (pb.y - pa.y)};
      const Vec2 b = p.beta(xy.x, xy.y);
      const double sn = std::abs(b.x * nrm.x + b.y * nrm.y);
      double r, s;
      frL.barycentric(xy, r, s);
      const double uL = u_h.eval_ref(edge.tri_left, r, s);
      double diff;
      if (edge.tri_right >= 0) {
        frR.barycentric(xy, r, s);
        diff = uL - u_h.eval_ref(edge.tri_right, r, s);
      } else {
        diff = (p.g ? p.g(xy.x, xy.y) : 0.0) - uL;
      }
      acc += w * sn * diff * diff;
    }
    if (edge.tri_right >= 0) {
      eta[edge.tri_left] += 0.5 * std::sqrt(acc);
      eta[edge.tri_right] += 0.5 * std::sqrt(acc);
    } else {
      eta[edge.tri_left] += std::sqrt(acc);
    }
  }
  return eta;
}

double overshoot_2d(const DgFunction2D& u_h, double exact_min, double exact_max) {
  if (!(exact_min <= exact_max)) throw std::invalid_argument("overshoot_2d: bad bounds");
  double os = 0.0;
  for (double v : u_h.coefficients)
    os = std::max({os, v - exact_max, exact_min - v});
  return os;
}

//------------------------------------------------------------------------------
// benchmarks
//------------------------------------------------------------------------------

std::string benchmark_case_name(BenchmarkCase c) {
  switch (c) {
    case BenchmarkCase::StripPi3: return "strip_pi3";
    case BenchmarkCase::HalfDisk: return "half_disk";
    case BenchmarkCase::Curved2: return "curved2";
  }
  throw std::logic_error("benchmark_case_name: bad case");
}

std::optional<BenchmarkCase> parse_benchmark_case(const std::string& name) {
  if (name == "strip_pi3") return BenchmarkCase::StripPi3;
  if (name == "half_disk") return BenchmarkCase::HalfDisk;
  if (name == "curved2") return BenchmarkCase::Curved2;
  return std::nullopt;
}

TransportProblem benchmark_problem(BenchmarkCase c) {
  TransportProblem p;
  switch (c) {
    case BenchmarkCase::StripPi3: {
      p.beta = [](double, double) { return Vec2{0.0, 1.0}; };
      p.g = [](double x, double) { return x < kPi / 3.0 ? 0.0 : 1.0; };
      p.exact = [](double x, double) { return x < kPi / 3.0 ? 0.0 : 1.0; };
      p.exact_min = 0.0;
      p.exact_max = 1.0;
      return p;
    }
    case BenchmarkCase::HalfDisk: {
      p.beta = [](double x, double y) {
        const double r = std::hypot(x, y);
        if (r < 1e-300) return Vec2{0.0, 0.0};
        return Vec2{y / r, -x / r};
      };
      p.g = [](double x, double) { return x < -0.5 ? 1.0 : 0.0; };
      p.exact = [](double x, double y) { return x * x + y * y > 0.25 ? 1.0 : 0.0; };
      p.exact_min = 0.0;
      p.exact_max = 1.0;
      return p;
    }
    case BenchmarkCase::Curved2: {
      auto exact = [](double x, double y) {
        const double r = std::hypot(x, y + 1.0);
        const double arg = std::min(1.0, std::max(-1.0, (y + 1.0) / r));
        return 0.25 * std::exp(0.1 * r * std::asin(arg)) *
               std::atan((r - 1.5) / 1e-10);
      };
      p.beta = [](double x, double y) {
        const double r = std::hypot(x, y + 1.0);
        return Vec2{(y + 1.0) / r, -x / r};
      };
      p.gamma = [](double, double) { return 0.1; };
      p.g = exact;
      p.exact = exact;
      // analytic range of the exact solution over the closed square: the
      // negative branch peaks where r -> 1.5 with the flow angle -> pi/2, the
      // positive branch at the corner (0,1) where r*angle = pi
      p.exact_min = -(kPi / 8.0) * std::exp(0.075 * kPi);
      p.exact_max = (kPi / 8.0) * std::exp(0.1 * kPi);
      return p;
    }
  }
  throw std::logic_error("benchmark_problem: bad case");
}

TriMesh2D benchmark_mesh(BenchmarkCase c) {
  switch (c) {
    case BenchmarkCase::StripPi3: return initial_mesh(DomainCase::StripPi3);
    case BenchmarkCase::HalfDisk: return initial_mesh(DomainCase::HalfDisk);
    case BenchmarkCase::Curved2: return initial_mesh(DomainCase::UnitSquare);
  }
  throw std::logic_error("benchmark_mesh: bad case");
}

Benchmark2DResult run_benchmark(BenchmarkCase c, int k, int iters, double theta,
                                int dof_cap) {
  if (iters < 1) throw std::invalid_argument("run_benchmark: need iters >= 1");
  const TransportProblem p = benchmark_problem(c);
  Benchmark2DResult out;
  TriMesh2D mesh = benchmark_mesh(c);

  for (int it = 0;; ++it) {
    DgFunction2D u = solve_transport(p, mesh, k);
    IndicatorField eta = estimate_transport(u, p, mesh);

    AdaptRecord rec;
    rec.iter = it;
    rec.dofs = u.n_dofs();
    double tot2 = 0.0;
    for (double v : eta) tot2 += v * v;
    rec.eta_total = std::sqrt(tot2);
    rec.overshoot = overshoot_2d(u, p.exact_min, p.exact_max);
    rec.mesh_ref = static_cast<int>(out.meshes.size());
    out.records.push_back(rec);
    out.meshes.push_back(mesh);
    out.final_solution = std::move(u);

    if (it == iters) break;
    const std::vector<int> marked = mark_maximum(eta, theta);
    if (marked.empty()) break;
    TriMesh2D next = bisect2d(mesh, marked);
    if (transport_dof_count(next, k) > dof_cap) break;
    mesh = std::move(next);
  }
  return out;
}

std::vector<std::pair<double, double>> projected_samples(const DgFunction2D& u_h,
                                                         BenchmarkCase c) {
  auto abscissa = [c](const Vec2& p) {
    switch (c) {
      case BenchmarkCase::StripPi3: return p.x;
      case BenchmarkCase::HalfDisk: return std::hypot(p.x, p.y);
      case BenchmarkCase::Curved2: return std::hypot(p.x, p.y + 1.0);
    }
    return p.x;
  };
  std::vector<std::pair<double, double>> out;
  const TriMesh2D& mesh = u_h.mesh;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    if (u_h.k == 0) {
      out.emplace_back(abscissa(mesh.centroid(t)), u_h.coefficients[t]);
    } else {
      for (int i = 0; i < 3; ++i)
        out.emplace_back(abscissa(mesh.vertices[mesh.triangles[t].v[i]]),
                         u_h.vertex_value(t, i));
    }
  }
  return out;
}

} // namespace ofem
