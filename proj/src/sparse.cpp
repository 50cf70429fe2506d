#include <ofem/sparse.hpp>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace ofem {

//------------------------------------------------------------------------------
// SparseMatrix
//------------------------------------------------------------------------------

void SparseMatrix::finalize() {
  if (finalized_) return;
  mat_.resize(rows_, cols_);
  mat_.setFromTriplets(triplets_.begin(), triplets_.end()); // sums duplicates
  mat_.makeCompressed();
  triplets_.clear();
  triplets_.shrink_to_fit();
  finalized_ = true;
}

double SparseMatrix::entry(int i, int j) const {
  if (!finalized_) throw std::logic_error("SparseMatrix::entry before finalize");
  return mat_.coeff(i, j);
}

bool SparseMatrix::is_symmetric(double rel_tol) const {
  if (!finalized_) throw std::logic_error("SparseMatrix::is_symmetric before finalize");
  if (rows_ != cols_) return false;
  const double scale = std::max(1e-300, mat_.coeffs().abs().maxCoeff());
  for (int i = 0; i < mat_.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(mat_, i); it; ++it) {
      if (std::abs(it.value() - mat_.coeff(it.col(), it.row())) > rel_tol * scale)
        return false;
    }
  }
  return true;
}

//------------------------------------------------------------------------------
// Direct solves
//------------------------------------------------------------------------------

namespace {

using RowMajorSp = Eigen::SparseMatrix<double, Eigen::RowMajor>;

Eigen::VectorXd to_eigen(const std::vector<double>& b) {
  return Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<long>(b.size()));
}

std::vector<double> from_eigen(const Eigen::VectorXd& x) {
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> solve_sparse_lu(const RowMajorSp& A, const Eigen::VectorXd& b) {
  Eigen::SparseMatrix<double> Ac = A; // SparseLU wants column-major
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success)
    throw SingularMatrix("sparse LU factorization failed (singular or structurally deficient)");
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SingularMatrix("sparse LU back-substitution failed");
  return from_eigen(x);
}

std::vector<double> solve_dense(const RowMajorSp& A, const Eigen::VectorXd& b) {
  Eigen::MatrixXd D = Eigen::MatrixXd(A);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
  const Eigen::MatrixXd& LU = lu.matrixLU();
  for (int i = 0; i < LU.rows(); ++i) {
    if (std::abs(LU(i, i)) < 1e-300)
      throw SingularMatrix("dense LU pivot below 1e-300 at row " + std::to_string(i));
  }
  return from_eigen(lu.solve(b));
}

//------------------------------------------------------------------------------
// Restarted GMRES(30) with block-diagonal (element-block Jacobi) preconditioning
//------------------------------------------------------------------------------

class BlockJacobi {
public:
  BlockJacobi(const RowMajorSp& A, int block_size) : bs_(std::max(1, block_size)) {
    const int n = static_cast<int>(A.rows());
    const int nblocks = (n + bs_ - 1) / bs_;
    inv_.reserve(nblocks);
    for (int bstart = 0; bstart < n; bstart += bs_) {
      const int m = std::min(bs_, n - bstart);
      Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(m, m);
      for (int r = 0; r < m; ++r) {
        for (RowMajorSp::InnerIterator it(A, bstart + r); it; ++it) {
          const long c = it.col() - bstart;
          if (c >= 0 && c < m) blk(r, c) = it.value();
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(blk);
      if (!lu.isInvertible()) {
        inv_.push_back(Eigen::MatrixXd::Identity(m, m)); // fall back to identity block
      } else {
        inv_.push_back(lu.inverse());
      }
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd z(v.size());
    int bstart = 0;
    for (const auto& inv : inv_) {
      const int m = static_cast<int>(inv.rows());
      z.segment(bstart, m) = inv * v.segment(bstart, m);
      bstart += m;
    }
    return z;
  }

private:
  int bs_;
  std::vector<Eigen::MatrixXd> inv_;
};

std::vector<double> solve_gmres(const RowMajorSp& A, const Eigen::VectorXd& b,
                                const LinearSolveOptions& opts) {
  const int n = static_cast<int>(A.rows());
  const int restart = 30;
  const double bnorm = b.norm();
  if (bnorm == 0.0) return std::vector<double>(n, 0.0);

  BlockJacobi prec(A, opts.block_size);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  int total_iters = 0;

  while (total_iters < opts.max_iterations) {
    Eigen::VectorXd r = b - A * x;
    double beta = r.norm();
    if (beta / bnorm <= opts.tolerance) return from_eigen(x);

    // Arnoldi with right preconditioning: solve A M^{-1} y = b, x = M^{-1} y
    std::vector<Eigen::VectorXd> V;
    V.push_back(r / beta);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(restart + 1);
    g(0) = beta;
    std::vector<double> cs(restart, 0.0), sn(restart, 0.0);

    int k = 0;
    for (; k < restart && total_iters < opts.max_iterations; ++k, ++total_iters) {
      Eigen::VectorXd w = A * prec.apply(V[k]);
      for (int i = 0; i <= k; ++i) {
        H(i, k) = w.dot(V[i]);
        w -= H(i, k) * V[i];
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) > 1e-300) V.push_back(w / H(k + 1, k));

      // apply accumulated Givens rotations, then form a new one
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = H(k, k) / denom;
      sn[k] = H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn[k] * g(k);
      g(k) = cs[k] * g(k);

      if (std::abs(g(k + 1)) / bnorm <= opts.tolerance) {
        ++k;
        ++total_iters;
        break;
      }
      if (static_cast<int>(V.size()) == k + 1) break; // happy breakdown
    }

    // back-substitute y from the k x k triangular system
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g(i);
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y(j);
      y(i) = s / H(i, i);
    }
    Eigen::VectorXd update = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) update += y(i) * V[i];
    x += prec.apply(update);

    if ((b - A * x).norm() / bnorm <= opts.tolerance) return from_eigen(x);
  }

  if ((b - A * x).norm() / bnorm <= opts.tolerance) return from_eigen(x);
  throw NoConvergence("GMRES(30) exceeded " + std::to_string(opts.max_iterations) +
                      " iterations");
}

} // namespace

//------------------------------------------------------------------------------
// Entry point
//------------------------------------------------------------------------------

std::vector<double> solve(SparseMatrix& A, const std::vector<double>& b,
                          const LinearSolveOptions& opts) {
  if (A.rows() != A.cols()) throw std::invalid_argument("solve: matrix must be square");
  if (A.rows() != static_cast<int>(b.size()))
    throw std::invalid_argument("solve: dimension mismatch");
  if (opts.tolerance <= 0.0) throw std::invalid_argument("solve: tolerance must be > 0");
  if (opts.max_iterations < 1) throw std::invalid_argument("solve: max_iterations must be >= 1");
  A.finalize();
  const Eigen::VectorXd be = to_eigen(b);

  switch (opts.method) {
    case SolveMethod::DirectBanded:
      return solve_sparse_lu(A.csr(), be);
    case SolveMethod::DirectDense:
      return solve_dense(A.csr(), be);
    case SolveMethod::Iterative:
      return solve_gmres(A.csr(), be, opts);
  }
  throw std::logic_error("solve: unreachable");
}

} // namespace ofem
