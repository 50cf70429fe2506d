#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace ofem {

//------------------------------------------------------------------------------
// Errors
//------------------------------------------------------------------------------

struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

//------------------------------------------------------------------------------
// SparseMatrix: triplet accumulation, compressed-row storage after finalize()
//------------------------------------------------------------------------------

class SparseMatrix {
public:
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool finalized() const { return finalized_; }

  // Accumulate a coefficient; duplicate (i,j) contributions are summed.
  void add(int i, int j, double v) {
    if (finalized_) throw std::logic_error("SparseMatrix::add after finalize");
    triplets_.emplace_back(i, j, v);
  }

  // Compress to CSR; duplicates are merged.  Idempotent.
  void finalize();

  // Coefficient lookup (0 where no entry is stored).  Requires finalize().
  double entry(int i, int j) const;

  bool is_symmetric(double rel_tol = 1e-14) const;

  const Eigen::SparseMatrix<double, Eigen::RowMajor>& csr() const {
    if (!finalized_) throw std::logic_error("SparseMatrix::csr before finalize");
    return mat_;
  }

private:
  int rows_, cols_;
  bool finalized_ = false;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> mat_;
};

//------------------------------------------------------------------------------
// Linear solves
//------------------------------------------------------------------------------

enum class SolveMethod {
  DirectBanded, // sparse LU; the default for all 1D (banded) systems
  DirectDense,  // dense partial-pivot LU with explicit pivot check
  Iterative     // restarted GMRES(30), element-block-diagonal preconditioner
};

struct LinearSolveOptions {
  SolveMethod method = SolveMethod::DirectBanded;
  double tolerance = 1e-12; // relative residual
  int max_iterations = 5000;
  int block_size = 1; // preconditioner block size (DOFs per element)
};

// Solve A x = b.  Throws SingularMatrix (direct pivot below 1e-300) or
// NoConvergence (iterative budget exhausted).  The matrix is finalized on
// demand if the caller has not done so.
std::vector<double> solve(SparseMatrix& A, const std::vector<double>& b,
                          const LinearSolveOptions& opts = {});

} // namespace ofem
