#include "lrnn/linsolve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lrnn/errors.hpp"

namespace lrnn::linsolve {

namespace {

std::pair<Vec, SolveDiagnostics> solve_svd(Mat M, const Vec& rhs, double rcond) {
  const lapack_int rows = static_cast<lapack_int>(M.rows());
  const lapack_int cols = static_cast<lapack_int>(M.cols());
  const lapack_int ldb = std::max(rows, cols);
  Vec b = Vec::Zero(ldb);
  b.head(rows) = rhs;
  Vec s(std::min(rows, cols));
  lapack_int rank = 0;
  const lapack_int info =
      LAPACKE_dgelsd(LAPACK_COL_MAJOR, rows, cols, 1, M.data(), rows, b.data(),
                     ldb, s.data(), rcond, &rank);
  if (info != 0) throw Error("dgelsd failed to converge");
  SolveDiagnostics diag;
  diag.rank = static_cast<int>(rank);
  diag.sigma_max = s[0];
  diag.sigma_min_kept = rank > 0 ? s[rank - 1] : 0.0;
  diag.residual_norm = rows > cols
                           ? b.segment(cols, rows - cols).norm()
                           : std::numeric_limits<double>::quiet_NaN();
  return {b.head(cols), diag};
}

std::pair<Vec, SolveDiagnostics> solve_qr(Mat M, const Vec& rhs, double rcond) {
  const lapack_int rows = static_cast<lapack_int>(M.rows());
  const lapack_int cols = static_cast<lapack_int>(M.cols());
  const lapack_int ldb = std::max(rows, cols);
  Vec b = Vec::Zero(ldb);
  b.head(rows) = rhs;
  std::vector<lapack_int> jpvt(cols, 0);
  lapack_int rank = 0;
  const lapack_int info =
      LAPACKE_dgelsy(LAPACK_COL_MAJOR, rows, cols, 1, M.data(), rows, b.data(),
                     ldb, jpvt.data(), rcond, &rank);
  if (info != 0) throw Error("dgelsy failed");
  SolveDiagnostics diag;
  diag.rank = static_cast<int>(rank);
  diag.sigma_max = std::numeric_limits<double>::quiet_NaN();
  diag.sigma_min_kept = std::numeric_limits<double>::quiet_NaN();
  diag.residual_norm = rows > cols
                           ? b.segment(cols, rows - cols).norm()
                           : std::numeric_limits<double>::quiet_NaN();
  return {b.head(cols), diag};
}

// Normal equations with an eigenvalue cutoff at rcond * lambda_max. Squares
// the conditioning but never copies M, which keeps the peak footprint at one
// matrix for the largest benchmark configurations.
std::pair<Vec, SolveDiagnostics> solve_normal(const Mat& M, const Vec& rhs,
                                              double rcond) {
  const lapack_int cols = static_cast<lapack_int>(M.cols());
  Mat gram = Mat::Zero(cols, cols);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(M.transpose());
  Vec lambda(cols);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', cols,
                                         gram.data(), cols, lambda.data());
  if (info != 0) throw Error("dsyevd failed");
  const double lmax = std::max(lambda[cols - 1], 0.0);
  const double cutoff = rcond * lmax;
  Vec y = gram.transpose() * (M.transpose() * rhs);
  SolveDiagnostics diag;
  diag.sigma_max = std::sqrt(lmax);
  double lmin_kept = 0.0;
  for (lapack_int i = 0; i < cols; ++i) {
    if (lambda[i] > cutoff && lambda[i] > 0.0) {
      y[i] /= lambda[i];
      if (diag.rank == 0) lmin_kept = lambda[i];
      ++diag.rank;
    } else {
      y[i] = 0.0;
    }
  }
  diag.sigma_min_kept = std::sqrt(lmin_kept);
  Vec x = gram * y;
  diag.residual_norm = (M * x - rhs).norm();
  return {x, diag};
}

}  // namespace

std::pair<Vec, SolveDiagnostics> lstsq(Mat M, Vec rhs, const SolverConfig& cfg) {
  if (M.rows() < 1 || M.cols() < 1) {
    throw DimensionMismatch("system must have at least one row and column");
  }
  if (rhs.size() != M.rows()) {
    throw DimensionMismatch("rhs length does not match the matrix");
  }
  if (!M.allFinite() || !rhs.allFinite()) {
    throw NonFiniteInput("system contains non-finite values");
  }
  switch (cfg.method) {
    case Method::Svd:
      return solve_svd(std::move(M), rhs, cfg.rcond);
    case Method::Qr:
      return solve_qr(std::move(M), rhs, cfg.rcond);
    case Method::Normal:
      return solve_normal(M, rhs, cfg.rcond);
  }
  throw InvalidConfig("unknown solver method");
}

}  // namespace lrnn::linsolve
