#pragma once

#include <utility>

#include "lrnn/types.hpp"

namespace lrnn::linsolve {

enum class Method { Svd, Qr, Normal };

struct SolverConfig {
  Method method = Method::Svd;
  double rcond = 1e-12;  // relative singular-value (resp. eigenvalue) cutoff
};

struct SolveDiagnostics {
  int rank = 0;
  double sigma_max = 0.0;
  double sigma_min_kept = 0.0;
  // Exact ||MX - R|| for Method::Normal. For Svd/Qr on tall systems this is
  // the transformed-rhs tail norm, which equals the true residual at full
  // rank; NaN for wide systems.
  double residual_norm = 0.0;
};

// Minimizes ||M X - R||_2. The default truncated SVD returns the minimum-norm
// minimizer with singular values below rcond * sigma_max dropped. The matrix
// is taken by value: Svd/Qr factor it in place, so pass a copy (or move) if
// the caller still needs it.
std::pair<Vec, SolveDiagnostics> lstsq(Mat M, Vec rhs,
                                       const SolverConfig& cfg = {});

}  // namespace lrnn::linsolve
