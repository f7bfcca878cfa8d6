#pragma once

#include <vector>

#include "lrnn/randnet.hpp"
#include "lrnn/types.hpp"

namespace lrnn::calculus {

// Central-difference step sizes; h1 for first derivatives, h2 for second.
struct FdConfig {
  double h1 = 1e-6;
  double h2 = 5e-4;
};

// d(psi_k)/dx_axis at every point; N x m.
Mat fd_partial(const randnet::RandomFeatureNetwork& net, int axis,
               const Mat& points, const FdConfig& cfg = {});

// d2(psi_k)/dx_axis^2 at every point; N x m.
Mat fd_second_partial(const randnet::RandomFeatureNetwork& net, int axis,
                      const Mat& points, const FdConfig& cfg = {});

// Sum of fd_second_partial over `axes` (the spatial axes in space-time mode).
Mat fd_laplacian(const randnet::RandomFeatureNetwork& net, const Mat& points,
                 const FdConfig& cfg, const std::vector<int>& axes);

// First derivative along the time axis (by convention the last input axis).
Mat fd_time_partial(const randnet::RandomFeatureNetwork& net, const Mat& points,
                    const FdConfig& cfg = {});

// Exact chain-rule derivatives for single-hidden-layer networks; the test
// oracle for the finite-difference operators above.
struct BasisDerivatives {
  std::vector<Mat> gradient;  // per axis, N x m
  std::vector<Mat> second;    // per axis, N x m (Hessian diagonal)
};

BasisDerivatives analytic_derivatives(const randnet::RandomFeatureNetwork& net,
                                      const Mat& points);

}  // namespace lrnn::calculus
