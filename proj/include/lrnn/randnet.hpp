#pragma once

#include <cstdint>
#include <vector>

#include "lrnn/errors.hpp"
#include "lrnn/types.hpp"

namespace lrnn::randnet {

// Frozen-hidden-weight tanh network; the last hidden layer's outputs are the
// basis functions psi_k. Weights are fully determined by (seed, shape, ranges)
// and are never serialized.
struct RandomFeatureNetwork {
  int d_in = 0;
  std::vector<int> hidden_widths;
  double r_weight = 0.0;
  double r_bias = 0.0;
  std::uint64_t seed = 0;
  std::vector<Mat> weights;  // W_l: n_l x n_{l-1}
  std::vector<Vec> biases;   // b_l: n_l

  int depth() const { return static_cast<int>(hidden_widths.size()) + 1; }
  int basis_dim() const { return hidden_widths.back(); }
};

// Weights i.i.d. U(-r_weight, r_weight), biases U(-r_bias, r_bias), each layer
// on its own derived stream so adding layers never perturbs earlier ones.
RandomFeatureNetwork build_network(std::uint64_t seed, int d_in,
                                   const std::vector<int>& hidden_widths,
                                   double r_weight, double r_bias);

// Row i = psi(points.row(i)); N x m.
Mat eval_basis(const RandomFeatureNetwork& net, const Mat& points);

// eval_basis(net, points) * alpha.
Vec eval_solution(const RandomFeatureNetwork& net, const Vec& alpha,
                  const Mat& points);

}  // namespace lrnn::randnet
