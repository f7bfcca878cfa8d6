#include "lrnn/randnet.hpp"

#include "lrnn/rng.hpp"

namespace lrnn::randnet {

RandomFeatureNetwork build_network(std::uint64_t seed, int d_in,
                                   const std::vector<int>& hidden_widths,
                                   double r_weight, double r_bias) {
  if (d_in < 1) throw InvalidShape("input dimension must be >= 1");
  if (hidden_widths.empty()) throw InvalidShape("need at least one hidden layer");
  for (int w : hidden_widths) {
    if (w < 1) throw InvalidShape("hidden widths must be >= 1");
  }
  if (r_weight < 0.0 || r_bias < 0.0) {
    throw InvalidShape("init ranges must be non-negative");
  }

  RandomFeatureNetwork net;
  net.d_in = d_in;
  net.hidden_widths = hidden_widths;
  net.r_weight = r_weight;
  net.r_bias = r_bias;
  net.seed = seed;

  int prev = d_in;
  for (std::size_t l = 0; l < hidden_widths.size(); ++l) {
    const int w = hidden_widths[l];
    rng::UniformRng wrng(rng::derive_stream(seed, {l + 1, 0}));
    rng::UniformRng brng(rng::derive_stream(seed, {l + 1, 1}));
    Mat W(w, prev);
    for (int i = 0; i < w; ++i) {
      for (int j = 0; j < prev; ++j) W(i, j) = wrng.next_symmetric(r_weight);
    }
    Vec b(w);
    for (int i = 0; i < w; ++i) b[i] = brng.next_symmetric(r_bias);
    net.weights.push_back(std::move(W));
    net.biases.push_back(std::move(b));
    prev = w;
  }
  return net;
}

Mat eval_basis(const RandomFeatureNetwork& net, const Mat& points) {
  if (points.cols() != net.d_in) {
    throw DimensionMismatch("points have the wrong number of columns");
  }
  Mat h = points;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    h = ((h * net.weights[l].transpose()).rowwise() +
         net.biases[l].transpose())
            .array()
            .tanh()
            .matrix();
  }
  return h;
}

Vec eval_solution(const RandomFeatureNetwork& net, const Vec& alpha,
                  const Mat& points) {
  if (alpha.size() != net.basis_dim()) {
    throw DimensionMismatch("coefficient vector does not match the basis size");
  }
  return eval_basis(net, points) * alpha;
}

}  // namespace lrnn::randnet
