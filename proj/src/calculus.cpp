#include "lrnn/calculus.hpp"

#include "lrnn/errors.hpp"

namespace lrnn::calculus {

namespace {

void check_axis(const randnet::RandomFeatureNetwork& net, int axis) {
  if (axis < 0 || axis >= net.d_in) {
    throw DimensionMismatch("derivative axis out of range");
  }
}

}  // namespace

Mat fd_partial(const randnet::RandomFeatureNetwork& net, int axis,
               const Mat& points, const FdConfig& cfg) {
  check_axis(net, axis);
  Mat shifted = points;
  shifted.col(axis).array() += cfg.h1;
  Mat d = randnet::eval_basis(net, shifted);
  shifted.col(axis).array() -= 2.0 * cfg.h1;
  d -= randnet::eval_basis(net, shifted);
  d /= 2.0 * cfg.h1;
  return d;
}

Mat fd_second_partial(const randnet::RandomFeatureNetwork& net, int axis,
                      const Mat& points, const FdConfig& cfg) {
  check_axis(net, axis);
  Mat d = -2.0 * randnet::eval_basis(net, points);
  Mat shifted = points;
  shifted.col(axis).array() += cfg.h2;
  d += randnet::eval_basis(net, shifted);
  shifted.col(axis).array() -= 2.0 * cfg.h2;
  d += randnet::eval_basis(net, shifted);
  d /= cfg.h2 * cfg.h2;
  return d;
}

Mat fd_laplacian(const randnet::RandomFeatureNetwork& net, const Mat& points,
                 const FdConfig& cfg, const std::vector<int>& axes) {
  if (axes.empty()) throw DimensionMismatch("laplacian needs at least one axis");
  Mat lap = fd_second_partial(net, axes[0], points, cfg);
  for (std::size_t i = 1; i < axes.size(); ++i) {
    lap += fd_second_partial(net, axes[i], points, cfg);
  }
  return lap;
}

Mat fd_time_partial(const randnet::RandomFeatureNetwork& net, const Mat& points,
                    const FdConfig& cfg) {
  if (net.d_in < 2) {
    throw NoTimeAxis("network input has no time axis to differentiate");
  }
  return fd_partial(net, net.d_in - 1, points, cfg);
}

BasisDerivatives analytic_derivatives(const randnet::RandomFeatureNetwork& net,
                                      const Mat& points) {
  if (net.hidden_widths.size() != 1) {
    throw UnsupportedDepth("analytic derivatives shipped for one hidden layer");
  }
  if (points.cols() != net.d_in) {
    throw DimensionMismatch("points have the wrong number of columns");
  }
  const Mat t = ((points * net.weights[0].transpose()).rowwise() +
                 net.biases[0].transpose())
                    .array()
                    .tanh()
                    .matrix();
  const Mat sech2 = (1.0 - t.array().square()).matrix();  // tanh' = 1 - tanh^2

  BasisDerivatives out;
  out.gradient.reserve(net.d_in);
  out.second.reserve(net.d_in);
  for (int a = 0; a < net.d_in; ++a) {
    const auto wa = net.weights[0].col(a).transpose().array();  // 1 x m
    out.gradient.push_back((sech2.array().rowwise() * wa).matrix());
    out.second.push_back(
        (((-2.0 * t.array() * sech2.array()).rowwise()) * wa.square()).matrix());
  }
  return out;
}

}  // namespace lrnn::calculus
