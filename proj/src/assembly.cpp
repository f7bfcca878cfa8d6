#include "lrnn/assembly.hpp"

#include <cstdint>
#include <fstream>
#include <numeric>

#include "lrnn/errors.hpp"

namespace lrnn::assembly {

namespace {

using randnet::RandomFeatureNetwork;
using sampling::CollocationSet;

const char* kTagNames[] = {"pde",       "jump",    "flux_jump", "dirichlet",
                           "initial",   "mix_div", "mix_gradx", "mix_grady"};

std::vector<int> spatial_axes(int d) {
  std::vector<int> axes(d);
  std::iota(axes.begin(), axes.end(), 0);
  return axes;
}

// Column offsets of consecutive per-network blocks.
std::vector<long> block_offsets(const std::vector<const RandomFeatureNetwork*>& nets) {
  std::vector<long> off(nets.size() + 1, 0);
  for (std::size_t i = 0; i < nets.size(); ++i) {
    off[i + 1] = off[i] + nets[i]->basis_dim();
  }
  return off;
}

// Rows of `pts` whose tag equals s, as a dense submatrix plus the row map.
std::pair<Mat, std::vector<int>> rows_with_tag(const Mat& pts,
                                               const std::vector<int>& tags,
                                               int s) {
  std::vector<int> map;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == s) map.push_back(static_cast<int>(i));
  }
  Mat sub(map.size(), pts.cols());
  for (std::size_t i = 0; i < map.size(); ++i) sub.row(i) = pts.row(map[i]);
  return {std::move(sub), std::move(map)};
}

void check_problem(const ProblemDefinition& prob, std::size_t n_nets, int din) {
  if (static_cast<int>(n_nets) != prob.geom.n_subdomains) {
    throw DimensionMismatch("need one network per subdomain");
  }
  if (static_cast<int>(prob.beta.size()) != prob.geom.n_subdomains) {
    throw DimensionMismatch("need one beta per subdomain");
  }
  for (double b : prob.beta) {
    if (!(b > 0.0)) throw InvalidConfig("beta must be positive");
  }
  if (prob.jump_value.size() != prob.geom.interfaces.size() ||
      prob.jump_flux.size() != prob.geom.interfaces.size()) {
    throw DimensionMismatch("need jump data per interface");
  }
  (void)din;
}

void check_nets(const std::vector<const RandomFeatureNetwork*>& nets, int din) {
  for (const auto* net : nets) {
    if (net->d_in != din) {
      throw DimensionMismatch("network input size does not match the points");
    }
  }
}

struct RowWriter {
  BlockSystem& sys;

  void tag_row(long row, RowTag tag, double weight) {
    sys.row_tags[row] = tag;
    sys.row_weights[row] = weight;
    sys.rhs[row] *= weight;
    if (weight != 1.0) sys.matrix.row(row) *= weight;
  }
};

// Shared strong-form builder; `with_time` switches on the parabolic operator
// and the initial block.
BlockSystem assemble_strong(const ProblemDefinition& prob,
                            const std::vector<RandomFeatureNetwork>& nets,
                            const CollocationSet& pts,
                            const AssemblyOptions& opts, bool with_time) {
  const int d = pts.spatial_dim;
  const int din = pts.din();
  check_problem(prob, nets.size(), din);
  if (with_time != pts.space_time) {
    throw DimensionMismatch("collocation set does not match the formulation");
  }
  if (with_time && (!prob.geom.time_horizon || !prob.initial_value)) {
    throw MissingInitialCondition("space-time form needs T and u0");
  }
  std::vector<const RandomFeatureNetwork*> net_ptrs;
  for (const auto& n : nets) net_ptrs.push_back(&n);
  check_nets(net_ptrs, din);

  const long n1 = pts.interior.rows();
  const long n2 = pts.interface_points.rows();
  const long n3 = pts.boundary.rows();
  const long n0 = pts.initial.rows();
  if (n1 == 0 || n2 == 0 || n3 == 0) {
    throw EmptyRegion("interior, interface and boundary regions must be non-empty");
  }
  if (with_time && n0 == 0) {
    throw EmptyRegion("space-time form needs initial points");
  }

  const auto off = block_offsets(net_ptrs);
  const long cols = off.back();
  const long rows = n1 + 2 * n2 + n3 + (with_time ? n0 : 0);

  BlockSystem sys;
  sys.matrix = Mat::Zero(rows, cols);
  sys.rhs = Vec::Zero(rows);
  sys.row_tags.assign(rows, RowTag::Pde);
  sys.row_weights = Vec::Ones(rows);
  RowWriter writer{sys};

  const auto axes = spatial_axes(d);

  // PDE rows, grouped per subdomain.
  for (int s = 0; s < prob.geom.n_subdomains; ++s) {
    auto [sub, map] = rows_with_tag(pts.interior, pts.interior_subdomain, s);
    if (sub.rows() == 0) continue;
    Mat op = -prob.beta[s] * calculus::fd_laplacian(nets[s], sub, opts.fd, axes);
    if (with_time) op += calculus::fd_time_partial(nets[s], sub, opts.fd);
    for (long i = 0; i < sub.rows(); ++i) {
      const long row = map[i];
      sys.matrix.block(row, off[s], 1, nets[s].basis_dim()) = op.row(i);
      const double t = with_time ? sub(i, d) : 0.0;
      sys.rhs[row] = prob.source(sub.row(i).head(d).transpose(), t, s);
      writer.tag_row(row, RowTag::Pde, 1.0);
    }
  }

  // Jump and flux-jump rows, grouped per interface; interface k separates
  // subdomains k (inner) and k+1 (outer).
  for (std::size_t k = 0; k < prob.geom.interfaces.size(); ++k) {
    auto [sub, map] =
        rows_with_tag(pts.interface_points, pts.interface_label, static_cast<int>(k));
    if (sub.rows() == 0) {
      throw EmptyRegion("every interface needs collocation points");
    }
    const int in = static_cast<int>(k);
    const int out = in + 1;
    const Mat psi_in = randnet::eval_basis(nets[in], sub);
    const Mat psi_out = randnet::eval_basis(nets[out], sub);
    const double c_in = opts.flux_includes_beta ? prob.beta[in] : 1.0;
    const double c_out = opts.flux_includes_beta ? prob.beta[out] : 1.0;

    // n . grad(psi), accumulated axis by axis to keep one gradient in memory.
    Mat flux_in = Mat::Zero(sub.rows(), nets[in].basis_dim());
    Mat flux_out = Mat::Zero(sub.rows(), nets[out].basis_dim());
    for (int a : axes) {
      Vec na(sub.rows());
      for (long i = 0; i < sub.rows(); ++i) na[i] = pts.interface_normals(map[i], a);
      flux_in += na.asDiagonal() * calculus::fd_partial(nets[in], a, sub, opts.fd);
      flux_out += na.asDiagonal() * calculus::fd_partial(nets[out], a, sub, opts.fd);
    }

    for (long i = 0; i < sub.rows(); ++i) {
      const long jump_row = n1 + map[i];
      const long flux_row = n1 + n2 + map[i];
      const double t = with_time ? sub(i, d) : 0.0;
      const Vec x = sub.row(i).head(d).transpose();

      sys.matrix.block(jump_row, off[in], 1, nets[in].basis_dim()) = psi_in.row(i);
      sys.matrix.block(jump_row, off[out], 1, nets[out].basis_dim()) = -psi_out.row(i);
      sys.rhs[jump_row] = prob.jump_value[k](x, t);
      writer.tag_row(jump_row, RowTag::Jump, opts.gamma.jump);

      sys.matrix.block(flux_row, off[in], 1, nets[in].basis_dim()) =
          c_in * flux_in.row(i);
      sys.matrix.block(flux_row, off[out], 1, nets[out].basis_dim()) =
          -c_out * flux_out.row(i);
      sys.rhs[flux_row] = prob.jump_flux[k](x, t);
      writer.tag_row(flux_row, RowTag::FluxJump, opts.gamma.flux_jump);
    }
  }

  // Dirichlet rows, grouped by the subdomain owning the boundary point.
  for (int s = 0; s < prob.geom.n_subdomains; ++s) {
    auto [sub, map] = rows_with_tag(pts.boundary, pts.boundary_subdomain, s);
    if (sub.rows() == 0) continue;
    const Mat psi = randnet::eval_basis(nets[s], sub);
    for (long i = 0; i < sub.rows(); ++i) {
      const long row = n1 + 2 * n2 + map[i];
      sys.matrix.block(row, off[s], 1, nets[s].basis_dim()) = psi.row(i);
      const double t = with_time ? sub(i, d) : 0.0;
      sys.rhs[row] = prob.dirichlet(sub.row(i).head(d).transpose(), t, s);
      writer.tag_row(row, RowTag::Dirichlet, opts.gamma.dirichlet);
    }
  }

  // Initial rows (space-time only; the sampler pins t = 0).
  if (with_time) {
    for (int s = 0; s < prob.geom.n_subdomains; ++s) {
      auto [sub, map] = rows_with_tag(pts.initial, pts.initial_subdomain, s);
      if (sub.rows() == 0) continue;
      const Mat psi = randnet::eval_basis(nets[s], sub);
      for (long i = 0; i < sub.rows(); ++i) {
        const long row = n1 + 2 * n2 + n3 + map[i];
        sys.matrix.block(row, off[s], 1, nets[s].basis_dim()) = psi.row(i);
        sys.rhs[row] = prob.initial_value(sub.row(i).head(d).transpose(), s);
        writer.tag_row(row, RowTag::Initial, opts.gamma.initial);
      }
    }
  }

  return sys;
}

}  // namespace

const char* row_tag_name(RowTag tag) { return kTagNames[static_cast<int>(tag)]; }

BlockSystem assemble_elliptic(const ProblemDefinition& prob,
                              const std::vector<RandomFeatureNetwork>& nets,
                              const CollocationSet& pts,
                              const AssemblyOptions& opts) {
  return assemble_strong(prob, nets, pts, opts, /*with_time=*/false);
}

BlockSystem assemble_spacetime(const ProblemDefinition& prob,
                               const std::vector<RandomFeatureNetwork>& nets,
                               const CollocationSet& pts,
                               const AssemblyOptions& opts) {
  return assemble_strong(prob, nets, pts, opts, /*with_time=*/true);
}

BlockSystem assemble_mixed(
    const ProblemDefinition& prob,
    const std::vector<RandomFeatureNetwork>& nets_u,
    const std::vector<std::array<RandomFeatureNetwork, 2>>& nets_p,
    const sampling::CollocationSet& pts, const AssemblyOptions& opts) {
  const int d = pts.spatial_dim;
  if (d != 2) {
    throw UnsupportedDimension("the mixed form is shipped for 2-D problems");
  }
  if (pts.space_time) {
    throw UnsupportedDimension("the mixed form is stationary");
  }
  if (prob.geom.n_subdomains != 2 || nets_u.size() != 2 || nets_p.size() != 2) {
    throw DimensionMismatch("the mixed form uses exactly two subdomains");
  }
  check_problem(prob, nets_u.size(), d);
  std::vector<const RandomFeatureNetwork*> net_ptrs;
  for (const auto& n : nets_u) net_ptrs.push_back(&n);
  for (const auto& pair : nets_p) {
    net_ptrs.push_back(&pair[0]);
    net_ptrs.push_back(&pair[1]);
  }
  check_nets(net_ptrs, d);

  const long n1 = pts.interior.rows();
  const long n2 = pts.interface_points.rows();
  const long n3 = pts.boundary.rows();
  if (n1 == 0 || n2 == 0 || n3 == 0) {
    throw EmptyRegion("interior, interface and boundary regions must be non-empty");
  }

  // Column blocks: u^0, u^1, p^{0,x}, p^{0,y}, p^{1,x}, p^{1,y}.
  const auto off = block_offsets(net_ptrs);
  const auto u_off = [&](int s) { return off[s]; };
  const auto p_off = [&](int s, int comp) { return off[2 + 2 * s + comp]; };
  const auto u_dim = [&](int s) { return nets_u[s].basis_dim(); };
  const auto p_dim = [&](int s, int comp) { return nets_p[s][comp].basis_dim(); };

  const long rows = 3 * n1 + 2 * n2 + n3;
  BlockSystem sys;
  sys.matrix = Mat::Zero(rows, off.back());
  sys.rhs = Vec::Zero(rows);
  sys.row_tags.assign(rows, RowTag::MixedDiv);
  sys.row_weights = Vec::Ones(rows);
  RowWriter writer{sys};

  // Interior blocks: -div p = f, and p - beta grad u = 0 componentwise.
  for (int s = 0; s < 2; ++s) {
    auto [sub, map] = rows_with_tag(pts.interior, pts.interior_subdomain, s);
    if (sub.rows() == 0) continue;
    const Mat du_dx = calculus::fd_partial(nets_u[s], 0, sub, opts.fd);
    const Mat du_dy = calculus::fd_partial(nets_u[s], 1, sub, opts.fd);
    const Mat dpx_dx = calculus::fd_partial(nets_p[s][0], 0, sub, opts.fd);
    const Mat dpy_dy = calculus::fd_partial(nets_p[s][1], 1, sub, opts.fd);
    const Mat xi_x = randnet::eval_basis(nets_p[s][0], sub);
    const Mat xi_y = randnet::eval_basis(nets_p[s][1], sub);

    for (long i = 0; i < sub.rows(); ++i) {
      const Vec x = sub.row(i).transpose();
      const long div_row = map[i];
      sys.matrix.block(div_row, p_off(s, 0), 1, p_dim(s, 0)) = -dpx_dx.row(i);
      sys.matrix.block(div_row, p_off(s, 1), 1, p_dim(s, 1)) = -dpy_dy.row(i);
      sys.rhs[div_row] = prob.source(x, 0.0, s);
      writer.tag_row(div_row, RowTag::MixedDiv, 1.0);

      const long gx_row = n1 + map[i];
      sys.matrix.block(gx_row, u_off(s), 1, u_dim(s)) = -prob.beta[s] * du_dx.row(i);
      sys.matrix.block(gx_row, p_off(s, 0), 1, p_dim(s, 0)) = xi_x.row(i);
      writer.tag_row(gx_row, RowTag::MixedGradX, 1.0);

      const long gy_row = 2 * n1 + map[i];
      sys.matrix.block(gy_row, u_off(s), 1, u_dim(s)) = -prob.beta[s] * du_dy.row(i);
      sys.matrix.block(gy_row, p_off(s, 1), 1, p_dim(s, 1)) = xi_y.row(i);
      writer.tag_row(gy_row, RowTag::MixedGradY, 1.0);
    }
  }

  // Interface rows: [u] = g1 on the u blocks, [p . n] = g2 on the p blocks.
  {
    const Mat& sub = pts.interface_points;
    const Mat psi_in = randnet::eval_basis(nets_u[0], sub);
    const Mat psi_out = randnet::eval_basis(nets_u[1], sub);
    std::array<std::array<Mat, 2>, 2> xi;  // [s][comp]
    for (int s = 0; s < 2; ++s) {
      for (int comp = 0; comp < 2; ++comp) {
        xi[s][comp] = randnet::eval_basis(nets_p[s][comp], sub);
      }
    }
    for (long i = 0; i < n2; ++i) {
      const Vec x = sub.row(i).transpose();
      const int k = pts.interface_label[i];
      if (k != 0) throw DimensionMismatch("mixed form supports one interface");

      const long jump_row = 3 * n1 + i;
      sys.matrix.block(jump_row, u_off(0), 1, u_dim(0)) = psi_in.row(i);
      sys.matrix.block(jump_row, u_off(1), 1, u_dim(1)) = -psi_out.row(i);
      sys.rhs[jump_row] = prob.jump_value[0](x, 0.0);
      writer.tag_row(jump_row, RowTag::Jump, opts.gamma.jump);

      const long flux_row = 3 * n1 + n2 + i;
      for (int comp = 0; comp < 2; ++comp) {
        const double nc = pts.interface_normals(i, comp);
        sys.matrix.block(flux_row, p_off(0, comp), 1, p_dim(0, comp)) =
            nc * xi[0][comp].row(i);
        sys.matrix.block(flux_row, p_off(1, comp), 1, p_dim(1, comp)) =
            -nc * xi[1][comp].row(i);
      }
      sys.rhs[flux_row] = prob.jump_flux[0](x, 0.0);
      writer.tag_row(flux_row, RowTag::FluxJump, opts.gamma.flux_jump);
    }
  }

  // Dirichlet rows on the owning subdomain's u block.
  for (int s = 0; s < 2; ++s) {
    auto [sub, map] = rows_with_tag(pts.boundary, pts.boundary_subdomain, s);
    if (sub.rows() == 0) continue;
    const Mat psi = randnet::eval_basis(nets_u[s], sub);
    for (long i = 0; i < sub.rows(); ++i) {
      const long row = 3 * n1 + 2 * n2 + map[i];
      sys.matrix.block(row, u_off(s), 1, u_dim(s)) = psi.row(i);
      sys.rhs[row] = prob.dirichlet(sub.row(i).transpose(), 0.0, s);
      writer.tag_row(row, RowTag::Dirichlet, opts.gamma.dirichlet);
    }
  }

  return sys;
}

double SolutionCoefficients::eval_u(int s, const Vec& x, double t) const {
  const auto& net = nets_u[s];
  Mat pt(1, net.d_in);
  if (net.d_in == x.size() + 1) {
    pt.row(0).head(x.size()) = x.transpose();
    pt(0, x.size()) = t;
  } else {
    pt.row(0) = x.transpose();
  }
  return (randnet::eval_basis(net, pt) * alpha[s])(0);
}

Vec SolutionCoefficients::eval_flux(int s, const Vec& x, double t) const {
  (void)t;
  Vec p(2);
  Mat pt(1, x.size());
  pt.row(0) = x.transpose();
  for (int comp = 0; comp < 2; ++comp) {
    p[comp] = (randnet::eval_basis(nets_p[s][comp], pt) * tau[s][comp])(0);
  }
  return p;
}

SolutionCoefficients split_strong(
    const Vec& x, const std::vector<RandomFeatureNetwork>& nets) {
  SolutionCoefficients sol;
  sol.nets_u = nets;
  long at = 0;
  for (const auto& net : nets) {
    sol.alpha.push_back(x.segment(at, net.basis_dim()));
    at += net.basis_dim();
  }
  if (at != x.size()) throw DimensionMismatch("solution vector size mismatch");
  return sol;
}

SolutionCoefficients split_mixed(
    const Vec& x, const std::vector<RandomFeatureNetwork>& nets_u,
    const std::vector<std::array<RandomFeatureNetwork, 2>>& nets_p) {
  SolutionCoefficients sol;
  sol.nets_u = nets_u;
  sol.nets_p = nets_p;
  long at = 0;
  for (const auto& net : nets_u) {
    sol.alpha.push_back(x.segment(at, net.basis_dim()));
    at += net.basis_dim();
  }
  for (const auto& pair : nets_p) {
    std::array<Vec, 2> t;
    for (int comp = 0; comp < 2; ++comp) {
      t[comp] = x.segment(at, pair[comp].basis_dim());
      at += pair[comp].basis_dim();
    }
    sol.tau.push_back(std::move(t));
  }
  if (at != x.size()) throw DimensionMismatch("solution vector size mismatch");
  return sol;
}

std::map<RowTag, double> residual(const BlockSystem& sys, const Vec& x) {
  if (x.size() != sys.cols()) {
    throw DimensionMismatch("solution vector does not match the system");
  }
  const Vec r = sys.matrix * x - sys.rhs;
  std::map<RowTag, double> sum_sq;
  std::map<RowTag, long> count;
  for (long i = 0; i < sys.rows(); ++i) {
    const double w = sys.row_weights[i];
    if (w <= 0.0) continue;  // zero-weight rows carry no information
    const double u = r[i] / w;
    sum_sq[sys.row_tags[i]] += u * u;
    count[sys.row_tags[i]] += 1;
  }
  std::map<RowTag, double> rms;
  for (const auto& [tag, s] : sum_sq) {
    rms[tag] = std::sqrt(s / static_cast<double>(count[tag]));
  }
  return rms;
}

void dump_system(const BlockSystem& sys, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open dump file: " + path);
  const std::int64_t rows = sys.rows();
  const std::int64_t cols = sys.cols();
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  std::vector<double> row(cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) row[j] = sys.matrix(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * row.size()));
  }
  out.write(reinterpret_cast<const char*>(sys.rhs.data()),
            static_cast<std::streamsize>(sizeof(double) * sys.rhs.size()));
}

}  // namespace lrnn::assembly
