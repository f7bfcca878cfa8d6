#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lrnn/assembly.hpp"
#include "lrnn/problems.hpp"
#include "lrnn/rng.hpp"

using namespace lrnn;
using assembly::AssemblyOptions;
using assembly::BlockSystem;
using assembly::RowTag;
using randnet::build_network;
using randnet::RandomFeatureNetwork;

namespace {

sampling::SamplingPlan plan_of(int n, double interior, std::vector<double> ifaces,
                               double boundary, double initial = 0.0) {
  sampling::SamplingPlan p;
  p.total = n;
  p.interior_weight = interior;
  p.interface_weights = std::move(ifaces);
  p.boundary_weight = boundary;
  p.initial_weight = initial;
  return p;
}

std::vector<RandomFeatureNetwork> nets_for(const assembly::ProblemDefinition& prob,
                                           int m, std::uint64_t seed) {
  const int din = prob.geom.dim() + (prob.geom.space_time() ? 1 : 0);
  std::vector<RandomFeatureNetwork> nets;
  for (int s = 0; s < prob.geom.n_subdomains; ++s) {
    nets.push_back(build_network(seed + s, din, {m}, 1.0, 0.5));
  }
  return nets;
}

assembly::ProblemDefinition zero_problem(assembly::ProblemDefinition prob) {
  prob.source = [](const Vec&, double, int) { return 0.0; };
  for (auto& g : prob.jump_value) g = [](const Vec&, double) { return 0.0; };
  for (auto& g : prob.jump_flux) g = [](const Vec&, double) { return 0.0; };
  prob.dirichlet = [](const Vec&, double, int) { return 0.0; };
  if (prob.initial_value) prob.initial_value = [](const Vec&, int) { return 0.0; };
  return prob;
}

}  // namespace

TEST_SUITE_BEGIN("assembly");

TEST_CASE("strong-form block shapes match the published dimension statement") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(5000, 3.0, {1.0}, 1.0);
  plan.seed = 5;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 320, 90);
  const auto sys = assembly::assemble_elliptic(bundle.problem, nets, pts);
  // N1 + 2 N2 + N3 rows by 2m columns
  CHECK(sys.rows() == 6000);
  CHECK(sys.cols() == 640);
  CHECK(sys.rhs.size() == 6000);
  CHECK(static_cast<long>(sys.row_tags.size()) == 6000);
}

TEST_CASE("zero problem gives a zero rhs and zero residual at X = 0") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(120, 3.0, {1.0}, 1.0);
  plan.seed = 6;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 8, 91);
  const auto sys =
      assembly::assemble_elliptic(zero_problem(bundle.problem), nets, pts);
  CHECK(sys.rhs.cwiseAbs().maxCoeff() == 0.0);
  const auto rms = assembly::residual(sys, Vec::Zero(sys.cols()));
  for (const auto& [tag, value] : rms) CHECK(value == 0.0);
}

TEST_CASE("pde row reproduces a hand-assembled scalar row") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(30, 3.0, {1.0}, 1.0);
  plan.seed = 7;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 1, 92);  // one unit per net
  const auto sys = assembly::assemble_elliptic(bundle.problem, nets, pts);

  const int i = 0;  // first interior point
  const int s = pts.interior_subdomain[i];
  const Mat row_pts = pts.interior.row(i);
  const calculus::FdConfig fd;
  const double dxx = calculus::fd_second_partial(nets[s], 0, row_pts, fd)(0, 0);
  const double dyy = calculus::fd_second_partial(nets[s], 1, row_pts, fd)(0, 0);
  const double expected = -bundle.problem.beta[s] * (dxx + dyy);
  CHECK(sys.matrix(i, s) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(sys.matrix(i, 1 - s) == 0.0);
  const Vec x = pts.interior.row(i).transpose();
  CHECK(sys.rhs[i] == doctest::Approx(bundle.problem.source(x, 0.0, s)));
}

TEST_CASE("jump and flux rows honor block sparsity and the beta factors") {
  const auto bundle = problems::make_example(3);  // four subdomains
  auto plan = plan_of(80, 6.0, {1.0, 1.0, 1.0}, 1.0);
  plan.seed = 8;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 3, 93);
  const auto sys = assembly::assemble_elliptic(bundle.problem, nets, pts);

  const long n1 = pts.interior.rows();
  const long n2 = pts.interface_points.rows();
  const int m = 3;
  for (long j = 0; j < n2; ++j) {
    const int k = pts.interface_label[j];
    for (int s = 0; s < 4; ++s) {
      const bool adjacent = (s == k || s == k + 1);
      const double jump_block =
          sys.matrix.row(n1 + j).segment(s * m, m).cwiseAbs().maxCoeff();
      const double flux_block =
          sys.matrix.row(n1 + n2 + j).segment(s * m, m).cwiseAbs().maxCoeff();
      if (adjacent) {
        CHECK(jump_block > 0.0);
      } else {
        CHECK(jump_block == 0.0);
        CHECK(flux_block == 0.0);
      }
    }
  }

  // flux rows carry beta_in grad psi_in . n against -beta_out grad psi_out . n
  const long j = 0;
  const int k = pts.interface_label[j];
  const Mat row_pts = pts.interface_points.row(j);
  const Vec n = pts.interface_normals.row(j).transpose();
  const calculus::FdConfig fd;
  const Mat gx = calculus::fd_partial(nets[k], 0, row_pts, fd);
  const Mat gy = calculus::fd_partial(nets[k], 1, row_pts, fd);
  const double expected =
      bundle.problem.beta[k] * (n[0] * gx(0, 0) + n[1] * gy(0, 0)) * 50.0;
  CHECK(sys.matrix(n1 + n2 + j, k * m) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pde rows are zero outside their subdomain block") {
  const auto bundle = problems::make_example(3);
  auto plan = plan_of(100, 6.0, {1.0, 1.0, 1.0}, 1.0);
  plan.seed = 9;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 2, 94);
  const auto sys = assembly::assemble_elliptic(bundle.problem, nets, pts);
  for (long i = 0; i < pts.interior.rows(); ++i) {
    const int s = pts.interior_subdomain[i];
    for (int other = 0; other < 4; ++other) {
      if (other == s) continue;
      CHECK(sys.matrix.row(i).segment(other * 2, 2).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("doubling gamma doubles exactly the tagged rows") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(60, 3.0, {1.0}, 1.0);
  plan.seed = 10;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 4, 95);

  AssemblyOptions base;
  AssemblyOptions doubled;
  doubled.gamma = assembly::BlockWeights{100.0, 100.0, 100.0, 100.0};
  const auto a = assembly::assemble_elliptic(bundle.problem, nets, pts, base);
  const auto b = assembly::assemble_elliptic(bundle.problem, nets, pts, doubled);
  for (long i = 0; i < a.rows(); ++i) {
    if (a.row_tags[i] == RowTag::Pde) {
      CHECK(a.matrix.row(i) == b.matrix.row(i));
      CHECK(a.rhs[i] == b.rhs[i]);
    } else {
      CHECK(2.0 * a.matrix.row(i) == b.matrix.row(i));
      CHECK(2.0 * a.rhs[i] == b.rhs[i]);
    }
  }
}

TEST_CASE("residual matches a naive recomputation and the X = 0 identity") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(50, 3.0, {1.0}, 1.0);
  plan.seed = 11;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 5, 96);
  const auto sys = assembly::assemble_elliptic(bundle.problem, nets, pts);

  rng::UniformRng rand(40);
  Vec x(sys.cols());
  for (long i = 0; i < x.size(); ++i) x[i] = rand.next_symmetric(1.0);

  const auto rms = assembly::residual(sys, x);
  std::map<RowTag, double> acc, cnt;
  for (long i = 0; i < sys.rows(); ++i) {
    const double r =
        (sys.matrix.row(i) * x - sys.rhs.segment(i, 1))(0) / sys.row_weights[i];
    acc[sys.row_tags[i]] += r * r;
    cnt[sys.row_tags[i]] += 1.0;
  }
  for (const auto& [tag, sum] : acc) {
    CHECK(rms.at(tag) == doctest::Approx(std::sqrt(sum / cnt[tag])).epsilon(1e-12));
  }

  // X = 0: per-block RMS of the unweighted rhs
  const auto rms0 = assembly::residual(sys, Vec::Zero(sys.cols()));
  std::map<RowTag, double> acc0, cnt0;
  for (long i = 0; i < sys.rows(); ++i) {
    const double r = sys.rhs[i] / sys.row_weights[i];
    acc0[sys.row_tags[i]] += r * r;
    cnt0[sys.row_tags[i]] += 1.0;
  }
  for (const auto& [tag, sum] : acc0) {
    CHECK(rms0.at(tag) ==
          doctest::Approx(std::sqrt(sum / cnt0[tag])).epsilon(1e-12));
  }
}

TEST_CASE("mixed-form shapes and row structure") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(5000, 3.0, {1.0}, 1.0);
  plan.seed = 12;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);

  const int m = 320;
  std::vector<RandomFeatureNetwork> nets_u = {
      build_network(1, 2, {m}, 1.0, 1.1), build_network(2, 2, {m}, 1.0, 1.1)};
  std::vector<std::array<RandomFeatureNetwork, 2>> nets_p;
  for (int s = 0; s < 2; ++s) {
    nets_p.push_back({build_network(10 + s, 2, {m}, 0.7, 2.1),
                      build_network(20 + s, 2, {m}, 0.7, 2.1)});
  }
  const auto sys = assembly::assemble_mixed(bundle.problem, nets_u, nets_p, pts);
  // 3 N1 + 2 N2 + N3 rows by 6m columns
  CHECK(sys.rows() == 12000);
  CHECK(sys.cols() == 1920);

  // flux-jump rows touch only the p blocks; dirichlet rows only the u block
  const long flux_row = 3 * 3000 + 1000;  // first flux row
  CHECK(sys.row_tags[flux_row] == RowTag::FluxJump);
  CHECK(sys.matrix.row(flux_row).segment(0, 2 * m).cwiseAbs().maxCoeff() == 0.0);
  const long dir_row = 3 * 3000 + 2 * 1000;
  CHECK(sys.row_tags[dir_row] == RowTag::Dirichlet);
  CHECK(sys.matrix.row(dir_row).segment(2 * m, 4 * m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mixed interior rows encode p - beta grad u = 0 entrywise") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(40, 3.0, {1.0}, 1.0);
  plan.seed = 13;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const int m = 2;
  std::vector<RandomFeatureNetwork> nets_u = {build_network(1, 2, {m}, 1.0, 1.0),
                                              build_network(2, 2, {m}, 1.0, 1.0)};
  std::vector<std::array<RandomFeatureNetwork, 2>> nets_p;
  for (int s = 0; s < 2; ++s) {
    nets_p.push_back({build_network(10 + s, 2, {m}, 0.7, 2.1),
                      build_network(20 + s, 2, {m}, 0.7, 2.1)});
  }
  const auto sys = assembly::assemble_mixed(bundle.problem, nets_u, nets_p, pts);

  const long n1 = pts.interior.rows();
  const int i = 0;
  const int s = pts.interior_subdomain[i];
  const Mat row_pts = pts.interior.row(i);
  const calculus::FdConfig fd;

  // div row: -d(xi_x)/dx in the p_{s,x} block, rhs f
  const double dpx = calculus::fd_partial(nets_p[s][0], 0, row_pts, fd)(0, 0);
  CHECK(sys.matrix(i, 2 * m + 2 * m * s) == doctest::Approx(-dpx).epsilon(1e-12));
  // gradient-x row: -beta du/dx in the u_s block, +xi_x in the p block
  const double dux = calculus::fd_partial(nets_u[s], 0, row_pts, fd)(0, 0);
  CHECK(sys.matrix(n1 + i, s * m) ==
        doctest::Approx(-bundle.problem.beta[s] * dux).epsilon(1e-12));
  const double xi = randnet::eval_basis(nets_p[s][0], row_pts)(0, 0);
  CHECK(sys.matrix(n1 + i, 2 * m + 2 * m * s) ==
        doctest::Approx(xi).epsilon(1e-14));
  CHECK(sys.rhs[n1 + i] == 0.0);
}

TEST_CASE("space-time shapes follow the boundary/initial split") {
  const auto bundle = problems::make_example(5);
  auto plan = plan_of(5000, 14.0, {3.0}, 2.4, 0.6);
  plan.seed = 14;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 320, 97);
  const auto sys = assembly::assemble_spacetime(bundle.problem, nets, pts);
  // 3500 + 2*750 + 600 + 150 rows by 2m columns
  CHECK(sys.rows() == 5750);
  CHECK(sys.cols() == 640);
  long initial_rows = 0;
  for (const auto tag : sys.row_tags) {
    if (tag == RowTag::Initial) ++initial_rows;
  }
  CHECK(initial_rows == 150);
}

TEST_CASE("space-time pde rows add the time derivative") {
  const auto bundle = problems::make_example(5);
  auto plan = plan_of(60, 14.0, {3.0}, 2.4, 0.6);
  plan.seed = 15;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 1, 98);
  const auto sys = assembly::assemble_spacetime(bundle.problem, nets, pts);

  const int i = 0;
  const int s = pts.interior_subdomain[i];
  const Mat row_pts = pts.interior.row(i);
  const calculus::FdConfig fd;
  const double expected =
      calculus::fd_time_partial(nets[s], row_pts, fd)(0, 0) -
      bundle.problem.beta[s] *
          (calculus::fd_second_partial(nets[s], 0, row_pts, fd)(0, 0) +
           calculus::fd_second_partial(nets[s], 1, row_pts, fd)(0, 0));
  CHECK(sys.matrix(i, s) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("assembly rejects inconsistent inputs") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(50, 3.0, {1.0}, 1.0);
  plan.seed = 16;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);

  // wrong network count
  std::vector<RandomFeatureNetwork> one = {build_network(1, 2, {4}, 1.0, 1.0)};
  CHECK_THROWS_AS(assembly::assemble_elliptic(bundle.problem, one, pts),
                  DimensionMismatch);
  // space-time assembly on a stationary set
  const auto nets = nets_for(bundle.problem, 4, 99);
  CHECK_THROWS_AS(assembly::assemble_spacetime(bundle.problem, nets, pts),
                  DimensionMismatch);
  // mixed form in 3-D
  const auto b3 = problems::make_example(2);
  auto plan3 = plan_of(60, 6.0, {1.0}, 3.0);
  plan3.seed = 17;
  const auto pts3 = sampling::sample_collocation(b3.problem.geom, plan3);
  std::vector<RandomFeatureNetwork> nu = {build_network(1, 3, {4}, 1.0, 1.0),
                                          build_network(2, 3, {4}, 1.0, 1.0)};
  std::vector<std::array<RandomFeatureNetwork, 2>> np;
  np.push_back({build_network(3, 3, {4}, 1.0, 1.0),
                build_network(4, 3, {4}, 1.0, 1.0)});
  np.push_back({build_network(5, 3, {4}, 1.0, 1.0),
                build_network(6, 3, {4}, 1.0, 1.0)});
  CHECK_THROWS_AS(assembly::assemble_mixed(b3.problem, nu, np, pts3),
                  UnsupportedDimension);
}

TEST_CASE("system dump round-trips") {
  const auto bundle = problems::make_example(1);
  auto plan = plan_of(30, 3.0, {1.0}, 1.0);
  plan.seed = 18;
  const auto pts = sampling::sample_collocation(bundle.problem.geom, plan);
  const auto nets = nets_for(bundle.problem, 3, 100);
  const auto sys = assembly::assemble_elliptic(bundle.problem, nets, pts);

  const std::string path = "/tmp/lrnn_test_dump.bin";
  assembly::dump_system(sys, path);
  std::ifstream in(path, std::ios::binary);
  std::int64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  CHECK(rows == sys.rows());
  CHECK(cols == sys.cols());
  Mat read_back(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      double v = 0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      read_back(i, j) = v;
    }
  }
  CHECK(read_back == sys.matrix);
  Vec rhs(rows);
  in.read(reinterpret_cast<char*>(rhs.data()), rows * sizeof(double));
  CHECK(rhs == sys.rhs);
  std::remove(path.c_str());
}

TEST_SUITE_END();
