#include "lrnn/runner.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "lrnn/errors.hpp"
#include "lrnn/rng.hpp"

namespace lrnn::runner {

namespace {

using assembly::SolutionCoefficients;
using config::RunConfig;
using problems::ExampleBundle;
using problems::Formulation;
using randnet::RandomFeatureNetwork;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

sampling::SamplingPlan plan_from_ratios(const geometry::GeometrySpec& geom,
                                        const std::vector<double>& ratios,
                                        int total) {
  const std::size_t expect = geom.interfaces.size() + 2;
  if (ratios.size() != expect) {
    throw InvalidConfig("ratios must list interior, each interface, boundary");
  }
  sampling::SamplingPlan plan;
  plan.total = total;
  plan.interior_weight = ratios.front();
  plan.interface_weights.assign(ratios.begin() + 1, ratios.end() - 1);
  if (geom.space_time()) {
    // the trailing region covers boundary and initial slice, split 4:1
    plan.boundary_weight = ratios.back() * 0.8;
    plan.initial_weight = ratios.back() * 0.2;
  } else {
    plan.boundary_weight = ratios.back();
  }
  return plan;
}

quadrature::QuadratureRule resolve_rule(const RunConfig& cfg,
                                        const ExampleBundle& bundle) {
  quadrature::QuadratureRule rule = bundle.error_rule;
  if (cfg.error_rule) {
    rule.kind = *cfg.error_rule == "mc"
                    ? quadrature::QuadratureRule::Kind::MonteCarlo
                    : quadrature::QuadratureRule::Kind::GaussLegendreTensor;
  }
  if (cfg.error_nodes) rule.nodes_per_axis = *cfg.error_nodes;
  if (cfg.mc_samples) rule.n_samples = *cfg.mc_samples;
  return rule;
}

struct TrialOutput {
  TrialResult result;
  SolutionCoefficients solution;
  sampling::RegionCounts counts;
  long rows = 0;
  long cols = 0;
  std::vector<NetworkInfo> networks;
};

TrialOutput run_trial(const ExampleBundle& bundle, Formulation form,
                      const RunConfig& cfg,
                      const quadrature::QuadratureRule& base_rule,
                      std::uint64_t trial_seed, int trial_index) {
  const auto& prob = bundle.problem;
  const int d = prob.geom.dim();
  const int din = d + (prob.geom.space_time() ? 1 : 0);

  TrialOutput out;
  auto t0 = std::chrono::steady_clock::now();

  sampling::SamplingPlan plan = bundle.plan;
  if (cfg.ratios) {
    plan = plan_from_ratios(prob.geom, *cfg.ratios, bundle.plan.total);
  }
  plan.seed = trial_seed;
  plan.arclength_interface = cfg.arclength_interface;
  const sampling::CollocationSet pts = sampling::sample_collocation(prob.geom, plan);
  out.counts = sampling::stratified_counts(plan);
  out.result.t_sample = seconds_since(t0);

  // Networks: one stream per (subdomain, field).
  t0 = std::chrono::steady_clock::now();
  auto record_net = [&](const std::string& role, const RandomFeatureNetwork& net) {
    out.networks.push_back(NetworkInfo{role, net.seed, net.d_in,
                                       net.hidden_widths, net.r_weight,
                                       net.r_bias});
  };
  std::vector<RandomFeatureNetwork> nets_u;
  std::vector<std::array<RandomFeatureNetwork, 2>> nets_p;
  const auto& u_ranges =
      form == Formulation::EllipticMixed ? bundle.mixed_u_ranges : bundle.u_ranges;
  for (int s = 0; s < prob.geom.n_subdomains; ++s) {
    const std::uint64_t net_seed =
        rng::derive_stream(trial_seed, {rng::kNetworks, static_cast<std::uint64_t>(s), 0});
    nets_u.push_back(randnet::build_network(net_seed, din, {bundle.m},
                                            u_ranges[s].first, u_ranges[s].second));
    record_net("u" + std::to_string(s), nets_u.back());
  }
  if (form == Formulation::EllipticMixed) {
    for (int s = 0; s < prob.geom.n_subdomains; ++s) {
      std::array<RandomFeatureNetwork, 2> pair = {
          randnet::build_network(
              rng::derive_stream(trial_seed,
                                 {rng::kNetworks, static_cast<std::uint64_t>(s), 1}),
              din, {bundle.m}, bundle.mixed_p_ranges[s].first,
              bundle.mixed_p_ranges[s].second),
          randnet::build_network(
              rng::derive_stream(trial_seed,
                                 {rng::kNetworks, static_cast<std::uint64_t>(s), 2}),
              din, {bundle.m}, bundle.mixed_p_ranges[s].first,
              bundle.mixed_p_ranges[s].second)};
      record_net("p" + std::to_string(s) + "x", pair[0]);
      record_net("p" + std::to_string(s) + "y", pair[1]);
      nets_p.push_back(std::move(pair));
    }
  }

  assembly::AssemblyOptions asm_opts;
  asm_opts.fd = cfg.fd;
  asm_opts.gamma = cfg.gamma;
  asm_opts.flux_includes_beta = cfg.flux_includes_beta;

  assembly::BlockSystem sys;
  switch (form) {
    case Formulation::EllipticStrong:
      sys = assembly::assemble_elliptic(prob, nets_u, pts, asm_opts);
      break;
    case Formulation::EllipticMixed:
      sys = assembly::assemble_mixed(prob, nets_u, nets_p, pts, asm_opts);
      break;
    case Formulation::SpaceTime:
      sys = assembly::assemble_spacetime(prob, nets_u, pts, asm_opts);
      break;
  }
  out.rows = sys.rows();
  out.cols = sys.cols();
  if (cfg.dump_system && trial_index == 0) {
    assembly::dump_system(sys, *cfg.dump_system);
  }
  out.result.t_assemble = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  Vec x;
  if (cfg.report_residuals) {
    auto [sol_x, diag] = linsolve::lstsq(Mat(sys.matrix), sys.rhs, cfg.solver);
    x = std::move(sol_x);
    out.result.diagnostics = diag;
    out.result.residuals = assembly::residual(sys, x);
  } else {
    Vec rhs = sys.rhs;
    auto [sol_x, diag] = linsolve::lstsq(std::move(sys.matrix), std::move(rhs),
                                         cfg.solver);
    x = std::move(sol_x);
    out.result.diagnostics = diag;
  }
  out.result.t_solve = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  out.solution = form == Formulation::EllipticMixed
                     ? assembly::split_mixed(x, nets_u, nets_p)
                     : assembly::split_strong(x, nets_u);

  quadrature::QuadratureRule rule = base_rule;
  rule.seed = rng::derive_stream(trial_seed, {rng::kMonteCarlo});
  const SolutionCoefficients& sol = out.solution;
  const quadrature::FieldFn approx = [&sol](const Vec& xq, double t, int s) {
    return sol.eval_u(s, xq, t);
  };
  out.result.error = quadrature::relative_l2_error(approx, prob.exact,
                                                   prob.geom, rule);
  if (form == Formulation::EllipticMixed && prob.exact_flux) {
    const quadrature::VectorFieldFn approx_p = [&sol](const Vec& xq, double t,
                                                      int s) {
      return sol.eval_flux(s, xq, t);
    };
    out.result.flux_error = quadrature::relative_l2_error_flux(
        approx_p, prob.exact_flux, prob.geom, rule);
  }
  out.result.t_evaluate = seconds_since(t0);
  return out;
}

}  // namespace

ExampleBundle resolve_bundle(const RunConfig& cfg) {
  problems::Overrides ov;
  ov.m = cfg.m;
  ov.n_points = cfg.n_points;
  ov.trials = cfg.trials;
  ov.dim = cfg.dim;
  ov.beta = cfg.beta;
  ExampleBundle bundle = problems::make_example(cfg.example, ov);
  if (cfg.r1 || cfg.r2) {
    for (auto& range : bundle.u_ranges) {
      if (cfg.r1) range.first = *cfg.r1;
      if (cfg.r2) range.second = *cfg.r2;
    }
    for (auto& range : bundle.mixed_u_ranges) {
      if (cfg.r1) range.first = *cfg.r1;
      if (cfg.r2) range.second = *cfg.r2;
    }
  }
  if (cfg.r3 || cfg.r4) {
    for (auto& range : bundle.mixed_p_ranges) {
      if (cfg.r3) range.first = *cfg.r3;
      if (cfg.r4) range.second = *cfg.r4;
    }
  }
  return bundle;
}

Formulation resolve_form(const RunConfig& cfg, const ExampleBundle& bundle) {
  if (cfg.form == "auto") return bundle.default_form;
  if (cfg.form == "strong") {
    if (bundle.default_form == Formulation::SpaceTime) {
      throw InvalidConfig("parabolic benchmarks use the space-time form");
    }
    return Formulation::EllipticStrong;
  }
  if (cfg.form == "mixed") {
    if (!bundle.has_mixed_defaults) {
      throw InvalidConfig("no mixed-form setup shipped for this benchmark");
    }
    return Formulation::EllipticMixed;
  }
  if (cfg.form == "spacetime") {
    if (bundle.default_form != Formulation::SpaceTime) {
      throw InvalidConfig("space-time form applies to the parabolic benchmarks");
    }
    return Formulation::SpaceTime;
  }
  throw InvalidConfig("form must be auto, strong, mixed or spacetime");
}

RunManifest run(const RunConfig& cfg, const RunOptions& opts) {
  const ExampleBundle bundle = resolve_bundle(cfg);
  const Formulation form = resolve_form(cfg, bundle);
  const quadrature::QuadratureRule rule = resolve_rule(cfg, bundle);

  RunManifest manifest;
  manifest.example_id = bundle.id;
  manifest.example_name = bundle.name;
  manifest.form = form;
  manifest.m = bundle.m;
  manifest.trials = bundle.trials;
  manifest.base_seed = cfg.seed;
  manifest.beta = bundle.problem.beta;
  manifest.error_rule = rule;
  manifest.solver = cfg.solver;
  manifest.fd = cfg.fd;
  manifest.gamma = cfg.gamma;

  std::vector<TrialOutput> outputs(bundle.trials);
  auto execute = [&](int k) {
    outputs[k] = run_trial(bundle, form, cfg, rule, cfg.seed + k, k);
  };
  if (cfg.parallel_trials && bundle.trials > 1) {
    std::vector<std::future<void>> futures;
    futures.reserve(bundle.trials);
    for (int k = 0; k < bundle.trials; ++k) {
      futures.push_back(std::async(std::launch::async, execute, k));
    }
    for (auto& f : futures) f.get();
  } else {
    for (int k = 0; k < bundle.trials; ++k) execute(k);
  }

  manifest.counts = outputs[0].counts;
  manifest.system_rows = outputs[0].rows;
  manifest.system_cols = outputs[0].cols;
  manifest.networks = outputs[0].networks;
  double err_sum = 0.0, flux_sum = 0.0;
  bool any_flux = false;
  for (auto& o : outputs) {
    err_sum += o.result.error;
    if (o.result.flux_error) {
      flux_sum += *o.result.flux_error;
      any_flux = true;
    }
    manifest.trial_results.push_back(o.result);
    if (opts.keep_solutions) manifest.solutions.push_back(std::move(o.solution));
  }
  manifest.mean_error = err_sum / bundle.trials;
  if (any_flux) manifest.mean_flux_error = flux_sum / bundle.trials;
  return manifest;
}

void write_run_outputs(const RunManifest& manifest, const std::string& dir) {
  std::filesystem::create_directories(dir);

  {
    std::ofstream csv(dir + "/errors.csv");
    const bool flux = manifest.mean_flux_error.has_value();
    csv << "trial,error" << (flux ? ",flux_error" : "")
        << ",rank,sigma_max,sigma_min_kept,residual_norm\n";
    for (std::size_t k = 0; k < manifest.trial_results.size(); ++k) {
      const TrialResult& r = manifest.trial_results[k];
      csv << k << "," << format_g17(r.error);
      if (flux) csv << "," << format_g17(r.flux_error.value_or(0.0));
      csv << "," << r.diagnostics.rank << ","
          << format_g17(r.diagnostics.sigma_max) << ","
          << format_g17(r.diagnostics.sigma_min_kept) << ","
          << format_g17(r.diagnostics.residual_norm) << "\n";
    }
  }

  std::ofstream out(dir + "/manifest.txt");
  out << "example = " << manifest.example_id << " (" << manifest.example_name
      << ")\n";
  const char* form_name =
      manifest.form == Formulation::EllipticStrong
          ? "strong"
          : (manifest.form == Formulation::EllipticMixed ? "mixed" : "spacetime");
  out << "form = " << form_name << "\n";
  out << "m = " << manifest.m << "\n";
  out << "trials = " << manifest.trials << "\n";
  out << "seed = " << manifest.base_seed << "\n";
  out << "beta =";
  for (double b : manifest.beta) out << " " << format_g17(b);
  out << "\n";
  out << "counts = interior " << manifest.counts.interior << ", interface";
  for (int c : manifest.counts.interfaces) out << " " << c;
  out << ", boundary " << manifest.counts.boundary << ", initial "
      << manifest.counts.initial << "\n";
  out << "system = " << manifest.system_rows << " x " << manifest.system_cols
      << "\n";
  out << "gamma = " << manifest.gamma.jump << " " << manifest.gamma.flux_jump
      << " " << manifest.gamma.dirichlet << " " << manifest.gamma.initial << "\n";
  out << "fd.h1 = " << format_g17(manifest.fd.h1) << "\n";
  out << "fd.h2 = " << format_g17(manifest.fd.h2) << "\n";
  out << "solver.method = "
      << (manifest.solver.method == linsolve::Method::Svd
              ? "svd"
              : (manifest.solver.method == linsolve::Method::Qr ? "qr" : "normal"))
      << "\n";
  out << "solver.rcond = " << format_g17(manifest.solver.rcond) << "\n";
  out << "error.rule = "
      << (manifest.error_rule.kind ==
                  quadrature::QuadratureRule::Kind::GaussLegendreTensor
              ? "gl"
              : "mc")
      << "\n";
  out << "error.nodes = " << manifest.error_rule.nodes_per_axis << "\n";
  out << "error.mc_samples = " << manifest.error_rule.n_samples << "\n";
  for (const NetworkInfo& net : manifest.networks) {
    out << "network." << net.role << " = seed " << net.seed << ", shape "
        << net.d_in;
    for (int w : net.hidden_widths) out << "x" << w;
    out << ", ranges (" << format_g17(net.r_weight) << ", "
        << format_g17(net.r_bias) << ")\n";
  }
  for (std::size_t k = 0; k < manifest.trial_results.size(); ++k) {
    const TrialResult& r = manifest.trial_results[k];
    out << "trial." << k << ".error = " << format_g17(r.error) << "\n";
    if (r.flux_error) {
      out << "trial." << k << ".flux_error = " << format_g17(*r.flux_error)
          << "\n";
    }
    out << "trial." << k << ".rank = " << r.diagnostics.rank << "\n";
    for (const auto& [tag, rms] : r.residuals) {
      out << "trial." << k << ".residual." << assembly::row_tag_name(tag)
          << " = " << format_g17(rms) << "\n";
    }
  }
  out << "mean_error = " << format_g17(manifest.mean_error) << "\n";
  if (manifest.mean_flux_error) {
    out << "mean_flux_error = " << format_g17(*manifest.mean_flux_error) << "\n";
  }
  // timing lines are excluded from determinism guarantees
  double ts = 0, ta = 0, tl = 0, te = 0;
  for (const TrialResult& r : manifest.trial_results) {
    ts += r.t_sample;
    ta += r.t_assemble;
    tl += r.t_solve;
    te += r.t_evaluate;
  }
  out << "time.sample = " << ts << "\n";
  out << "time.assemble = " << ta << "\n";
  out << "time.solve = " << tl << "\n";
  out << "time.evaluate = " << te << "\n";
}

SweepResult sweep(const RunConfig& cfg, const std::vector<int>& m_values,
                  const std::vector<int>& n_values) {
  if (m_values.empty() || n_values.empty()) {
    throw InvalidConfig("sweep needs non-empty m and N grids");
  }
  SweepResult result;
  result.m_values = m_values;
  result.n_values = n_values;
  result.mean_errors.resize(n_values.size(), m_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    for (std::size_t j = 0; j < m_values.size(); ++j) {
      RunConfig cell = cfg;
      cell.m = m_values[j];
      cell.n_points = n_values[i];
      result.mean_errors(i, j) = run(cell).mean_error;
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  out << "N\\m";
  for (int m : result.m_values) out << "," << m;
  out << "\n";
  for (std::size_t i = 0; i < result.n_values.size(); ++i) {
    out << result.n_values[i];
    for (std::size_t j = 0; j < result.m_values.size(); ++j) {
      out << "," << format_g17(result.mean_errors(i, j));
    }
    out << "\n";
  }
}

void dump_grid(const quadrature::FieldFn& field,
               const assembly::ProblemDefinition& prob, int resolution,
               const std::string& dir) {
  if (resolution < 2) throw InvalidConfig("grid resolution must be >= 2");
  std::filesystem::create_directories(dir);
  const auto& geom = prob.geom;
  const int d = geom.dim();

  std::vector<double> slices{0.0};
  if (geom.space_time()) {
    slices = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (double& t : slices) t *= *geom.time_horizon;
  }

  for (double t : slices) {
    std::string path = dir + "/grid.csv";
    if (geom.space_time()) {
      std::ostringstream name;
      name << dir << "/grid_t" << t << ".csv";
      path = name.str();
    }
    std::ofstream out(path);
    const char axis_names[] = {'x', 'y', 'z'};
    for (int k = 0; k < d; ++k) {
      out << (k < 3 ? std::string(1, axis_names[k]) : "x" + std::to_string(k))
          << ",";
    }
    out << "value,exact,abs_err,subdomain\n";

    std::vector<int> idx(d, 0);
    Vec x(d);
    while (true) {
      for (int k = 0; k < d; ++k) {
        x[k] = geom.box.lo[k] +
               geom.box.extent(k) * idx[k] / static_cast<double>(resolution - 1);
      }
      const int s = geometry::classify_point_robust(geom, x, t);
      const double v = field(x, t, s);
      const double e = prob.exact ? prob.exact(x, t, s)
                                  : std::numeric_limits<double>::quiet_NaN();
      for (int k = 0; k < d; ++k) out << format_g17(x[k]) << ",";
      out << format_g17(v) << "," << format_g17(e) << ","
          << format_g17(std::abs(v - e)) << "," << s << "\n";

      int k = 0;
      for (; k < d; ++k) {
        if (++idx[k] < resolution) break;
        idx[k] = 0;
      }
      if (k == d) break;
    }
  }
}

std::vector<double> slice_errors(const assembly::SolutionCoefficients& sol,
                                 const assembly::ProblemDefinition& prob,
                                 int nodes_per_axis) {
  if (!prob.geom.space_time()) {
    throw InvalidConfig("slice errors apply to space-time problems");
  }
  quadrature::QuadratureRule rule;
  rule.nodes_per_axis = nodes_per_axis;
  const quadrature::FieldFn approx = [&sol](const Vec& x, double t, int s) {
    return sol.eval_u(s, x, t);
  };
  std::vector<double> out;
  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double t = frac * *prob.geom.time_horizon;
    out.push_back(quadrature::relative_l2_error(approx, prob.exact, prob.geom,
                                                rule, t));
  }
  return out;
}

}  // namespace lrnn::runner
