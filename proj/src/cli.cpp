#include "nbarrier/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "nbarrier/barrier.hpp"
#include "nbarrier/errors.hpp"
#include "nbarrier/io.hpp"
#include "nbarrier/model.hpp"
#include "nbarrier/nonexistence.hpp"
#include "nbarrier/tangent.hpp"
#include "nbarrier/verify.hpp"
#include "nbarrier/waves.hpp"

namespace nbarrier::cli {
namespace {

spdlog::level::level_enum level_from_env() {
  const char* env = std::getenv("NBARRIER_LOG");
  if (env == nullptr) return spdlog::level::info;
  const std::string v(env);
  if (v == "quiet") return spdlog::level::err;
  if (v == "debug") return spdlog::level::debug;
  return spdlog::level::info;
}

std::shared_ptr<spdlog::logger> make_logger(spdlog::sink_ptr sink) {
  auto log = std::make_shared<spdlog::logger>("nbarrier", std::move(sink));
  log->set_pattern("nbarrier: %l: %v");
  log->set_level(level_from_env());
  return log;
}

// The logger of the command being run; run() is not reentrant per thread.
thread_local std::shared_ptr<spdlog::logger> tl_log;

spdlog::logger& log() { return *tl_log; }

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd require_vector(const std::vector<double>& v, int n, const char* flag) {
  if (v.empty()) throw ValidationError(std::string(flag) + " is required");
  if (static_cast<int>(v.size()) != n) {
    throw DimensionError(std::string(flag) + " must have " + std::to_string(n) + " entries");
  }
  return to_vector(v);
}

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw ValidationError("--seed is required for sampling commands");
  return *c.seed;
}

LVSystem load(const RunConfig& c) {
  if (c.system_path.empty()) throw ValidationError("--system is required");
  try {
    return load_system(c.system_path);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("--system: ") + e.what());
  }
}

Composition parse_rule(const std::string& r) {
  if (r == "diffusion_scaled") return Composition::diffusion_scaled;
  if (r == "reweighted") return Composition::reweighted;
  throw ValidationError("--rule must be diffusion_scaled or reweighted");
}

DiffusionRange parse_range(const std::string& r) {
  if (r == "all") return DiffusionRange::all_four;
  if (r == "first3") return DiffusionRange::first_three;
  throw ValidationError("--d-range must be all or first3");
}

TwoSpeciesParams tangent_params(const RunConfig& c) {
  TwoSpeciesParams p;
  p.alpha = c.t_alpha;
  p.beta = c.t_beta;
  p.d = c.t_d;
  p.k = c.t_k;
  p.a1 = c.t_a1;
  p.a2 = c.t_a2;
  p.validate();
  return p;
}

// Writes to the configured path, or to `out` when none is set.
void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output_path, std::ios::binary);
  if (!f) throw ValidationError("--output: cannot write '" + c.output_path + "'");
  f << text;
}

void emit_json(const RunConfig& c, std::ostream& out, const json& j) {
  emit(c, out, j.dump(2) + "\n");
}

void write_file(const std::string& path, const std::string& text, const char* flag) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError(std::string(flag) + ": cannot write '" + path + "'");
  f << text;
}

int cmd_equilibria(const RunConfig& c, std::ostream& out) {
  const LVSystem sys = load(c);
  const EquilibriumSet set = enumerate_equilibria(sys);
  emit_json(c, out, json(set));
  log().info("equilibria: {} points, {} singular supports", set.points.size(),
             set.diagnostics.size());
  return kOk;
}

int cmd_box(const RunConfig& c, std::ostream& out) {
  const LVSystem sys = load(c);
  const HypothesisBox box = lv_box(sys);
  json j = box;
  int code = kOk;
  if (c.samples > 0) {
    const auto report = check_hypothesis_H(sys, box, c.samples, require_seed(c));
    j["hypothesis"] = report;
    if (!report.holds) code = kViolation;
    log().info("box: hypothesis {} ({} inner, {} outer samples)",
               report.holds ? "holds" : "violated", report.inner_checked, report.outer_checked);
  } else {
    log().info("box: computed for {} species", sys.n());
  }
  emit_json(c, out, j);
  return code;
}

int chi_from(const RunConfig& c, int n) {
  if (c.e_minus.empty() && c.e_plus.empty()) return 1;
  return chi(require_vector(c.e_minus, n, "--e-minus"), require_vector(c.e_plus, n, "--e-plus"),
             c.chi_tol);
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
  const LVSystem sys = load(c);
  const Eigen::VectorXd alpha = require_vector(c.alpha, sys.n(), "--alpha");
  const HypothesisBox box = lv_box(sys);
  const Bounds b = nbmp_bounds(box, sys.d(), alpha, chi_from(c, sys.n()));
  json j = b;
  j["alpha"] = vector_to_json(alpha);
  j["box"] = box;
  emit_json(c, out, j);
  log().info("bounds: [{}, {}]", b.lambda_lower, b.lambda_upper);
  return kOk;
}

int cmd_barrier(const RunConfig& c, std::ostream& out) {
  const LVSystem sys = load(c);
  const Eigen::VectorXd alpha = require_vector(c.alpha, sys.n(), "--alpha");
  if (c.kind != "lower" && c.kind != "upper" && c.kind != "both") {
    throw ValidationError("--kind must be lower, upper or both");
  }
  const HypothesisBox box = lv_box(sys);
  json j = json::object();
  std::size_t broken = 0;
  auto add = [&](const BarrierTriple& t, const char* key) {
    json tj = t;
    json nv = json::array();
    for (const auto& v : nesting_violations(t, box, sys.d())) {
      nv.push_back({{"species", v.species + 1}, {"link", v.link}});
    }
    broken += nv.size();
    tj["nesting_violations"] = nv;
    j[key] = tj;
  };
  if (c.kind != "upper") add(lower_barrier(box, sys.d(), alpha), "lower");
  if (c.kind != "lower") add(upper_barrier(box, sys.d(), alpha), "upper");
  emit_json(c, out, j);
  log().info("barrier: {} nesting violations", broken);
  return broken == 0 ? kOk : kViolation;
}

void write_tangent_plot(const std::string& path, const TwoSpeciesParams& p,
                        const ImprovedBound& ib, int points) {
  if (points < 2) throw ValidationError("--plot-points must be >= 2");
  std::ostringstream s;
  s << "series,u,v\n";
  for (int i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / (points - 1);
    s << "L," << format_double(u) << ',' << format_double(hyperbola_v(u, p)) << '\n';
  }
  // Each barrier line through its two axis intercepts.
  auto line = [&](const char* name, double level, double wu, double wv) {
    s << name << ',' << format_double(level / wu) << ",0\n";
    s << name << ",0," << format_double(level / wv) << '\n';
  };
  line("lambda2", ib.lambda2, p.alpha, p.d * p.beta);
  line("eta", ib.eta, p.alpha, p.beta);
  line("lambda1", ib.lambda1, p.alpha, p.d * p.beta);
  write_file(path, s.str(), "--plot");
}

int cmd_tangent(const RunConfig& c, std::ostream& out) {
  const TwoSpeciesParams p = tangent_params(c);
  const Composition rule = parse_rule(c.rule);
  const TangencyResult t = tangent_lambda2(p);
  const ImprovedBound ib = improved_barrier(p, rule);
  const BoundComparison cmp = compare_bounds(p, rule);
  const EndpointSlopes es = endpoint_slopes(p);

  json j = t;
  j["params"] = {{"alpha", p.alpha}, {"beta", p.beta}, {"d", p.d},
                 {"k", p.k},         {"a1", p.a1},     {"a2", p.a2}};
  j["rule"] = c.rule;
  j["barrier_slope"] = barrier_slope(p);
  j["endpoint_slopes"] = {{"at_zero", es.at_zero}, {"at_one", es.at_one}};
  j["improved"] = ib;
  j["comparison"] = cmp;
  if (c.samples > 0) {
    j["containment_sup"] = containment_sup(p, c.samples, require_seed(c));
  }
  if (!c.plot_path.empty()) write_tangent_plot(c.plot_path, p, ib, c.plot_points);
  emit_json(c, out, j);
  log().info("tangent: case {}, lambda2 = {}", to_string(t.case_id), t.lambda2);
  return kOk;
}

int cmd_nonexist(const RunConfig& c, std::ostream& out) {
  const LVSystem sys = load(c);
  const DiffusionRange range = parse_range(c.d_range);
  const NonexistenceCertificate cert =
      c.sigma4 ? certificate_at(sys, *c.sigma4, range) : check_nonexistence(sys, range);
  json j = cert;
  if (c.threshold) j["sigma4_threshold"] = sigma4_threshold(sys, range);
  emit_json(c, out, j);
  log().info("nonexist: {}", to_string(cert.verdict));
  return cert.verdict == Verdict::certified_nonexistent ? kOk : kInconclusive;
}

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig cfg;
  cfg.newton_tol = c.newton_tol;
  cfg.max_iters = c.max_iters;
  cfg.continuation_steps = c.continuation;
  cfg.validate();
  return cfg;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  LVSystem sys = load(c);
  if (c.theta) sys = sys.with_theta(*c.theta);
  const Eigen::VectorXd em = require_vector(c.e_minus, sys.n(), "--e-minus");
  const Eigen::VectorXd ep = require_vector(c.e_plus, sys.n(), "--e-plus");
  if (c.refine < 1) throw ValidationError("--refine must be >= 1");
  const SolverConfig cfg = solver_config(c);
  const Grid grid(c.half_length, c.spacing);

  SolveResult res = solve_wave(sys, em, ep, grid, cfg, c.width);
  log().debug("solve: coarse grid converged in {} iterations", res.diagnostics.iterations);
  if (c.refine > 1) res = refine(res.profile, c.refine, sys, cfg);

  std::ostringstream csv;
  write_profile_csv(csv, res.profile);
  const json meta = profile_metadata(res.profile);
  std::string meta_path = c.meta_path;
  if (meta_path.empty() && !c.output_path.empty()) meta_path = c.output_path + ".meta.json";
  if (!meta_path.empty()) write_file(meta_path, meta.dump(2) + "\n", "--meta");
  emit(c, out, csv.str());
  if (!c.output_path.empty()) {
    json summary = meta;
    summary["diagnostics"] = res.diagnostics;
    out << summary.dump(2) << "\n";
  }
  log().info("solve: {} points, residual {}", res.profile.points(), res.profile.residual_norm);
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const LVSystem sys = load(c);
  if (c.profile_path.empty()) throw ValidationError("--profile is required");
  std::ifstream in(c.profile_path);
  if (!in) throw ValidationError("--profile: cannot open '" + c.profile_path + "'");
  WaveProfile prof;
  try {
    prof = read_profile_csv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("--profile: ") + e.what());
  }
  std::string meta_path = c.meta_path;
  if (meta_path.empty() && std::filesystem::exists(c.profile_path + ".meta.json")) {
    meta_path = c.profile_path + ".meta.json";
  }
  if (!meta_path.empty()) {
    std::ifstream mf(meta_path);
    if (!mf) throw ValidationError("--meta: cannot open '" + meta_path + "'");
    json meta;
    try {
      mf >> meta;
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("--meta: invalid JSON: ") + e.what());
    }
    apply_profile_metadata(prof, meta);
  }
  if (prof.species() != sys.n()) {
    throw DimensionError("--profile has " + std::to_string(prof.species()) +
                         " species, the system has " + std::to_string(sys.n()));
  }
  const Eigen::VectorXd alpha = require_vector(c.alpha, sys.n(), "--alpha");
  const HypothesisBox box = lv_box(sys);
  const Bounds b = nbmp_bounds(box, sys.d(), alpha, chi(prof.e_minus, prof.e_plus, c.chi_tol));
  const double h = prof.spacing();
  const double tol = c.tol ? *c.tol : 10.0 * h * h;

  BoundsReport report;
  if (c.barriers) {
    const BarrierPair pair{lower_barrier(box, sys.d(), alpha), upper_barrier(box, sys.d(), alpha),
                           sys.d()};
    report = verify_bounds(prof, alpha, b, tol, &pair);
  } else {
    report = verify_bounds(prof, alpha, b, tol);
  }
  json j = report;
  j["chi"] = b.chi;
  emit_json(c, out, j);
  log().info("verify: {} ({} violations)", report.pass ? "pass" : "FAIL",
             report.violations.size());
  return report.pass ? kOk : kViolation;
}

void set_tangent_param(TwoSpeciesParams& p, const std::string& name, double v) {
  if (name == "alpha") p.alpha = v;
  else if (name == "beta") p.beta = v;
  else if (name == "d") p.d = v;
  else if (name == "k") p.k = v;
  else if (name == "a1") p.a1 = v;
  else if (name == "a2") p.a2 = v;
  else throw ValidationError("--param must be one of alpha, beta, d, k, a1, a2 for tangent sweeps");
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const std::vector<double> values = sweep_values(c.from, c.to, c.step);
  if (values.empty()) throw ValidationError("--from/--to/--step give an empty range");
  std::ostringstream s;
  if (c.target == "tangent") {
    const Composition rule = parse_rule(c.rule);
    TwoSpeciesParams p = tangent_params(c);
    set_tangent_param(p, c.param, values.front());
    s << c.param << ",case_id,lambda2,improved,baseline,polyhedral\n";
    for (double v : values) {
      set_tangent_param(p, c.param, v);
      p.validate();
      const TangencyResult t = tangent_lambda2(p);
      const BoundComparison cmp = compare_bounds(p, rule);
      s << format_double(v) << ',' << to_string(t.case_id) << ',' << format_double(t.lambda2)
        << ',' << format_double(cmp.improved) << ',' << format_double(cmp.baseline) << ','
        << format_double(cmp.polyhedral) << '\n';
    }
  } else if (c.target == "nonexist") {
    if (c.param != "sigma4") throw ValidationError("--param must be sigma4 for nonexist sweeps");
    const LVSystem sys = load(c);
    const DiffusionRange range = parse_range(c.d_range);
    s << "sigma4,verdict,h1_holds,h2_lhs\n";
    for (double v : values) {
      const NonexistenceCertificate cert = certificate_at(sys, v, range);
      s << format_double(v) << ',' << to_string(cert.verdict) << ','
        << (cert.h1_holds ? "true" : "false") << ',' << format_double(cert.h2_lhs) << '\n';
    }
  } else {
    throw ValidationError("--target must be tangent or nonexist");
  }
  emit(c, out, s.str());
  log().info("sweep: {} rows over {}", values.size(), c.param);
  return kOk;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.command == "equilibria") return cmd_equilibria(c, out);
  if (c.command == "box") return cmd_box(c, out);
  if (c.command == "bounds") return cmd_bounds(c, out);
  if (c.command == "barrier") return cmd_barrier(c, out);
  if (c.command == "tangent") return cmd_tangent(c, out);
  if (c.command == "nonexist") return cmd_nonexist(c, out);
  if (c.command == "solve") return cmd_solve(c, out);
  if (c.command == "verify") return cmd_verify(c, out);
  if (c.command == "sweep") return cmd_sweep(c, out);
  throw ValidationError("unknown command '" + c.command + "'");
}

int run_with(const RunConfig& c, std::ostream& out, std::shared_ptr<spdlog::logger> logger) {
  auto previous = tl_log;
  tl_log = std::move(logger);
  int code = kFailure;
  try {
    code = dispatch(c, out);
  } catch (const ConvergenceError& e) {
    log().error("{} (iterations {}, residual {})", e.what(), e.iterations(), e.norm());
    code = kNonConvergence;
  } catch (const ValidationError& e) {
    log().error("{}", e.what());
    code = kValidation;
  } catch (const std::exception& e) {
    log().error("{}", e.what());
    code = kFailure;
  }
  tl_log = std::move(previous);
  return code;
}

void add_system(CLI::App* sub, RunConfig& c) {
  sub->add_option("--system", c.system_path, "LV system JSON file");
}

void add_alpha(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.alpha, "positive weights, comma separated")->delimiter(',');
}

void add_states(CLI::App* sub, RunConfig& c) {
  sub->add_option("--e-minus", c.e_minus, "state at -infinity")->delimiter(',');
  sub->add_option("--e-plus", c.e_plus, "state at +infinity")->delimiter(',');
}

void add_tangent_params(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.t_alpha, "weight of u");
  sub->add_option("--beta", c.t_beta, "weight of v");
  sub->add_option("--d", c.t_d, "diffusion ratio d2/d1");
  sub->add_option("--k", c.t_k, "growth ratio");
  sub->add_option("--a1", c.t_a1, "competition of v on u");
  sub->add_option("--a2", c.t_a2, "competition of u on v");
  sub->add_option("--rule", c.rule, "diffusion_scaled or reweighted");
}

}  // namespace

std::vector<double> sweep_values(double from, double to, double step) {
  std::vector<double> v;
  if (!(step > 0.0) || !(to >= from) || !std::isfinite(from) || !std::isfinite(to)) return v;
  const auto count = static_cast<long long>(std::floor((to - from) / step + 1e-9)) + 1;
  v.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) v.push_back(from + static_cast<double>(i) * step);
  return v;
}

int run(const RunConfig& config, std::ostream& out) {
  return run_with(config, out, make_logger(std::make_shared<spdlog::sinks::stderr_sink_st>()));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"N-barrier bounds for Lotka-Volterra traveling waves", "nbarrier"};
  app.require_subcommand(1);
  // -h is left free for the grid spacing.
  app.set_help_flag("--help", "print help and exit");

  std::uint64_t seed = 0;
  double sigma4 = 0.0;
  double theta = 0.0;
  double tol = 0.0;
  std::vector<std::pair<CLI::Option*, std::function<void()>>> optionals;
  auto add_seed = [&](CLI::App* sub) {
    auto* o = sub->add_option("--seed", seed, "RNG seed (required when sampling)");
    optionals.emplace_back(o, [&] { c.seed = seed; });
  };

  auto* eq = app.add_subcommand("equilibria", "nonnegative equilibria");
  add_system(eq, c);

  auto* box = app.add_subcommand("box", "hypothesis box and sampled check");
  add_system(box, c);
  box->add_option("--samples", c.samples, "samples per region (0: no check)");
  add_seed(box);

  auto* bounds = app.add_subcommand("bounds", "lower and upper bounds on sum alpha_i u_i");
  add_system(bounds, c);
  add_alpha(bounds, c);
  add_states(bounds, c);
  bounds->add_option("--chi-tol", c.chi_tol, "extinction tolerance for chi");

  auto* barrier = app.add_subcommand("barrier", "N-barrier levels");
  add_system(barrier, c);
  add_alpha(barrier, c);
  barrier->add_option("--kind", c.kind, "lower, upper or both");

  auto* tangent = app.add_subcommand("tangent", "tangent-line barrier for two species");
  add_tangent_params(tangent, c);
  tangent->add_option("--plot", c.plot_path, "CSV with the curve and barrier lines");
  tangent->add_option("--plot-points", c.plot_points, "curve samples");
  tangent->add_option("--samples", c.samples, "containment oracle samples (0: skip)");
  add_seed(tangent);

  auto* nonexist = app.add_subcommand("nonexist", "four-species nonexistence certificate");
  add_system(nonexist, c);
  auto* s4 = nonexist->add_option("--sigma4", sigma4, "override sigma_4");
  optionals.emplace_back(s4, [&] { c.sigma4 = sigma4; });
  nonexist->add_option("--d-range", c.d_range, "all or first3");
  nonexist->add_flag("--threshold", c.threshold, "also bisect for the sigma_4 threshold");

  auto* solve = app.add_subcommand("solve", "traveling-wave profile");
  add_system(solve, c);
  add_states(solve, c);
  solve->add_option("--L", c.half_length, "half-length of the domain");
  solve->add_option("--h", c.spacing, "grid spacing");
  auto* th = solve->add_option("--theta", theta, "override the wave speed");
  optionals.emplace_back(th, [&] { c.theta = theta; });
  solve->add_option("--width", c.width, "initial guess width");
  solve->add_option("--refine", c.refine, "refinement factor after the first solve");
  solve->add_option("--continuation", c.continuation, "speed homotopy steps");
  solve->add_option("--newton-tol", c.newton_tol, "residual target");
  solve->add_option("--max-iters", c.max_iters, "Newton iteration limit");
  solve->add_option("--meta", c.meta_path, "metadata sidecar path");

  auto* verify = app.add_subcommand("verify", "check a profile against the bounds");
  add_system(verify, c);
  add_alpha(verify, c);
  verify->add_option("--profile", c.profile_path, "profile CSV");
  verify->add_option("--meta", c.meta_path, "metadata sidecar path");
  auto* vt = verify->add_option("--tol", tol, "tolerance (default 10 h^2)");
  optionals.emplace_back(vt, [&] { c.tol = tol; });
  verify->add_flag("--barriers", c.barriers, "also check the barrier levels");
  verify->add_option("--chi-tol", c.chi_tol, "extinction tolerance for chi");

  auto* sweep = app.add_subcommand("sweep", "one-parameter sweep to CSV");
  sweep->add_option("--target", c.target, "tangent or nonexist");
  sweep->add_option("--param", c.param, "swept parameter")->required();
  sweep->add_option("--from", c.from, "first value")->required();
  sweep->add_option("--to", c.to, "last value")->required();
  sweep->add_option("--step", c.step, "increment")->required();
  add_system(sweep, c);
  add_tangent_params(sweep, c);
  sweep->add_option("--d-range", c.d_range, "all or first3");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    sub->add_option("--output,-o", c.output_path, "output file (default: standard output)");
  }

  auto logger = make_logger(std::make_shared<spdlog::sinks::ostream_sink_st>(err));
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    logger->error("{}", e.what());
    return kValidation;
  }
  for (auto& [opt, apply] : optionals) {
    if (opt->count() > 0) apply();
  }
  c.command = app.get_subcommands().front()->get_name();
  return run_with(c, out, logger);
}

}  // namespace nbarrier::cli
