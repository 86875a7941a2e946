#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "finsler/closed_form.hpp"
#include "finsler/finite_difference.hpp"
#include "finsler/io.hpp"
#include "finsler/random.hpp"
#include "finsler/shooting.hpp"
#include "finsler/spectral.hpp"

namespace finsler::cli {

using io::Json;
using variational::PMetric;

namespace {

// Tolerances of the verify suite.
constexpr double kDriftTol = 1e-8;
constexpr double kElTol = 1e-6;
constexpr double kLegendreTol = 1e-9;
constexpr double kTransportTol = 1e-6;
constexpr double kSecondVariationFloor = -1e-8;

struct Inputs {
  Eigen::Index n = 0;
  std::optional<Matrix> g0;
  std::optional<Matrix> v0;
  std::optional<Matrix> g1;
};

bool is_named_literal(const std::string& s) { return s == "identity" || s == "zero"; }

/// Loads the matrix arguments; identity/zero literals take their size from
/// --N or from the other inputs.
Inputs load_inputs(const RunSpec& spec) {
  struct Slot {
    const std::string* literal;
    const std::string* file;
    std::optional<Matrix>* target;
  };
  Inputs in;
  const std::vector<Slot> slots = {{&spec.g0, &spec.g0_file, &in.g0},
                                   {&spec.v0, &spec.v0_file, &in.v0},
                                   {&spec.g1, &spec.g1_file, &in.g1}};
  std::optional<Eigen::Index> n;
  if (spec.N) n = *spec.N;
  for (const auto& s : slots) {
    if (!s.file->empty()) {
      *s.target = io::read_matrix_file(*s.file);
    } else if (!s.literal->empty() && !is_named_literal(*s.literal)) {
      *s.target = io::parse_matrix_literal(*s.literal, 0);
    } else {
      continue;
    }
    const Matrix& m = **s.target;
    if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "input matrix is not square");
    if (n && *n != m.rows()) throw Error(ErrorKind::dimension_mismatch, "input sizes disagree");
    n = m.rows();
  }
  for (const auto& s : slots) {
    if (s.target->has_value() || s.literal->empty()) continue;
    if (!n) throw Error(ErrorKind::parse, "cannot infer N; pass --N");
    *s.target = io::parse_matrix_literal(*s.literal, *n);
  }
  in.n = n.value_or(0);
  return in;
}

const Matrix& require(const std::optional<Matrix>& m, const char* name) {
  if (!m) throw Error(ErrorKind::parse, std::string("missing required matrix --") + name);
  return *m;
}

ode::IntegratorConfig integrator(const RunSpec& spec) {
  ode::IntegratorConfig cfg;
  cfg.step = spec.step;
  if (spec.adaptive) cfg.method = ode::Method::rk45_adaptive;
  cfg.validate();
  return cfg;
}

shooting::ShootingConfig shooting_config(const RunSpec& spec) {
  shooting::ShootingConfig cfg;
  cfg.seed = spec.seed;
  cfg.max_iters = spec.max_iters;
  cfg.restarts = spec.restarts;
  cfg.validate();
  return cfg;
}

double max_operator_norm(const std::vector<Matrix>& xs) {
  double out = 0.0;
  for (const auto& x : xs) out = std::max(out, linalg::operator_norm(x));
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

struct Emit {
  Json json;
  std::string text;
  int code = kExitOk;
};

Emit emit_json(Json j, int code = kExitOk) { return Emit{std::move(j), {}, code}; }

// ---------------------------------------------------------------- commands

Emit cmd_geodesic(const RunSpec& spec) {
  const Inputs in = load_inputs(spec);
  const GroupElement g0(require(in.g0, "g0"));
  const auto traj =
      flow::geodesic_ivp(g0, require(in.v0, "v0"), PMetric(spec.p), spec.T, integrator(spec));
  if (spec.format == Format::csv) {
    std::ostringstream os;
    io::write_trajectory_csv(os, traj, io::parse_stream(spec.stream));
    return Emit{{}, os.str(), kExitOk};
  }
  return emit_json(io::trajectory_to_json(traj));
}

Emit cmd_exp(const RunSpec& spec) {
  const Inputs in = load_inputs(spec);
  const GroupElement g0(require(in.g0, "g0"));
  const Matrix& v = require(in.v0, "v0");
  const PMetric m(spec.p);
  const Matrix g1 = m.p() == 2 ? closed_form::riemannian_exp(g0, v).matrix()
                               : flow::geodesic_endpoint(g0, v, m, 1.0, integrator(spec));
  return emit_json(Json{{"p", m.p()}, {"g", io::matrix_to_json(g1)}});
}

Emit cmd_log(const RunSpec& spec) {
  const Inputs in = load_inputs(spec);
  const GroupElement g0(require(in.g0, "g0"));
  const GroupElement g1(require(in.g1, "g1"));
  const PMetric m(spec.p);
  const auto r = shooting::geodesic_bvp(g0, g1, m, shooting_config(spec), integrator(spec));
  Json j{{"p", m.p()},
         {"v", io::matrix_to_json(r.v0)},
         {"converged", r.converged},
         {"endpoint_residual", r.endpoint_residual},
         {"iters", r.iterations}};
  return emit_json(std::move(j), r.converged ? kExitOk : kExitSolver);
}

Emit cmd_distance(const RunSpec& spec) {
  const Inputs in = load_inputs(spec);
  const GroupElement g0(require(in.g0, "g0"));
  const GroupElement g1(require(in.g1, "g1"));
  const PMetric m(spec.p);
  const auto r = shooting::geodesic_bvp(g0, g1, m, shooting_config(spec), integrator(spec));
  Json j = io::bvp_to_json(r, spec.with_trajectory);
  j["p"] = m.p();
  return emit_json(std::move(j), r.converged ? kExitOk : kExitSolver);
}

/// One random case of the compare command: ODE endpoint against the closed
/// form at t = 1, relative Frobenius error.
Json compare_case(const std::string& name, int p, Eigen::Index n, std::uint64_t seed,
                  const ode::IntegratorConfig& cfg) {
  random::MatrixSampler s(seed);
  const GroupElement g0(s.invertible(n));
  Matrix v0;
  Matrix closed;
  int used_p = p;
  if (name == "normal") {
    v0 = random::with_operator_norm(s.normal(n), 1.0);
    closed = closed_form::one_parameter_geodesic(g0, v0, 1.0).matrix();
  } else if (name == "partial-isometry") {
    v0 = s.partial_isometry(n, std::max<Eigen::Index>(1, n / 2));
    closed = closed_form::partial_isometry_geodesic(g0, v0, 1.0).matrix();
  } else if (name == "riemannian") {
    used_p = 2;
    v0 = random::with_operator_norm(s.gaussian(n), 1.0);
    closed = closed_form::riemannian_geodesic(g0, v0, 1.0).matrix();
  } else {
    throw Error(ErrorKind::parse, "unknown case " + name);
  }
  const Matrix ode_end = flow::geodesic_endpoint(g0, v0, PMetric(used_p), 1.0, cfg);
  return Json{{"case", name},
              {"p", used_p},
              {"delta", (ode_end - closed).norm() / closed.norm()}};
}

Emit cmd_compare(const RunSpec& spec) {
  const PMetric m(spec.p);
  const Eigen::Index n = spec.N.value_or(4);
  const auto cfg = integrator(spec);
  std::vector<std::string> cases;
  if (spec.case_name == "all") {
    cases = {"normal", "partial-isometry", "riemannian"};
  } else {
    cases = {spec.case_name};
  }
  Json rows = Json::array();
  double worst = 0.0;
  for (const auto& c : cases) {
    Json row = compare_case(c, m.p(), n, spec.seed, cfg);
    worst = std::max(worst, row["delta"].get<double>());
    rows.push_back(std::move(row));
  }
  return emit_json(Json{{"p", m.p()},
                        {"N", n},
                        {"seed", spec.seed},
                        {"cases", std::move(rows)},
                        {"max_delta", worst}});
}

const char* kClasses[] = {"generic", "normal", "partial_isometry", "self_adjoint",
                          "rank_deficient"};

Json verify_trial(const PMetric& m, Eigen::Index n, std::uint64_t seed, int trial,
                  const ode::IntegratorConfig& cfg) {
  random::MatrixSampler s(trial_seed(seed, trial));
  const int cls = trial % 5;
  const double scale = s.uniform(0.1, 1.0);
  Matrix v0;
  switch (cls) {
    case 0: v0 = random::with_operator_norm(s.gaussian(n), scale); break;
    case 1: v0 = random::with_operator_norm(s.normal(n), scale); break;
    case 2: v0 = s.partial_isometry(n, std::max<Eigen::Index>(1, n / 2)); break;
    case 3: v0 = random::with_operator_norm(s.hermitian(n), scale); break;
    default:
      v0 = random::with_operator_norm(s.rank_deficient(n, std::max<Eigen::Index>(1, n - 1)),
                                      scale);
  }
  const GroupElement g0(s.invertible(n));
  const Matrix z = s.gaussian(n);

  Json row{{"trial", trial}, {"class", kClasses[cls]}};
  try {
    const auto traj = flow::geodesic_ivp(g0, v0, m, 1.0, cfg);
    const auto& d = traj.diagnostics;
    const double el = max_operator_norm(variational::el_residual_path(traj.times, traj.v, m));
    const double leg = linalg::operator_norm(
        variational::legendre_inverse(variational::legendre(v0, m), m) - v0);
    const auto eq = spectral::equivariance_check(traj);
    const double q = variational::second_variation(v0, z, m);
    const double chord = linalg::p_norm(traj.g.back() - traj.g.front(), m.p());
    const double length = linalg::p_norm(v0, m.p());

    row["spectrum_drift"] = d.spectrum_drift;
    row["skew_drift"] = d.skew_drift;
    row["speed_drift"] = d.speed_drift;
    row["multiplicity_stable"] = d.multiplicity_stable;
    row["el_residual"] = el;
    row["legendre_roundtrip"] = leg;
    row["transport_deviation"] = eq.transport_deviation;
    row["modulus_deviation"] = eq.modulus_deviation;
    row["second_variation"] = q;
    // Reported, not asserted.
    row["chord_vs_length"] = Json{{"chord", chord}, {"length", length}, {"holds", chord <= length}};
    const bool pass = d.spectrum_drift <= kDriftTol && d.skew_drift <= kDriftTol &&
                      d.speed_drift <= kDriftTol && d.multiplicity_stable && el <= kElTol &&
                      leg <= kLegendreTol && eq.frame_ok &&
                      eq.transport_deviation <= kTransportTol &&
                      eq.modulus_deviation <= kTransportTol && q >= kSecondVariationFloor;
    row["pass"] = pass;
  } catch (const Error& e) {
    row["error"] = Json{{"kind", to_string(e.kind())}, {"message", e.what()}};
    row["pass"] = false;
  }
  return row;
}

Emit cmd_verify(const RunSpec& spec) {
  const PMetric m(spec.p);
  const Eigen::Index n = spec.N.value_or(4);
  if (n < 1) throw Error(ErrorKind::parse, "--N must be >= 1");
  if (spec.trials < 1) throw Error(ErrorKind::parse, "--trials must be >= 1");
  const auto cfg = integrator(spec);

  std::vector<Json> rows(static_cast<std::size_t>(spec.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < spec.trials; k = next++) {
      rows[static_cast<std::size_t>(k)] = verify_trial(m, n, spec.seed, k, cfg);
    }
  };
  const unsigned workers = worker_count(static_cast<unsigned>(spec.trials));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int passed = 0;
  for (const auto& r : rows) passed += r["pass"].get<bool>() ? 1 : 0;
  const bool all_pass = passed == spec.trials;
  const int code = all_pass ? kExitOk : kExitVerifyFailed;

  if (spec.format == Format::csv) {
    std::ostringstream os;
    os << "trial,class,spectrum_drift,skew_drift,speed_drift,multiplicity_stable,el_residual,"
          "legendre_roundtrip,transport_deviation,modulus_deviation,second_variation,pass\n";
    os << std::setprecision(6);
    for (const auto& r : rows) {
      os << r["trial"].get<int>() << ',' << r["class"].get<std::string>();
      for (const char* key : {"spectrum_drift", "skew_drift", "speed_drift"}) {
        os << ',' << (r.contains(key) ? r[key].get<double>() : NAN);
      }
      os << ',' << (r.value("multiplicity_stable", false) ? "true" : "false");
      for (const char* key : {"el_residual", "legendre_roundtrip", "transport_deviation",
                              "modulus_deviation", "second_variation"}) {
        os << ',' << (r.contains(key) ? r[key].get<double>() : NAN);
      }
      os << ',' << (r["pass"].get<bool>() ? "PASS" : "FAIL") << '\n';
    }
    return Emit{{}, os.str(), code};
  }
  Json tol{{"drift", kDriftTol},
           {"el_residual", kElTol},
           {"legendre_roundtrip", kLegendreTol},
           {"transport", kTransportTol},
           {"second_variation_floor", kSecondVariationFloor}};
  return emit_json(Json{{"p", m.p()},
                        {"N", n},
                        {"seed", spec.seed},
                        {"trials", spec.trials},
                        {"tolerances", std::move(tol)},
                        {"results", std::move(rows)},
                        {"passed", passed},
                        {"failed", spec.trials - passed},
                        {"all_pass", all_pass}},
                   code);
}

Json auxiliary_report(const Matrix& w0, const PMetric& m, const ode::IntegratorConfig& cfg,
                      double T, const Matrix& wT) {
  const linalg::PositiveMatrix b0 = linalg::PositiveMatrix::gram(w0);
  const Matrix K = w0 - w0.adjoint();
  const double alpha = m.alpha();
  const auto samples = spectral::integrate_b(b0, K, alpha, T, cfg);

  std::vector<double> times;
  std::vector<spectral::ProjectionFrame> frames;
  double drift = 0.0;
  for (const auto& s : samples) {
    times.push_back(s.t);
    frames.push_back(spectral::projection_frame(s.b));
    drift = std::max(drift, (s.b.eigenvalues() - b0.eigenvalues()).cwiseAbs().maxCoeff());
  }
  Json out{{"alpha", alpha}, {"spectrum_drift", drift}};
  out["handoff_deviation"] =
      linalg::operator_norm(samples.back().b.matrix() - wT.adjoint() * wT);

  const auto& f0 = frames.front();
  double gamma_max = 0.0;
  for (Eigen::Index i = 0; i < f0.lambdas.size(); ++i) {
    for (Eigen::Index l = 0; l < f0.lambdas.size(); ++l) {
      if (i != l) {
        gamma_max =
            std::max(gamma_max, spectral::gamma_coefficient(f0.lambdas(i), f0.lambdas(l), alpha));
      }
    }
  }
  out["gamma_max"] = gamma_max;

  const double top = f0.lambdas.size() > 0 ? f0.lambdas(0) : 0.0;
  const Complex z(top + 1.0, 0.5);
  const Matrix direct =
      (z * linalg::identity(b0.dim()) - b0.matrix().cast<Complex>()).partialPivLu().inverse();
  out["resolvent_deviation"] =
      linalg::operator_norm(spectral::resolvent_from_frame(f0, z) - direct);

  try {
    std::vector<std::vector<Matrix>> families;
    for (const auto& f : frames) families.push_back(f.complete());
    const auto tf = spectral::transport_frame(times, families);
    out["transport_deviation"] = spectral::transport_deviation(tf, families);

    double rhs_dev = 0.0;
    std::vector<Matrix> series(frames.size());
    for (std::size_t i = 0; i < f0.projections.size(); ++i) {
      for (std::size_t k = 0; k < frames.size(); ++k) series[k] = frames[k].projections[i];
      for (std::size_t k = 0; k < frames.size(); ++k) {
        const Matrix fdp = fd::derivative_at<Matrix>(times, series, k);
        rhs_dev = std::max(rhs_dev, linalg::operator_norm(
                                        fdp - spectral::projection_rhs(frames[k], K, alpha, i)));
      }
    }
    out["projection_rhs_deviation"] = rhs_dev;
    out["frame_ok"] = true;
  } catch (const Error& e) {
    out["frame_ok"] = false;
    out["frame_error"] = e.what();
  }
  return out;
}

Emit cmd_spectral(const RunSpec& spec) {
  Inputs in = load_inputs(spec);
  const PMetric m(spec.p);
  const Eigen::Index n = in.n > 0 ? in.n : 4;
  if (!in.g0) in.g0 = linalg::identity(n);
  if (!in.v0) {
    random::MatrixSampler s(spec.seed);
    in.v0 = random::with_operator_norm(s.gaussian(n), 1.0);
  }
  const auto cfg = integrator(spec);
  const auto traj = flow::geodesic_ivp(GroupElement(*in.g0), *in.v0, m, spec.T, cfg);
  return emit_json(
      Json{{"p", m.p()},
           {"N", n},
           {"seed", spec.seed},
           {"conservation", io::report_to_json(traj.diagnostics)},
           {"equivariance", io::equivariance_to_json(spectral::equivariance_check(traj))},
           {"auxiliary", auxiliary_report(traj.w.front().value, m, cfg, spec.T,
                                          traj.w.back().value)}});
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::convergence:
    case ErrorKind::integrator:
    case ErrorKind::singular_drift:
      return kExitSolver;
    default:
      return kExitInput;
  }
}

void write_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

// ------------------------------------------------------------------ parsing

void add_metric(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--p", spec.p, "Even metric exponent p >= 2");
  sub->add_option("--N", spec.N, "Matrix size");
}

void add_integrator(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--step", spec.step, "RK4 step (initial step when adaptive)");
  sub->add_flag("--adaptive", spec.adaptive, "Dormand-Prince 5(4) instead of fixed-step RK4");
}

void add_matrix(CLI::App* sub, const std::string& name, std::string& literal,
                std::string& file) {
  sub->add_option("--" + name, literal, "Inline JSON matrix, identity or zero");
  sub->add_option("--" + name + "-file", file, "JSON matrix file");
}

void add_output(CLI::App* sub, RunSpec& spec, bool csv) {
  sub->add_option("--output", spec.output, "Write the result here instead of stdout");
  if (csv) {
    sub->add_option("--format", spec.format, "json or csv")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{{"json", Format::json}, {"csv", Format::csv}}));
  }
}

}  // namespace

unsigned worker_count(unsigned jobs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FINSLER_GL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  return std::max(1u, std::min(cap, jobs));
}

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  Emit result;
  try {
    switch (spec.command) {
      case Command::geodesic: result = cmd_geodesic(spec); break;
      case Command::exp: result = cmd_exp(spec); break;
      case Command::log: result = cmd_log(spec); break;
      case Command::distance: result = cmd_distance(spec); break;
      case Command::verify: result = cmd_verify(spec); break;
      case Command::spectral: result = cmd_spectral(spec); break;
      case Command::compare: result = cmd_compare(spec); break;
    }
  } catch (const Error& e) {
    write_error(err, to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  }

  const std::string body = result.text.empty() ? result.json.dump(2) + "\n" : result.text;
  if (spec.output.empty()) {
    out << body;
  } else {
    std::ofstream f(spec.output, std::ios::binary);
    if (!f) {
      write_error(err, "parse", "cannot write " + spec.output);
      return kExitInput;
    }
    f << body;
  }
  return result.code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  CLI::App app{"Geodesics of left-invariant p-norm Finsler metrics on GL(N)"};
  app.require_subcommand(1);

  auto* geodesic = app.add_subcommand("geodesic", "Integrate a geodesic from (g0, v0)");
  add_metric(geodesic, spec);
  add_matrix(geodesic, "g0", spec.g0, spec.g0_file);
  add_matrix(geodesic, "v0", spec.v0, spec.v0_file);
  geodesic->add_option("--T", spec.T, "Final time");
  add_integrator(geodesic, spec);
  add_output(geodesic, spec, true);
  geodesic->add_option("--stream", spec.stream, "CSV matrix stream: g, v or w");

  auto* exp = app.add_subcommand("exp", "Endpoint of the geodesic with velocity v0 at t = 1");
  add_metric(exp, spec);
  add_matrix(exp, "g0", spec.g0, spec.g0_file);
  add_matrix(exp, "v0", spec.v0, spec.v0_file);
  add_integrator(exp, spec);
  add_output(exp, spec, false);

  auto* log = app.add_subcommand("log", "Initial velocity of the geodesic from g0 to g1");
  auto* distance = app.add_subcommand("distance", "Geodesic distance between g0 and g1");
  for (auto* sub : {log, distance}) {
    add_metric(sub, spec);
    add_matrix(sub, "g0", spec.g0, spec.g0_file);
    add_matrix(sub, "g1", spec.g1, spec.g1_file);
    add_integrator(sub, spec);
    sub->add_option("--seed", spec.seed, "Seed for random restarts");
    sub->add_option("--max-iters", spec.max_iters, "Gauss-Newton iterations per start");
    sub->add_option("--restarts", spec.restarts, "Random restarts after the principal-log start");
    add_output(sub, spec, false);
  }
  distance->add_flag("--trajectory", spec.with_trajectory, "Include the connecting trajectory");

  auto* verify = app.add_subcommand("verify", "Invariant suite over seeded random inputs");
  add_metric(verify, spec);
  verify->add_option("--trials", spec.trials, "Number of random trials");
  verify->add_option("--seed", spec.seed, "Base seed");
  add_integrator(verify, spec);
  add_output(verify, spec, true);

  auto* spectral_cmd = app.add_subcommand("spectral", "Spectral dynamics diagnostics");
  add_metric(spectral_cmd, spec);
  add_matrix(spectral_cmd, "g0", spec.g0, spec.g0_file);
  add_matrix(spectral_cmd, "v0", spec.v0, spec.v0_file);
  spectral_cmd->add_option("--T", spec.T, "Final time");
  spectral_cmd->add_option("--seed", spec.seed, "Seed for a random v0");
  add_integrator(spectral_cmd, spec);
  add_output(spectral_cmd, spec, false);

  auto* compare = app.add_subcommand("compare", "Closed forms against the ODE solver");
  add_metric(compare, spec);
  compare->add_option("--case", spec.case_name, "normal, partial-isometry, riemannian or all")
      ->check(CLI::IsMember({"normal", "partial-isometry", "riemannian", "all"}));
  compare->add_option("--seed", spec.seed, "Seed");
  add_integrator(compare, spec);
  add_output(compare, spec, false);

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "parse", e.what());
    return kExitInput;
  }

  const std::pair<CLI::App*, Command> table[] = {
      {geodesic, Command::geodesic}, {exp, Command::exp},
      {log, Command::log},           {distance, Command::distance},
      {verify, Command::verify},     {spectral_cmd, Command::spectral},
      {compare, Command::compare}};
  for (const auto& [sub, cmd] : table) {
    if (sub->parsed()) spec.command = cmd;
  }
  // spectral with no matrix input runs on a random 4 x 4 velocity.
  if (spec.command == Command::spectral && spec.v0.empty() && spec.v0_file.empty() &&
      !spec.N && spec.g0 == "identity" && spec.g0_file.empty()) {
    spec.N = 4;
  }
  try {
    if (spec.N && *spec.N < 1) throw Error(ErrorKind::parse, "--N must be >= 1");
    PMetric{spec.p};
  } catch (const Error& e) {
    write_error(err, to_string(e.kind()), e.what());
    return kExitInput;
  }
  return execute(spec, out, err);
}

}  // namespace finsler::cli
