// Command-line front end: expand | critical-alpha | landscape | schoenberg |
// quad-check. Every run is deterministic given (config, seed) and emits its
// fully-resolved configuration: embedded in the document in JSON mode, as a
// one-line JSON on stderr in CSV mode (keeping stdout RFC-4180 clean).
// Exit codes: 0 ok, 1 check failure, 2 usage/config error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "orthopos/amplitude.hpp"
#include "orthopos/positivity.hpp"
#include "orthopos/quadrature.hpp"
#include "orthopos/report.hpp"
#include "orthopos/scalar.hpp"
#include "orthopos/schoenberg.hpp"

namespace {

using namespace orthopos;

constexpr const char* kSchemaVersion = "1";

struct GlobalArgs {
  std::string mode = "float";
  unsigned digits = 50;
  std::uint64_t seed = 12345;
  bool seed_given = false;
  std::string format = "csv";
  std::string out;
  unsigned threads = 0;

  ScalarMode scalar_mode() const {
    const ScalarMode m = mode == "rational" ? ScalarMode::exact_rational()
                                            : ScalarMode::float_digits(digits);
    m.validate();
    return m;
  }

  json config_base() const {
    json cfg{{"mode", mode}};
    if (mode == "float") cfg["digits"] = digits;
    cfg["format"] = format;
    cfg["out"] = out.empty() ? json(nullptr) : json(out);
    return cfg;
  }
};

void write_text(const GlobalArgs& args, const std::string& body) {
  if (args.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(args.out, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + args.out);
  file << body;
}

/// CSV mode: body to stdout/file, resolved config (plus optional summary) to
/// stderr. JSON mode: one document carrying config and results.
void emit(const GlobalArgs& args, const std::string& command,
          const json& config, const std::string& csv_body,
          const json& json_results, const json& summary = {}) {
  json envelope{{"schema_version", kSchemaVersion}, {"command", command},
                {"config", config}};
  if (args.format == "json") {
    envelope["results"] = json_results;
    if (!summary.is_null() && !summary.empty()) envelope["summary"] = summary;
    write_text(args, envelope.dump(2) + "\n");
  } else {
    if (!summary.is_null() && !summary.empty()) envelope["summary"] = summary;
    write_text(args, csv_body);
    std::cerr << envelope.dump() << "\n";
  }
}

template <class F>
int with_mode(const ScalarMode& mode, F&& run) {
  if (mode.kind == ScalarMode::Kind::ExactRational)
    return run.template operator()<Rational>();
  set_thread_precision(mode.digits);
  return run.template operator()<Real>();
}

// ---------------------------------------------------------------- expand --

struct ExpandArgs {
  std::int64_t M = 0;
  std::string alpha, beta, gamma;  // gamma empty -> beta + 1
  int d = 2;
};

int run_expand(const GlobalArgs& global, const ExpandArgs& cmd) {
  return with_mode(global.scalar_mode(), [&]<class T>() {
    const T beta = scalar_from_string<T>(cmd.beta);
    const std::optional<T> gamma =
        cmd.gamma.empty() ? std::nullopt
                          : std::optional<T>(scalar_from_string<T>(cmd.gamma));
    const AmplitudeSpec<T> spec(cmd.M, scalar_from_string<T>(cmd.alpha), beta,
                                gamma);
    ExpansionDiagnostics diag;
    const auto coeffs = expand_amplitude(spec, BasisSpec(cmd.d), &diag);
    const auto min = min_coefficient(coeffs, default_noise_floor<T>());

    json config = global.config_base();
    config["M"] = cmd.M;
    config["alpha"] = cmd.alpha;
    config["beta"] = cmd.beta;
    config["gamma"] = format_scalar(gamma ? *gamma : beta + T(1));
    config["d"] = cmd.d;
    config["eta"] = format_scalar(default_noise_floor<T>());

    if (diag.precision_warning)
      std::cerr << "warning: estimated cancellation ("
                << diag.cancellation_log10
                << " digits) exceeds the precision budget\n";

    std::ostringstream csv;
    write_expand_csv(csv, coeffs);
    const json results = expand_json(coeffs, min, diag);
    emit(global, "expand", config, csv.str(), results,
         json{{"min_coefficient", results["min_coefficient"]},
              {"verdict", results["verdict"]}});
    return 0;
  });
}

// -------------------------------------------------------- critical-alpha --

struct CriticalArgs {
  std::int64_t M = 0;
  std::string beta, gamma;
  std::string epsilon = "1e-6";
  int d = 2;
};

int run_critical_alpha(const GlobalArgs& global, const CriticalArgs& cmd) {
  return with_mode(global.scalar_mode(), [&]<class T>() {
    const T beta = scalar_from_string<T>(cmd.beta);
    const T gamma = cmd.gamma.empty() ? T(beta + T(1))
                                      : scalar_from_string<T>(cmd.gamma);
    BisectionConfig<T> config;
    config.epsilon = scalar_from_string<T>(cmd.epsilon);

    json resolved = global.config_base();
    resolved["M"] = cmd.M;
    resolved["beta"] = cmd.beta;
    resolved["gamma"] = format_scalar(gamma);
    resolved["epsilon"] = format_scalar(config.epsilon);
    resolved["d"] = cmd.d;
    resolved["eta"] = format_scalar(default_noise_floor<T>());

    T alpha_crit;
    CellStatus status;
    try {
      const auto result =
          critical_alpha<T>(cmd.M, beta, gamma, BasisSpec(cmd.d), config);
      alpha_crit = result.alpha_crit;
      status = result.status;
    } catch (const InvalidBracket&) {
      alpha_crit = config.alpha_max;
      status = CellStatus::FailedAtAlphaMax;
    }

    std::ostringstream csv;
    csv << landscape_csv_header() << "\r\n"
        << cmd.M << ',' << format_scalar(beta) << ',' << format_scalar(gamma)
        << ',' << format_scalar(alpha_crit) << ',' << to_string(status)
        << "\r\n";
    const json results{{"M", cmd.M},
                       {"beta", format_scalar(beta)},
                       {"gamma", format_scalar(gamma)},
                       {"alpha_crit", format_scalar(alpha_crit)},
                       {"status", to_string(status)}};
    emit(global, "critical-alpha", resolved, csv.str(), results);
    return 0;
  });
}

// ------------------------------------------------------------- landscape --

struct LandscapeArgs {
  std::int64_t M_min = 0;
  std::int64_t M_max = 0;
  std::string beta_min, beta_max;  // beta_max empty -> beta_min
  int beta_steps = 1;
  std::string gamma;  // empty -> beta + 1
  std::string epsilon = "1e-6";
  int d = 2;
};

int run_landscape(const GlobalArgs& global, const LandscapeArgs& cmd) {
  return with_mode(global.scalar_mode(), [&]<class T>() {
    if (cmd.M_min < 0 || cmd.M_min > cmd.M_max)
      throw std::invalid_argument("landscape: need 0 <= M-min <= M-max");
    if (cmd.beta_steps < 1)
      throw std::invalid_argument("landscape: beta-steps must be >= 1");

    const T beta_lo = scalar_from_string<T>(cmd.beta_min);
    const T beta_hi = cmd.beta_max.empty()
                          ? beta_lo
                          : scalar_from_string<T>(cmd.beta_max);
    if (beta_hi < beta_lo)
      throw std::invalid_argument("landscape: beta-max < beta-min");
    if (cmd.beta_steps == 1 && beta_hi != beta_lo)
      throw std::invalid_argument(
          "landscape: beta-steps 1 needs beta-max == beta-min");

    std::vector<std::int64_t> Ms;
    for (std::int64_t M = cmd.M_min; M <= cmd.M_max; ++M) Ms.push_back(M);
    std::vector<T> betas;
    for (int i = 0; i < cmd.beta_steps; ++i)
      betas.push_back(cmd.beta_steps == 1
                          ? beta_lo
                          : T(beta_lo + (beta_hi - beta_lo) * i /
                                            (cmd.beta_steps - 1)));

    GammaRule<T> rule;
    if (!cmd.gamma.empty()) rule.fixed = scalar_from_string<T>(cmd.gamma);
    BisectionConfig<T> config;
    config.epsilon = scalar_from_string<T>(cmd.epsilon);

    const auto result = landscape<T>(Ms, betas, rule, BasisSpec(cmd.d), config,
                                     {}, global.threads);

    json resolved = global.config_base();
    resolved["M_min"] = cmd.M_min;
    resolved["M_max"] = cmd.M_max;
    resolved["beta_min"] = format_scalar(beta_lo);
    resolved["beta_max"] = format_scalar(beta_hi);
    resolved["beta_steps"] = cmd.beta_steps;
    resolved["gamma"] =
        cmd.gamma.empty() ? json("beta+1") : json(cmd.gamma);
    resolved["epsilon"] = format_scalar(config.epsilon);
    resolved["d"] = cmd.d;
    resolved["threads"] = global.threads;

    std::ostringstream csv;
    write_landscape_csv(csv, result);
    emit(global, "landscape", resolved, csv.str(), landscape_json(result));
    return 0;
  });
}

// ------------------------------------------------------------ schoenberg --

struct SchoenbergArgs {
  std::string config_path;
};

template <class V>
V config_field(const json& cfg, const std::string& key) {
  if (!cfg.contains(key))
    throw std::invalid_argument("schoenberg config: missing field '" + key +
                                "'");
  try {
    return cfg.at(key).get<V>();
  } catch (const json::exception&) {
    throw std::invalid_argument("schoenberg config: field '" + key +
                                "' has the wrong type");
  }
}

template <class V>
V config_field_or(const json& cfg, const std::string& key, V fallback) {
  if (!cfg.contains(key)) return fallback;
  return config_field<V>(cfg, key);
}

int run_schoenberg(const GlobalArgs& global, const SchoenbergArgs& cmd) {
  std::ifstream file(cmd.config_path);
  if (!file)
    throw std::invalid_argument("schoenberg: cannot read config file: " +
                                cmd.config_path);
  json cfg;
  try {
    cfg = json::parse(file);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("schoenberg config: ") + e.what());
  }

  const std::string family = config_field_or<std::string>(cfg, "family",
                                                           "planted");
  const int dim = config_field<int>(cfg, "dim");
  const int samples = config_field<int>(cfg, "samples");
  const double tol = config_field<double>(cfg, "tol");
  const double tol_eig = config_field_or<double>(cfg, "tol_eig", 0.0);
  const std::uint64_t seed =
      global.seed_given ? global.seed
                        : config_field_or<std::uint64_t>(cfg, "seed", 12345);
  MinEigOptions eig;
  eig.dense_threshold = config_field_or<int>(cfg, "dense_threshold", 500);
  eig.subspace = config_field_or<int>(cfg, "subspace", 40);
  if (samples < 1)
    throw std::invalid_argument("schoenberg config: field 'samples': must be >= 1");

  std::vector<SampleStats> rows;
  double planted_a0 = -1.0;
  json resolved = global.config_base();
  resolved["seed"] = seed;
  resolved["family"] = family;
  resolved["dim"] = dim;
  resolved["samples"] = samples;
  resolved["tol"] = tol;
  resolved["tol_eig"] = tol_eig;
  resolved["dense_threshold"] = eig.dense_threshold;
  resolved["subspace"] = eig.subspace;

  if (family == "planted") {
    SchoenbergProblem problem;
    problem.d = dim;
    problem.nmax = config_field<int>(cfg, "nmax");
    problem.cf = config_field<std::vector<double>>(cfg, "cf");
    problem.hits = config_field_or<std::vector<int>>(cfg, "hits", {});
    problem.a0 = config_field<double>(cfg, "a0");
    problem.tol = tol;
    problem.tol_eig = tol_eig;
    try {
      problem.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("schoenberg config: ") + e.what());
    }
    planted_a0 = problem.a0;

    std::vector<int> n_list =
        config_field_or<std::vector<int>>(cfg, "n_list", {});
    if (n_list.empty()) {
      if (problem.l_min() < 0)
        throw std::invalid_argument(
            "schoenberg config: field 'n_list': required when 'hits' is empty");
      n_list = n_schedule(problem.l_min(), problem.d,
                          config_field_or<int>(cfg, "max_points", 10));
    }
    for (int n : n_list)
      if (n < 1)
        throw std::invalid_argument(
            "schoenberg config: field 'n_list': entries must be >= 1");

    resolved["nmax"] = problem.nmax;
    resolved["cf"] = problem.cf;
    resolved["hits"] = problem.hits;
    resolved["a0"] = problem.a0;
    resolved["n_list"] = n_list;

    for (int n : n_list)
      rows.push_back(
          estimate_alpha0(problem, n, samples, seed, eig, global.threads));
  } else if (family == "amplitude") {
    const auto M = config_field<std::int64_t>(cfg, "M");
    const double beta = config_field<double>(cfg, "beta");
    const double gamma = config_field_or<double>(cfg, "gamma", beta + 1);
    const auto n_list = config_field<std::vector<int>>(cfg, "n_list");
    if (n_list.empty())
      throw std::invalid_argument(
          "schoenberg config: field 'n_list': must be non-empty");
    const BasisSpec basis(dim);
    const KernelBuilder builder = [&](double alpha,
                                      const Eigen::MatrixXd& gram) {
      const AmplitudeSpec<double> spec(M, alpha, beta, gamma);
      const auto coeffs = expand_amplitude(spec, basis);
      return kernel_from_coefficients(coeffs.coeffs, dim, gram);
    };
    resolved["M"] = M;
    resolved["beta"] = beta;
    resolved["gamma"] = gamma;
    resolved["n_list"] = n_list;

    // positivity of the amplitude holds above the critical slope, so PSD
    // failures sit below the threshold
    for (int n : n_list)
      rows.push_back(estimate_alpha0_for(builder, dim, tol, tol_eig, n, samples,
                                         seed, eig, global.threads,
                                         /*negative_above=*/false));
  } else {
    throw std::invalid_argument(
        "schoenberg config: field 'family': must be 'planted' or 'amplitude'");
  }

  std::ostringstream csv;
  write_schoenberg_csv(csv, rows, dim, planted_a0);
  emit(global, "schoenberg", resolved, csv.str(),
       schoenberg_json(rows, dim, planted_a0));
  return 0;
}

// ------------------------------------------------------------ quad-check --

struct QuadCheckArgs {
  std::int64_t M = 0;
  std::string alpha, beta, gamma;
  int d = 2;
  std::string tolerance = "1e-30";
};

int run_quad_check(const GlobalArgs& global, const QuadCheckArgs& cmd) {
  const ScalarMode mode = global.scalar_mode();
  if (mode.kind == ScalarMode::Kind::ExactRational)
    throw std::invalid_argument(
        "quad-check: the quadrature oracle needs --mode float");
  if (cmd.d != 2)
    throw std::invalid_argument("quad-check: the oracle is d=2 only");
  set_thread_precision(mode.digits);

  const Real beta = scalar_from_string<Real>(cmd.beta);
  const Real gamma = cmd.gamma.empty() ? Real(beta + 1)
                                       : scalar_from_string<Real>(cmd.gamma);
  const AmplitudeSpec<Real> spec(cmd.M, scalar_from_string<Real>(cmd.alpha),
                                 beta, gamma);
  const BasisSpec basis(2);
  const Real tolerance = scalar_from_string<Real>(cmd.tolerance);

  const auto recurrence = expand_amplitude(spec, basis);
  const std::function<Real(const Real&)> direct = [&](const Real& x) {
    return evaluate_amplitude_direct(spec, x);
  };
  const int n_max = static_cast<int>(cmd.M) + 1;
  const auto quadrature = coefficients_by_quadrature<Real>(
      direct, static_cast<int>(cmd.M) + 2, n_max, basis,
      static_cast<int>(cmd.M) + 1);

  Real max_diff(0);
  int argmax = 0;
  for (int n = 0; n <= n_max; ++n) {
    const Real diff =
        abs(recurrence.coeffs[n] - quadrature.coeffs.coeffs[n]);
    if (diff > max_diff) {
      max_diff = diff;
      argmax = n;
    }
  }
  const bool pass = max_diff <= tolerance;

  json resolved = global.config_base();
  resolved["M"] = cmd.M;
  resolved["alpha"] = cmd.alpha;
  resolved["beta"] = cmd.beta;
  resolved["gamma"] = format_scalar(gamma);
  resolved["d"] = cmd.d;
  resolved["tolerance"] = format_scalar(tolerance);

  std::ostringstream csv;
  csv << "max_abs_diff,argmax_n,tolerance,pass\r\n"
      << format_scalar(max_diff) << ',' << argmax << ','
      << format_scalar(tolerance) << ',' << (pass ? "true" : "false")
      << "\r\n";
  const json results{{"max_abs_diff", format_scalar(max_diff)},
                     {"argmax_n", argmax},
                     {"tolerance", format_scalar(tolerance)},
                     {"pass", pass}};
  emit(global, "quad-check", resolved, csv.str(), results);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Legendre/Gegenbauer expansion positivity toolkit: recurrence-based "
      "expansions, critical-slope search, quadrature cross-checks and the "
      "Schoenberg positivity test"};
  app.require_subcommand(1);

  GlobalArgs global;
  app.add_option("--mode", global.mode, "Scalar mode")
      ->check(CLI::IsMember({"rational", "float"}))
      ->capture_default_str();
  app.add_option("--digits", global.digits,
                 "Decimal digits for float mode (>= 16)")
      ->capture_default_str();
  auto* seed_opt =
      app.add_option("--seed", global.seed, "Master seed for Monte-Carlo runs")
          ->capture_default_str();
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", global.out, "Write results to a file instead of stdout");
  app.add_option("--threads", global.threads,
                 "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();

  ExpandArgs expand_args;
  auto* expand = app.add_subcommand(
      "expand", "Expand the amplitude into basis coefficients");
  expand->add_option("--M", expand_args.M, "Level parameter M")->required();
  expand->add_option("--alpha", expand_args.alpha, "Slope alpha in [0,1]")
      ->required();
  expand->add_option("--beta", expand_args.beta, "Weight exponent beta > 0")
      ->required();
  expand->add_option("--gamma", expand_args.gamma,
                     "Log-weight exponent (default beta+1)");
  expand->add_option("--d", expand_args.d, "Sphere dimension")
      ->capture_default_str();

  CriticalArgs critical_args;
  auto* critical = app.add_subcommand(
      "critical-alpha", "Bisect the positivity threshold at fixed (M, beta)");
  critical->add_option("--M", critical_args.M)->required();
  critical->add_option("--beta", critical_args.beta)->required();
  critical->add_option("--gamma", critical_args.gamma,
                       "Fixed gamma (default beta+1)");
  critical->add_option("--epsilon", critical_args.epsilon,
                       "Bisection tolerance")
      ->capture_default_str();
  critical->add_option("--d", critical_args.d)->capture_default_str();

  LandscapeArgs landscape_args;
  auto* landscape_cmd = app.add_subcommand(
      "landscape", "Sweep alpha_crit over an (M, beta) grid plus profile");
  landscape_cmd->add_option("--M-min", landscape_args.M_min)
      ->capture_default_str();
  landscape_cmd->add_option("--M-max", landscape_args.M_max)->required();
  landscape_cmd->add_option("--beta-min", landscape_args.beta_min)->required();
  landscape_cmd->add_option("--beta-max", landscape_args.beta_max,
                            "Default: beta-min");
  landscape_cmd->add_option("--beta-steps", landscape_args.beta_steps)
      ->capture_default_str();
  landscape_cmd->add_option("--gamma", landscape_args.gamma,
                            "Fixed gamma (default beta+1)");
  landscape_cmd->add_option("--epsilon", landscape_args.epsilon)
      ->capture_default_str();
  landscape_cmd->add_option("--d", landscape_args.d)->capture_default_str();

  SchoenbergArgs schoenberg_args;
  auto* schoenberg_cmd = app.add_subcommand(
      "schoenberg", "Monte-Carlo positivity estimate from a JSON config");
  schoenberg_cmd
      ->add_option("--config", schoenberg_args.config_path, "JSON config file")
      ->required();

  QuadCheckArgs quad_args;
  auto* quad = app.add_subcommand(
      "quad-check",
      "Cross-check recurrence coefficients against Gauss quadrature (d=2)");
  quad->add_option("--M", quad_args.M)->required();
  quad->add_option("--alpha", quad_args.alpha)->required();
  quad->add_option("--beta", quad_args.beta)->required();
  quad->add_option("--gamma", quad_args.gamma, "Fixed gamma (default beta+1)");
  quad->add_option("--d", quad_args.d)->capture_default_str();
  quad->add_option("--tolerance", quad_args.tolerance)->capture_default_str();

  // let global flags appear after the subcommand name
  for (auto* sub : {expand, critical, landscape_cmd, schoenberg_cmd, quad})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }
  global.seed_given = seed_opt->count() > 0;

  try {
    if (expand->parsed()) return run_expand(global, expand_args);
    if (critical->parsed()) return run_critical_alpha(global, critical_args);
    if (landscape_cmd->parsed()) return run_landscape(global, landscape_args);
    if (schoenberg_cmd->parsed())
      return run_schoenberg(global, schoenberg_args);
    if (quad->parsed()) return run_quad_check(global, quad_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
