#include "sympopt/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "sympopt/check.hpp"
#include "sympopt/costs.hpp"
#include "sympopt/matrix_io.hpp"
#include "sympopt/optimizers.hpp"
#include "sympopt/retraction.hpp"
#include "sympopt/rng.hpp"

namespace sympopt::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown field \"" + key + "\" in " + where);
  }
}

double number_field(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("field \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

int int_field(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError("field \"" + key + "\" must be an integer");
  return obj[key].get<int>();
}

struct RunConfig {
  std::string problem;   // least_squares | brockett
  int n = 1;
  std::uint64_t seed = 0;
  std::string optimizer = "steepest_descent";
  OptimizerConfig opt;
  double perturbation = 0.0;
  json matrices;  // validated lazily; may be empty
};

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("top level must be an object");
  reject_unknown_keys(j,
                      {"v", "problem", "n", "seed", "optimizer", "max_iter", "grad_tol", "armijo",
                       "newton", "perturbation", "matrices"},
                      "config");
  if (!j.contains("v") || !j["v"].is_number_integer() || j["v"].get<int>() != 1)
    throw ConfigError("field \"v\" must be the integer 1");

  RunConfig cfg;
  if (!j.contains("problem") || !j["problem"].is_string())
    throw ConfigError("field \"problem\" must be a string");
  cfg.problem = j["problem"].get<std::string>();
  if (cfg.problem != "least_squares" && cfg.problem != "brockett")
    throw ConfigError("field \"problem\" must be \"least_squares\" or \"brockett\"");

  cfg.n = int_field(j, "n", 0);
  if (cfg.n < 1) throw ConfigError("field \"n\" must be a positive integer");
  const long long seed = j.contains("seed") ? j["seed"].get<long long>() : 0;
  if (seed < 0) throw ConfigError("field \"seed\" must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (j.contains("optimizer")) {
    if (!j["optimizer"].is_string()) throw ConfigError("field \"optimizer\" must be a string");
    cfg.optimizer = j["optimizer"].get<std::string>();
    if (cfg.optimizer != "steepest_descent" && cfg.optimizer != "newton")
      throw ConfigError("field \"optimizer\" must be \"steepest_descent\" or \"newton\"");
  }

  cfg.opt.max_iter = int_field(j, "max_iter", cfg.opt.max_iter);
  cfg.opt.grad_tol = number_field(j, "grad_tol", cfg.opt.grad_tol);
  if (j.contains("armijo")) {
    const json& a = j["armijo"];
    if (!a.is_object()) throw ConfigError("field \"armijo\" must be an object");
    reject_unknown_keys(a, {"lambda0", "c1", "shrink", "max_backtracks"}, "armijo");
    cfg.opt.armijo.lambda0 = number_field(a, "lambda0", cfg.opt.armijo.lambda0);
    cfg.opt.armijo.c1 = number_field(a, "c1", cfg.opt.armijo.c1);
    cfg.opt.armijo.shrink = number_field(a, "shrink", cfg.opt.armijo.shrink);
    cfg.opt.armijo.max_backtracks = int_field(a, "max_backtracks", cfg.opt.armijo.max_backtracks);
  }
  if (j.contains("newton")) {
    const json& nw = j["newton"];
    if (!nw.is_object()) throw ConfigError("field \"newton\" must be an object");
    reject_unknown_keys(nw, {"regularization", "fallback_to_gradient"}, "newton");
    cfg.opt.newton.regularization =
        number_field(nw, "regularization", cfg.opt.newton.regularization);
    if (nw.contains("fallback_to_gradient")) {
      if (!nw["fallback_to_gradient"].is_boolean())
        throw ConfigError("field \"fallback_to_gradient\" must be a boolean");
      cfg.opt.newton.fallback_to_gradient = nw["fallback_to_gradient"].get<bool>();
    }
  }
  cfg.opt.validate();

  cfg.perturbation = number_field(j, "perturbation", 0.0);
  if (cfg.perturbation < 0) throw ConfigError("field \"perturbation\" must be >= 0");

  if (j.contains("matrices")) {
    if (!j["matrices"].is_object()) throw ConfigError("field \"matrices\" must be an object");
    const std::vector<std::string> allowed =
        cfg.problem == "least_squares" ? std::vector<std::string>{"W"}
                                       : std::vector<std::string>{"Q", "N"};
    reject_unknown_keys(j["matrices"], allowed, "matrices");
    cfg.matrices = j["matrices"];
  }
  return cfg;
}

// A matrices entry is either an inline matrix object or a generator spec
// {"kind": ..., "seed": ..., "scale": ...}.
Eigen::MatrixXd resolve_matrix(const json& entry, const std::string& name, int n,
                               std::uint64_t default_seed) {
  if (!entry.is_object()) throw ConfigError("matrix \"" + name + "\" must be an object");
  if (entry.contains("rows")) {
    const Eigen::MatrixXd m = matrix_from_json_text(entry.dump());
    if (m.rows() != 2 * n)
      throw ConfigError("matrix \"" + name + "\" has half-dimension " +
                        std::to_string(m.rows() / 2) + " but the config says n = " +
                        std::to_string(n));
    return m;
  }
  reject_unknown_keys(entry, {"kind", "seed", "scale"}, "matrix \"" + name + "\"");
  if (!entry.contains("kind") || !entry["kind"].is_string())
    throw ConfigError("generator spec for \"" + name + "\" needs a string \"kind\"");
  const std::string kind = entry["kind"].get<std::string>();
  const std::uint64_t seed =
      entry.contains("seed") ? entry["seed"].get<std::uint64_t>() : default_seed;
  const double scale = number_field(entry, "scale", 1.0);
  if (kind == "random_symplectic") return random_symplectic(Dim(n), seed, scale).matrix();
  if (kind == "random_J_symmetric") return random_j_symmetric(Dim(n), seed, scale);
  throw ConfigError("unknown generator kind \"" + kind + "\" for \"" + name + "\"");
}

struct Problem {
  CostModel cost;
  SymplecticPoint base;  // starting manifold point before perturbation
};

Problem build_problem(const RunConfig& cfg) {
  const Dim dim(cfg.n);
  if (cfg.problem == "least_squares") {
    Eigen::MatrixXd w_mat;
    if (cfg.matrices.contains("W"))
      w_mat = resolve_matrix(cfg.matrices["W"], "W", cfg.n, cfg.seed);
    else
      w_mat = random_symplectic(dim, cfg.seed, 1.0).matrix();
    SymplecticPoint w(w_mat);
    return {least_squares_model(w), w};
  }
  Eigen::MatrixXd q = cfg.matrices.contains("Q")
                          ? resolve_matrix(cfg.matrices["Q"], "Q", cfg.n, cfg.seed)
                          : random_j_symmetric(dim, cfg.seed, 1.0);
  Eigen::MatrixXd n_mat = cfg.matrices.contains("N")
                              ? resolve_matrix(cfg.matrices["N"], "N", cfg.n, cfg.seed + 1)
                              : random_j_symmetric(dim, cfg.seed + 1, 1.0);
  SymplecticPoint identity(Eigen::MatrixXd::Identity(dim.ambient(), dim.ambient()));
  return {brockett_model(q, n_mat), identity};
}

SymplecticPoint initial_point(const Problem& problem, const RunConfig& cfg) {
  if (cfg.perturbation == 0.0) return problem.base;
  Rng rng(cfg.seed + 2);
  const Eigen::MatrixXd s = rng.unit_symmetric(problem.base.ambient()) * cfg.perturbation;
  return cayley_retract(problem.base, s);
}

ordered_json record_to_json(const IterRecord& r) {
  ordered_json line;
  line["k"] = r.k;
  line["cost"] = r.cost;
  line["grad_norm"] = r.grad_norm;
  line["step"] = r.step;
  line["symplecticity_residual"] = r.symplecticity_residual;
  line["backtracks"] = r.backtracks;
  return line;
}

std::string record_to_csv(const IterRecord& r) {
  std::ostringstream line;
  line << r.k << "," << std::setprecision(17) << r.cost << "," << r.grad_norm << "," << r.step
       << "," << r.symplecticity_residual << "," << r.backtracks;
  return line.str();
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool csv,
            std::ostream& out, std::ostream& err) {
  json config_json;
  RunConfig cfg;
  std::optional<Problem> problem;
  std::optional<SymplecticPoint> m0;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    config_json = json::parse(in);
    cfg = parse_run_config(config_json);
    // supplied matrices are validated here: dimensions, symplecticity of W,
    // J-symmetry of Q and N
    problem = build_problem(cfg);
    m0 = initial_point(*problem, cfg);
  } catch (const json::parse_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const OptimizerTrace trace = cfg.optimizer == "newton"
                                     ? newton(problem->cost, *m0, cfg.opt)
                                     : steepest_descent(problem->cost, *m0, cfg.opt);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ordered_json summary;
    summary["status"] = to_string(trace.status);
    summary["iters"] = trace.iters();
    summary["final_cost"] = trace.records.back().cost;
    summary["final_grad_norm"] = trace.records.back().grad_norm;
    summary["max_symplecticity_residual"] = trace.max_symplecticity_residual();
    summary["wall_time_s"] = wall;

    if (out_dir.empty()) {
      for (const auto& r : trace.records) out << record_to_json(r).dump() << "\n";
    } else {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      std::ofstream trace_file(dir / "trace.jsonl");
      for (const auto& r : trace.records) trace_file << record_to_json(r).dump() << "\n";
      std::ofstream summary_file(dir / "summary.json");
      summary_file << summary.dump(2) << "\n";
      if (csv) {
        std::ofstream csv_file(dir / "trace.csv");
        csv_file << "k,cost,grad_norm,step,symplecticity_residual,backtracks\n";
        for (const auto& r : trace.records) csv_file << record_to_csv(r) << "\n";
      }
    }
    out << summary.dump() << "\n";
    return trace.status == OptStatus::kConverged ? 0 : 3;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return 3;
  }
}

int cmd_check(const std::string& suite, int n_max, std::uint64_t seed, const std::string& fault,
              std::ostream& out, std::ostream& err) {
  check::CheckOptions opts;
  opts.n_max = n_max;
  opts.seed = seed;
  if (fault == "gamma-sign")
    opts.fault = check::Fault::kGammaSign;
  else if (!fault.empty()) {
    err << "unknown fault \"" << fault << "\"\n";
    return 2;
  }

  std::vector<check::SuiteResult> results;
  try {
    results = check::run_suites(suite, opts);
  } catch (const std::exception& e) {
    err << "check failed to run: " << e.what() << "\n";
    return 2;
  }

  out << std::left << std::setw(12) << "suite" << std::setw(44) << "check" << std::setw(13)
      << "worst" << std::setw(10) << "tol"
      << "status\n";
  bool all_pass = true;
  for (const auto& sr : results) {
    for (const auto& item : sr.items) {
      std::ostringstream worst;
      worst << std::scientific << std::setprecision(3) << item.worst;
      std::ostringstream tol;
      tol << std::scientific << std::setprecision(0) << item.tol;
      out << std::left << std::setw(12) << sr.suite << std::setw(44) << item.name << std::setw(13)
          << worst.str() << std::setw(10) << tol.str() << (item.pass ? "PASS" : "FAIL") << "\n";
      all_pass = all_pass && item.pass;
    }
  }
  if (!all_pass) {
    for (const auto& sr : results)
      for (const auto& item : sr.items)
        if (!item.pass)
          out << "FAIL " << sr.suite << "/" << item.name << " worst=" << item.worst
              << " tol=" << item.tol << " (" << item.detail << ")\n";
    return 1;
  }
  return 0;
}

int cmd_generate(const std::string& kind, int n, std::uint64_t seed, double scale,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    if (n < 1) throw std::invalid_argument("--n must be >= 1");
    Eigen::MatrixXd m;
    if (kind == "symplectic") {
      const SymplecticPoint p = random_symplectic(Dim(n), seed, scale);
      const CertResult cert = certify_symplectic(p.matrix(), 1e-10);
      if (!cert.ok)
        throw std::runtime_error("generated point failed certification at 1e-10, residual " +
                                 std::to_string(cert.residual));
      m = p.matrix();
    } else if (kind == "j_symmetric") {
      m = random_j_symmetric(Dim(n), seed, scale);
    } else if (kind == "symmetric") {
      Rng rng(seed);
      m = rng.symmetric(2 * n, scale);
    } else {
      err << "unknown kind \"" << kind << "\" (expected symplectic, j_symmetric, symmetric)\n";
      return 2;
    }
    write_matrix_json(out_path, m);
    out << "wrote " << kind << " " << 2 * n << "x" << 2 * n << " matrix to " << out_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "generate failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riemannian optimization on the real symplectic group Sp(2n, R)", "sympopt"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool csv = false;
  CLI::App* run = app.add_subcommand("run", "run an optimization problem from a JSON config");
  run->add_option("config", config_path, "path to the run configuration JSON")->required();
  CLI::Option* out_opt = run->add_option("--out", out_dir, "directory for trace and summary files");
  run->add_flag("--csv", csv, "also write trace.csv")->needs(out_opt);

  std::string suite = "all";
  int n_max = 3;
  std::uint64_t check_seed = 1;
  std::string fault;
  CLI::App* chk = app.add_subcommand("check", "run the validation suites");
  chk->add_option("--suite", suite, "gradients | hessians | retraction | all");
  chk->add_option("--n-max", n_max, "largest half-dimension exercised")
      ->check(CLI::PositiveNumber);
  chk->add_option("--seed", check_seed, "base seed");
  chk->add_option("--inject-fault", fault, "debug fault injection")->group("");

  std::string kind;
  int gen_n = 1;
  std::uint64_t gen_seed = 0;
  double gen_scale = 1.0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "write a random matrix in the JSON format");
  gen->add_option("kind", kind, "symplectic | j_symmetric | symmetric")->required();
  gen->add_option("--n", gen_n, "half-dimension")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--scale", gen_scale, "entry scale");
  gen->add_option("--out", gen_out, "output file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  if (run->parsed()) return cmd_run(config_path, out_dir, csv, out, err);
  if (chk->parsed()) return cmd_check(suite, n_max, check_seed, fault, out, err);
  return cmd_generate(kind, gen_n, gen_seed, gen_scale, gen_out, out, err);
}

}  // namespace sympopt::cli
