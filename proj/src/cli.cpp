#include "genbound/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "genbound/cgf_bounds.hpp"
#include "genbound/discrete_oracle.hpp"
#include "genbound/format.hpp"
#include "genbound/gaussian_example.hpp"
#include "genbound/parallel.hpp"
#include "genbound/random.hpp"

namespace genbound::cli {
namespace {

// Flag validation failure; reported with usage text and exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 42;
  std::string output = "-";
  std::string format = "csv";
  bool bits = false;

  double info_scale() const { return bits ? 1.0 / kLn2 : 1.0; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
  cmd->add_option("--output,-o", c.output, "Output file, '-' for standard output")
      ->capture_default_str();
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--bits", c.bits, "Report information quantities in bits");
}

void require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.output == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(c.output, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file " + c.output);
  file << text;
}

std::string bool_cell(bool v) { return v ? "1" : "0"; }

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  Common common;
  double sigma2 = 1.0;
  std::optional<double> c;
  double mean = 1.0;
  double t_min = 0.01;
  double t_max = 0.5;
  int t_steps = 50;
  std::uint64_t mc_samples = 1'000'000;
  int quad_points = 401;
  double quad_width = 10.0;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  require(a.sigma2 > 0.0 && std::isfinite(a.sigma2), "--sigma2 must be positive");
  require(std::isfinite(a.mean), "--mean must be finite");
  require(a.t_steps >= 1, "--t-steps must be >= 1");
  require(a.t_min > 0.0 && a.t_max <= 0.5, "t range must lie in (0, 0.5]");
  require(a.t_steps == 1 || a.t_min < a.t_max, "--t-min must be below --t-max");
  require(a.mc_samples >= 10'000, "--mc-samples must be >= 10000");
  require(a.quad_points >= 3 && a.quad_points % 2 == 1, "--quad-points must be odd and >= 3");
  require(a.quad_width > 0.0, "--quad-width must be positive");

  ExampleConfig cfg = ExampleConfig::with_default_truncation(a.sigma2, a.mean);
  if (a.c) cfg.c = *a.c;
  require(cfg.c > 0.0 && std::isfinite(cfg.c), "--c must be positive");

  SweepSpec spec;
  spec.t_values = SweepSpec::linspace(a.t_min, a.t_max, a.t_steps);
  spec.mc_samples = a.mc_samples;
  spec.quadrature = {a.quad_width, a.quad_points};
  spec.seed = a.common.seed;

  const std::vector<CurvePoint> points = sweep(spec, cfg);
  const double scale = a.common.info_scale();
  emit(a.common,
       a.common.format == "json" ? sweep_to_json(points, scale) : sweep_to_csv(points, scale),
       out);

  std::size_t unconverged = 0;
  for (const CurvePoint& p : points) unconverged += p.converged ? 0 : 1;
  if (unconverged > 0) {
    err << "sweep: " << unconverged << " point(s) failed the quadrature convergence check\n";
    return kNumericalWarning;
  }
  return kOk;
}

// --- certify ---------------------------------------------------------------

struct CertifyArgs {
  Common common;
  int problems = 1000;
  std::string problem_file;
  std::string dump_dir = ".";
};

constexpr const char* kCertifyHeader =
    "index,n,z_count,w_count,gen,mi_bound,lautum_bound,js_bound,theorem2_product,"
    "theorem2_joint,theorem2_mixture,prop1_cap,max_mi,max_js,ok";

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

int cmd_certify(const CertifyArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<ToyLearningProblem> problems;
  if (!a.problem_file.empty()) {
    std::ifstream in(a.problem_file);
    require(static_cast<bool>(in), "cannot read problem file " + a.problem_file);
    try {
      problems.push_back(ToyLearningProblem::from_json(nlohmann::json::parse(in)));
    } catch (const std::exception& e) {
      throw UsageError(std::string("invalid problem file: ") + e.what());
    }
  } else {
    require(a.problems >= 1, "--problems must be >= 1");
    for (int k = 0; k < a.problems; ++k) {
      Rng rng(derive_seed(a.common.seed, "certify", static_cast<std::uint64_t>(k)));
      problems.push_back(random_problem(rng));
    }
  }

  std::vector<std::optional<CertificationReport>> reports(problems.size());
  parallel_for(problems.size(), [&](std::size_t k) { reports[k] = certify_bounds(problems[k]); });

  const double scale = a.common.info_scale();
  std::ostringstream csv;
  csv << kCertifyHeader << '\n';
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::vector<std::string> dumps;
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const ToyLearningProblem& p = problems[k];
    const CertificationReport& r = *reports[k];
    const double max_mi = max_of(r.mi_terms) * scale;
    const double max_js = max_of(r.js_terms) * scale;
    csv << k << ',' << p.n() << ',' << p.z_count() << ',' << p.w_count();
    for (double v : {r.gen, r.mi.value, r.lautum.value, r.js.value, r.theorem2_product.value,
                     r.theorem2_joint.value, r.theorem2_mixture.value, r.cap, max_mi, max_js}) {
      csv << ',' << format_sig(v);
    }
    csv << ',' << bool_cell(r.ok()) << '\n';
    rows.push_back({
        {"index", k},
        {"n", p.n()},
        {"z_count", p.z_count()},
        {"w_count", p.w_count()},
        {"gen", round_sig(r.gen)},
        {"mi_bound", round_sig(r.mi.value)},
        {"lautum_bound", round_sig(r.lautum.value)},
        {"lautum_finite", r.lautum.finite},
        {"js_bound", round_sig(r.js.value)},
        {"theorem2_product", round_sig(r.theorem2_product.value)},
        {"theorem2_joint", round_sig(r.theorem2_joint.value)},
        {"theorem2_mixture", round_sig(r.theorem2_mixture.value)},
        {"prop1_cap", round_sig(r.cap)},
        {"max_mi", round_sig(max_mi)},
        {"max_js", round_sig(max_js)},
        {"ok", r.ok()},
    });

    if (!r.ok()) {
      const std::filesystem::path path =
          std::filesystem::path(a.dump_dir) /
          ("genbound-violation-" + std::to_string(a.common.seed) + "-" + std::to_string(k) +
           ".json");
      nlohmann::ordered_json dump;
      dump["problem"] = p.to_json();
      dump["gen"] = r.gen;
      dump["violations"] = r.violations;
      std::ofstream(path) << dump.dump(2) << '\n';
      dumps.push_back(path.string());
    }
  }
  emit(a.common, a.common.format == "json" ? rows.dump(2) + '\n' : csv.str(), out);

  err << "certify: " << problems.size() << " problem(s), " << dumps.size()
      << " with bound violations\n";
  for (const std::string& d : dumps) err << "  dump: " << d << '\n';
  return dumps.empty() ? kOk : kPropertyViolation;
}

// --- audit -----------------------------------------------------------------

struct AuditArgs {
  Common common;
  int trials = 1000;
  int max_alphabet = 8;
};

int cmd_audit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
  require(a.trials >= 1, "--trials must be >= 1");
  require(a.max_alphabet >= 1, "--max-alphabet must be >= 1");

  std::vector<std::optional<DiscreteJoint>> joints(a.trials);
  std::vector<InequalityAudit> audits(a.trials);
  parallel_for(joints.size(), [&](std::size_t k) {
    Rng rng(derive_seed(a.common.seed, "audit", k));
    joints[k] = random_joint(rng, static_cast<std::size_t>(a.max_alphabet));
    audits[k] = audit_inequalities(*joints[k]);
  });

  const double scale = a.common.info_scale();
  std::ostringstream csv;
  csv << "index,rows,cols,mi,js,tv,pinsker,js_tv,js_mi,dominance\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::size_t failures = 0;
  for (std::size_t k = 0; k < joints.size(); ++k) {
    const InequalityAudit& r = audits[k];
    failures += r.ok() ? 0 : 1;
    csv << k << ',' << joints[k]->rows() << ',' << joints[k]->cols() << ','
        << format_sig(r.mi * scale) << ',' << format_sig(r.js * scale) << ','
        << format_sig(r.tv) << ',' << bool_cell(r.pinsker) << ',' << bool_cell(r.js_tv) << ','
        << bool_cell(r.js_mi) << ',' << bool_cell(r.dominance) << '\n';
    rows.push_back({
        {"index", k},
        {"rows", joints[k]->rows()},
        {"cols", joints[k]->cols()},
        {"mi", round_sig(r.mi * scale)},
        {"js", round_sig(r.js * scale)},
        {"tv", round_sig(r.tv)},
        {"pinsker", r.pinsker},
        {"js_tv", r.js_tv},
        {"js_mi", r.js_mi},
        {"dominance", r.dominance},
    });
  }
  emit(a.common, a.common.format == "json" ? rows.dump(2) + '\n' : csv.str(), out);
  err << "audit: " << joints.size() << " joint(s), " << failures << " with violations\n";
  return failures == 0 ? kOk : kPropertyViolation;
}

// --- psi-inverse -----------------------------------------------------------

struct PsiArgs {
  std::optional<double> sigma;
  std::optional<double> x;
  std::string psi_table;
};

std::vector<std::pair<double, double>> read_psi_table(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read psi table " + path);
  std::vector<std::pair<double, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream fields(line);
    double lambda = 0.0;
    double psi = 0.0;
    if (!(fields >> lambda)) continue;
    require(static_cast<bool>(fields >> psi), "psi table rows need two columns: " + line);
    samples.emplace_back(lambda, psi);
  }
  require(!samples.empty(), "psi table " + path + " has no rows");
  return samples;
}

int cmd_psi_inverse(const PsiArgs& a, std::ostream& out, std::ostream& err) {
  require(a.x.has_value(), "--x is required");
  require(*a.x >= 0.0 && std::isfinite(*a.x), "--x must be finite and non-negative");
  require(a.sigma.has_value() != !a.psi_table.empty(),
          "give exactly one of --sigma or --psi-table");
  if (a.sigma) require(*a.sigma > 0.0 && std::isfinite(*a.sigma), "--sigma must be positive");

  std::optional<CgfEnvelope> env;
  if (a.sigma) {
    env = CgfEnvelope::subgaussian(*a.sigma);
  } else {
    auto samples = read_psi_table(a.psi_table);
    try {
      env = CgfEnvelope::from_table(std::move(samples));
    } catch (const std::invalid_argument& e) {
      err << "psi-inverse: " << e.what() << '\n';
      return kPropertyViolation;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g\n", psi_star_inverse(*env, *a.x));
  out << buf;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-theoretic generalization bounds toolkit", "genbound"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Gaussian mean-estimation bound sweep");
  add_common(sweep_cmd, sweep_args.common);
  sweep_cmd->add_option("--sigma2", sweep_args.sigma2, "Data variance")->capture_default_str();
  sweep_cmd->add_option("--c", sweep_args.c, "Loss truncation level (default sqrt(sigma2)/4)");
  sweep_cmd->add_option("--mean", sweep_args.mean, "Data mean")->capture_default_str();
  sweep_cmd->add_option("--t-min", sweep_args.t_min)->capture_default_str();
  sweep_cmd->add_option("--t-max", sweep_args.t_max)->capture_default_str();
  sweep_cmd->add_option("--t-steps", sweep_args.t_steps)->capture_default_str();
  sweep_cmd->add_option("--mc-samples", sweep_args.mc_samples)->capture_default_str();
  sweep_cmd->add_option("--quad-points", sweep_args.quad_points)->capture_default_str();
  sweep_cmd->add_option("--quad-width", sweep_args.quad_width,
                        "Grid half-width in standard deviations")
      ->capture_default_str();

  CertifyArgs certify_args;
  auto* certify_cmd =
      app.add_subcommand("certify", "Check every bound against exact toy-problem gen error");
  add_common(certify_cmd, certify_args.common);
  certify_cmd->add_option("--problems", certify_args.problems)->capture_default_str();
  certify_cmd->add_option("--problem-file", certify_args.problem_file,
                          "JSON problem to certify instead of random problems");
  certify_cmd->add_option("--dump-dir", certify_args.dump_dir, "Where violation dumps go")
      ->capture_default_str();

  AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand("audit", "Inequality audit on random discrete joints");
  add_common(audit_cmd, audit_args.common);
  audit_cmd->add_option("--trials", audit_args.trials)->capture_default_str();
  audit_cmd->add_option("--max-alphabet", audit_args.max_alphabet)->capture_default_str();

  PsiArgs psi_args;
  auto* psi_cmd = app.add_subcommand("psi-inverse", "Evaluate inf (x + psi(l)) / l");
  psi_cmd->add_option("--sigma", psi_args.sigma, "Subgaussian envelope parameter");
  psi_cmd->add_option("--psi-table", psi_args.psi_table, "File of 'lambda psi' rows");
  psi_cmd->add_option("--x", psi_args.x, "Argument x >= 0");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*sweep_cmd) return cmd_sweep(sweep_args, out, err);
    if (*certify_cmd) return cmd_certify(certify_args, out, err);
    if (*audit_cmd) return cmd_audit(audit_args, out, err);
    return cmd_psi_inverse(psi_args, out, err);
  } catch (const UsageError& e) {
    const CLI::App* active = app.get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << active->help();
    return kUsage;
  }
}

}  // namespace genbound::cli
