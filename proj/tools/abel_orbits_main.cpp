// abel-orbits: numeric analysis of dx/dt = A(t) x^3 + B(t) x^2 + C(t) x
// on [0,1]: periodic-orbit scans, uniqueness criteria with witnesses,
// Lyapunov-type constants, two-orbit constructions and center
// perturbations. Prints one deterministic report per invocation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "abel/analysis.hpp"
#include "abel/spec_format.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abel-orbits: periodic-orbit analysis of Abel equations on [0,1]"};
  app.require_subcommand(1);

  std::string spec_path, json_out, csv_out, spec_out, family = "trig", witness_arg;
  double tol = -1.0, scan_min = 0, scan_max = 0, epsilon = -1.0;
  double v4 = 0, mu = 0, lambda = 0;
  double p_b1 = 0, p_a0 = 0, p_a1 = 0, p_a2 = 0, p_b0 = 0;
  int scan_n = 0, sweep = 0, j_exp = 1, k_exp = 2;

  auto add_common = [&](CLI::App* cmd, bool needs_spec) {
    if (needs_spec)
      cmd->add_option("--spec", spec_path, "equation spec file")->required();
    cmd->add_option("--json", json_out, "write the report to this file as well");
    cmd->add_option("--csv", csv_out, "write scan/trajectory CSV data");
    cmd->add_option("--tol", tol, "integration tolerance (rel = abs)");
    cmd->add_option("--scan-min", scan_min, "scan window lower edge");
    cmd->add_option("--scan-max", scan_max, "scan window upper edge");
    cmd->add_option("--scan-n", scan_n, "scan node count");
    cmd->add_option("--witness", witness_arg, "a,b or a,b,c witness constants");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "full report: constants, criteria, scan");
  add_common(analyze, true);
  CLI::App* orbits = app.add_subcommand("orbits", "periodic-orbit scan only");
  add_common(orbits, true);
  CLI::App* criterion = app.add_subcommand("criterion", "uniqueness criteria with witnesses");
  add_common(criterion, true);
  criterion->add_option("--sweep", sweep, "run a random soundness sweep of this size");
  CLI::App* lyapunov = app.add_subcommand("lyapunov", "Lyapunov-type constants and center verdict");
  add_common(lyapunov, true);
  CLI::App* bifurcate = app.add_subcommand("bifurcate", "two-orbit designer plus verification scan");
  add_common(bifurcate, false);
  bifurcate->add_option("--family", family, "trig or poly")->check(CLI::IsMember({"trig", "poly"}));
  bifurcate->add_option("--v4", v4, "target fourth constant")->required();
  bifurcate->add_option("--mu", mu, "third-constant perturbation")->required();
  bifurcate->add_option("--lambda", lambda, "second-constant perturbation")->required();
  bifurcate->add_option("--j", j_exp, "lower exponent (poly family)");
  bifurcate->add_option("--k", k_exp, "upper exponent (poly family)");
  CLI::App* perturb = app.add_subcommand("perturb", "bifurcation function of the cosine center");
  add_common(perturb, false);
  perturb->add_option("--p-b1", p_b1, "unperturbed coefficient b1~")->required();
  perturb->add_option("--p-a0", p_a0, "perturbation a0~");
  perturb->add_option("--p-a1", p_a1, "perturbation a1~");
  perturb->add_option("--p-a2", p_a2, "perturbation a2~");
  perturb->add_option("--p-b0", p_b0, "perturbation b0~");
  perturb->add_option("--epsilon", epsilon, "perturbation size for validation");
  CLI::App* transform = app.add_subcommand("transform", "remove a zero-mean linear term");
  add_common(transform, true);
  transform->add_option("--spec-out", spec_out, "write the transformed spec here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    abel::AnalysisRequest req;
    CLI::App* active = app.get_subcommands().front();
    req.command = *abel::command_from_string(active->get_name());
    if (!spec_path.empty()) req.equation = abel::parse_spec(read_file(spec_path));
    if (tol > 0) req.options["tol"] = tol;
    if (active->count("--scan-min")) req.options["scan_min"] = scan_min;
    if (active->count("--scan-max")) req.options["scan_max"] = scan_max;
    if (scan_n > 0) req.options["scan_n"] = scan_n;
    if (epsilon >= 0) req.options["epsilon"] = epsilon;
    if (req.command == abel::Command::Bifurcate) {
      req.family = family;
      req.options["v4"] = v4;
      req.options["mu"] = mu;
      req.options["lambda"] = lambda;
      req.options["j"] = j_exp;
      req.options["k"] = k_exp;
    }
    if (req.command == abel::Command::Perturb) {
      req.options["p_b1"] = p_b1;
      req.options["p_a0"] = p_a0;
      req.options["p_a1"] = p_a1;
      req.options["p_a2"] = p_a2;
      req.options["p_b0"] = p_b0;
    }
    if (!witness_arg.empty()) {
      std::array<double, 3> w{0, 0, 0};
      std::stringstream ss(witness_arg);
      std::string part;
      int i = 0;
      while (std::getline(ss, part, ',') && i < 3) w[i++] = std::stod(part);
      if (i < 2) throw std::invalid_argument("--witness needs a,b or a,b,c");
      req.witness = w;
    }
    req.sweep = sweep;
    if (const char* s = std::getenv("ABEL_ORBITS_SEED"))
      req.seed = std::strtoull(s, nullptr, 10);

    const abel::Report report = abel::run(req);
    const std::string body = abel::dump_deterministic(report.doc);
    std::cout << body;
    if (!json_out.empty()) write_file(json_out, body);
    if (!csv_out.empty()) {
      write_file(csv_out, report.csv_scan);
      if (!report.csv_trajectories.empty())
        write_file(csv_out + ".traj.csv", report.csv_trajectories);
    }
    if (!spec_out.empty() && !report.transformed_spec.empty())
      write_file(spec_out, report.transformed_spec);
    return report.inconsistent ? 3 : 0;
  } catch (const abel::SpecParseError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
