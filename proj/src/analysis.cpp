#include "abel/analysis.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "abel/integrate.hpp"
#include "abel/spec_format.hpp"

namespace abel {

using nlohmann::ordered_json;

const char* to_string(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Orbits: return "orbits";
    case Command::Criterion: return "criterion";
    case Command::Lyapunov: return "lyapunov";
    case Command::Bifurcate: return "bifurcate";
    case Command::Perturb: return "perturb";
    case Command::Transform: return "transform";
  }
  return "?";
}

std::optional<Command> command_from_string(const std::string& s) {
  for (Command c : {Command::Analyze, Command::Orbits, Command::Criterion,
                    Command::Lyapunov, Command::Bifurcate, Command::Perturb,
                    Command::Transform})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Deterministic dump

namespace {

void dump_value(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in + ordered_json(it.key()).dump() + ": ";
        dump_value(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump_value(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) out += format_double(v);
      else out += ordered_json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")).dump();
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_deterministic(const ordered_json& j, int indent) {
  std::string out;
  dump_value(j, out, indent, 0);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// JSON views

namespace {

ordered_json coefficient_to_json(const CoefficientFunction& f) {
  ordered_json j;
  if (f.is_trig()) {
    const TrigPoly& p = f.trig();
    j["trig"] = {{"c0", p.c0}, {"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
  } else if (f.is_poly()) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : f.poly().terms)
      terms.push_back(ordered_json::array({t.exponent, t.coefficient}));
    j["poly"] = {{"terms", terms}};
  } else {
    j["samples"] = {{"count", f.sampled().values.size()}};
  }
  return j;
}

ordered_json sign_class_to_json(const SignClass& sc) {
  ordered_json j;
  j["verdict"] = to_string(sc.verdict);
  j["certified"] = sc.certified_exact ? "exact" : "grid";
  j["min"] = {{"t", sc.min_t}, {"value", sc.min_value}};
  j["max"] = {{"t", sc.max_t}, {"value", sc.max_value}};
  return j;
}

ordered_json orbit_to_json(const OrbitRecord& o) {
  ordered_json j;
  j["x0"] = o.x0;
  j["multiplier"] = o.multiplier;
  j["stability"] = to_string(o.stability);
  j["residual"] = o.residual;
  return j;
}

ordered_json scan_to_json(const ScanResult& scan) {
  ordered_json j;
  ordered_json orbits = ordered_json::array();
  for (const auto& o : scan.orbits) orbits.push_back(orbit_to_json(o));
  j["orbits"] = orbits;
  j["nonzero_orbit_count"] = scan.nonzero_orbit_count();
  ordered_json bands = ordered_json::array();
  for (const auto& b : scan.center_bands)
    bands.push_back({{"x_lo", b.x_lo}, {"x_hi", b.x_hi}});
  j["center_bands"] = bands;
  j["completed_nodes"] = scan.completed_nodes;
  j["escaped_nodes"] = scan.escaped_nodes;
  j["warnings"] = scan.warnings;
  return j;
}

ordered_json lyapunov_to_json(const LyapunovConstants& c) {
  ordered_json j;
  j["v2"] = c.v2;
  j["v3"] = c.v3;
  j["v4"] = c.v4;
  j["method"] = c.method == LyapunovMethod::ClosedFormTrig1   ? "closed_form_trig1"
                : c.method == LyapunovMethod::ClosedFormPoly3 ? "closed_form_poly3"
                                                              : "quadrature";
  j["center_verdict"] = c.center_verdict == CenterVerdict::Center      ? "center"
                        : c.center_verdict == CenterVerdict::NotCenter ? "not_center"
                                                                       : "undecidable";
  return j;
}

ordered_json zero_classification_to_json(const ZeroClassification& z) {
  ordered_json j;
  j["kind"] = z.kind == ZeroKind::CenterBand   ? "center_band"
              : z.kind == ZeroKind::SemiStable ? "semi_stable"
                                               : "ordinary_multiplicity";
  j["multiplicity"] = z.multiplicity;
  if (z.multiplicity_is_lower_bound) j["multiplicity_is_lower_bound"] = true;
  if (z.kind == ZeroKind::SemiStable) j["semistable_sign"] = z.semistable_sign;
  ordered_json probes = ordered_json::array();
  for (const auto& [x, d] : z.probes)
    probes.push_back({{"x0", x}, {"displacement", d}});
  j["probes"] = probes;
  if (!z.notes.empty()) j["notes"] = z.notes;
  return j;
}

ScanConfig scan_config_from_options(const std::map<std::string, double>& opt) {
  ScanConfig cfg;
  if (auto it = opt.find("scan_min"); it != opt.end()) cfg.x_min = it->second;
  if (auto it = opt.find("scan_max"); it != opt.end()) cfg.x_max = it->second;
  if (auto it = opt.find("scan_n"); it != opt.end())
    cfg.n_points = static_cast<int>(it->second);
  if (auto it = opt.find("tol"); it != opt.end()) {
    cfg.rel_tol = it->second;
    cfg.abs_tol = it->second;
  }
  return cfg;
}

double option_or(const std::map<std::string, double>& opt, const std::string& key,
                 double fallback) {
  const auto it = opt.find(key);
  return it == opt.end() ? fallback : it->second;
}

double require_option(const std::map<std::string, double>& opt,
                      const std::string& key) {
  const auto it = opt.find(key);
  if (it == opt.end())
    throw std::invalid_argument("missing required option --" + key);
  return it->second;
}

}  // namespace

ordered_json equation_to_json(const AbelEquation& eq) {
  ordered_json j;
  j["A"] = coefficient_to_json(eq.A);
  j["B"] = coefficient_to_json(eq.B);
  j["C"] = coefficient_to_json(eq.C);
  return j;
}

ordered_json criterion_report_to_json(const CriterionReport& r) {
  ordered_json j;
  j["criterion"] = r.criterion;
  j["applies"] = r.applies;
  if (r.witness) {
    j["witness"] = {{"a", r.witness->a},
                    {"b", r.witness->b},
                    {"c", r.witness->c},
                    {"kind", to_string(r.witness->kind)}};
  }
  j["sign_evidence"] = sign_class_to_json(r.sign_evidence);
  if (r.orbit_bound >= 0) j["orbit_bound"] = r.orbit_bound;
  j["hyperbolic_guarantee"] = r.hyperbolic_guarantee;
  if (r.location) {
    j["location"] = {{"lower", r.location->lower},
                     {"upper", r.location->upper},
                     {"guaranteed_exists", r.location->guaranteed_exists},
                     {"description", r.location->description}};
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

// ---------------------------------------------------------------------------
// Soundness sweep

SweepResult criterion_soundness_sweep(bool poly_family, int n_draws,
                                      std::uint64_t seed, int j, int k) {
  SweepResult out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);

  ScanConfig cfg;
  cfg.x_min = -20.0;
  cfg.x_max = 20.0;
  cfg.n_points = 801;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-10;

  while (out.applicable < n_draws) {
    ++out.draws;
    const double a0 = u(rng), a1 = u(rng), a2 = u(rng);
    const double b0 = u(rng), b1 = u(rng), b2 = u(rng);

    AbelEquation eq;
    std::optional<Witness> w;
    if (poly_family) {
      if (center_test_poly3(a0, a1, a2, b0, b1, b2, j, k)) continue;
      PolyConditions pc = poly_uniqueness_conditions(a0, a1, a2, b0, b1, b2, j, k);
      if (!pc.witness) continue;
      eq = AbelEquation(
          CoefficientFunction(MonomialPoly::from_terms({{0, a0}, {j, a1}, {k, a2}})),
          CoefficientFunction(MonomialPoly::from_terms({{0, b0}, {j, b1}, {k, b2}})));
      w = witness_search(eq);
      if (!w) continue;  // conditions held but certification failed
    } else {
      if (center_test_trig1(a0, a1, a2, b0, b1, b2)) continue;
      TrigConditions tc = trig_uniqueness_conditions(a0, a1, a2, b0, b1, b2);
      if (!tc.witness) continue;
      eq = AbelEquation(CoefficientFunction(TrigPoly{a0, {a1}, {a2}}),
                        CoefficientFunction(TrigPoly{b0, {b1}, {b2}}));
      w = witness_search(eq);
      if (!w) continue;
    }
    ++out.applicable;

    const ScanResult scan = find_periodic_orbits(eq, cfg);
    const int nz = scan.nonzero_orbit_count();
    out.orbits_found += nz;
    if (nz > 1) {
      ++out.violations;
      out.details.push_back("draw " + std::to_string(out.applicable) + ": " +
                            std::to_string(nz) + " non-zero orbits");
      continue;
    }
    for (const auto& o : scan.orbits) {
      if (o.stability == Stability::ZeroSolution) continue;
      if (o.stability == Stability::NonHyperbolic) {
        ++out.violations;
        out.details.push_back("draw " + std::to_string(out.applicable) +
                              ": orbit at x0 = " + std::to_string(o.x0) +
                              " has |multiplier - 1| <= 1e-6");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Command dispatch

namespace {

const AbelEquation& require_equation(const AnalysisRequest& req) {
  if (!req.equation)
    throw std::invalid_argument("this command requires --spec <file>");
  return *req.equation;
}

void append_scan_csv(Report& report, const ScanResult& scan) {
  std::string& csv = report.csv_scan;
  csv = "x0,displacement\n";
  for (const auto& [x, d] : scan.displacement)
    csv += format_double(x) + "," + format_double(d) + "\n";
  std::string& traj = report.csv_trajectories;
  traj = "orbit_index,x0,t,x\n";
  int idx = 0;
  for (const auto& o : scan.orbits) {
    for (size_t i = 0; i < o.trajectory.times.size(); ++i)
      traj += std::to_string(idx) + "," + format_double(o.x0) + "," +
              format_double(o.trajectory.times[i]) + "," +
              format_double(o.trajectory.values[i]) + "\n";
    ++idx;
  }
}

void run_orbits(const AnalysisRequest& req, Report& report) {
  const AbelEquation& eq = require_equation(req);
  const ScanConfig cfg = scan_config_from_options(req.options);
  const ScanResult scan = find_periodic_orbits(eq, cfg);
  report.doc["results"]["scan"] = scan_to_json(scan);
  append_scan_csv(report, scan);
}

void run_lyapunov(const AnalysisRequest& req, Report& report) {
  const AbelEquation& eq = require_equation(req);
  report.doc["results"]["lyapunov"] = lyapunov_to_json(lyapunov_constants(eq));
  report.doc["results"]["lyapunov_quadrature"] =
      lyapunov_to_json(lyapunov_constants_quadrature(eq));
}

void run_criterion(const AnalysisRequest& req, Report& report) {
  const AbelEquation& eq = require_equation(req);
  ordered_json arr = ordered_json::array();
  std::vector<CriterionReport> reports;
  if (req.witness && req.witness->at(2) != 0.0) {
    reports.push_back(
        cubic_dulac_criterion(eq, (*req.witness)[0], (*req.witness)[1],
                              (*req.witness)[2]));
  } else if (req.witness && !eq.c_is_zero()) {
    reports.push_back(zero_mean_c_criterion(
        eq, std::make_pair((*req.witness)[0], (*req.witness)[1])));
  } else {
    reports = evaluate_criteria(eq);
  }
  for (const auto& r : reports) arr.push_back(criterion_report_to_json(r));
  report.doc["results"]["criteria"] = arr;

  if (req.sweep > 0) {
    const bool poly = eq.A.is_poly() && eq.B.is_poly();
    int j = 1, k = 2;
    if (const auto jk = common_poly_exponents(eq)) { j = jk->first; k = jk->second; }
    const SweepResult sw = criterion_soundness_sweep(poly, req.sweep, req.seed, j, k);
    ordered_json js;
    js["family"] = poly ? "poly" : "trig";
    js["seed"] = req.seed;
    js["draws"] = sw.draws;
    js["applicable"] = sw.applicable;
    js["orbits_found"] = sw.orbits_found;
    js["violations"] = sw.violations;
    js["details"] = sw.details;
    report.doc["results"]["soundness_sweep"] = js;
    if (sw.violations > 0) report.inconsistent = true;
  }
}

void run_analyze(const AnalysisRequest& req, Report& report) {
  const AbelEquation& eq = require_equation(req);
  const bool c_zero = eq.c_is_zero();
  if (c_zero) {
    report.doc["results"]["lyapunov"] = lyapunov_to_json(lyapunov_constants(eq));
    report.doc["results"]["zero_solution"] = zero_classification_to_json(
        classify_zero(eq, option_or(req.options, "probe_radius", 0.25)));
  }
  const std::vector<CriterionReport> criteria = evaluate_criteria(eq);
  ordered_json arr = ordered_json::array();
  for (const auto& r : criteria) arr.push_back(criterion_report_to_json(r));
  report.doc["results"]["criteria"] = arr;

  const ScanConfig cfg = scan_config_from_options(req.options);
  const ScanResult scan = find_periodic_orbits(eq, cfg);
  report.doc["results"]["scan"] = scan_to_json(scan);
  append_scan_csv(report, scan);

  // Falsification channel: an applicable criterion bound must dominate
  // the number of non-zero orbits the scanner can exhibit.
  const int nz = scan.nonzero_orbit_count();
  bool inconsistent = false;
  std::string why;
  for (const auto& r : criteria) {
    if (!r.applies || r.orbit_bound < 0) continue;
    if (nz > r.orbit_bound) {
      inconsistent = true;
      why = r.criterion + " bounds non-zero orbits by " +
            std::to_string(r.orbit_bound) + " but the scan found " +
            std::to_string(nz);
    }
  }
  if (!scan.center_bands.empty() && c_zero) {
    // A center band contradicts any finite bound with hyperbolicity.
    for (const auto& r : criteria)
      if (r.applies && r.orbit_bound == 1 && r.hyperbolic_guarantee) {
        inconsistent = true;
        why = r.criterion + " guarantees hyperbolicity but the scan found a "
              "center band";
      }
  }
  report.doc["inconsistency"] = inconsistent;
  if (inconsistent) report.doc["inconsistency_reason"] = why;
  report.inconsistent = inconsistent;
}

void run_bifurcate(const AnalysisRequest& req, Report& report) {
  const std::string family = req.family.empty() ? "trig" : req.family;
  const double v4 = require_option(req.options, "v4");
  const double mu = require_option(req.options, "mu");
  const double lambda = require_option(req.options, "lambda");
  AbelEquation eq;
  if (family == "trig") {
    eq = design_two_orbit_trig(v4, mu, lambda);
  } else if (family == "poly") {
    const int j = static_cast<int>(option_or(req.options, "j", 1));
    const int k = static_cast<int>(option_or(req.options, "k", 2));
    eq = design_two_orbit_poly(j, k, v4, mu, lambda);
  } else {
    throw std::invalid_argument("--family must be trig or poly");
  }
  report.doc["results"]["equation"] = equation_to_json(eq);
  report.doc["results"]["spec"] = serialize_spec(eq);

  const BifurcationPrediction pred = predict_bifurcation_roots(v4, mu, lambda);
  ordered_json pj;
  pj["orbits_exist"] = pred.orbits_exist;
  if (pred.orbits_exist) {
    pj["x_inner"] = pred.x_inner;
    pj["x_outer"] = pred.x_outer;
    pj["gap_inner"] = pred.gap_inner;
    pj["gap_outer"] = pred.gap_outer;
  }
  report.doc["results"]["prediction"] = pj;

  ScanConfig cfg = scan_config_from_options(req.options);
  if (!req.options.count("scan_min") && pred.orbits_exist) {
    cfg.x_min = -8.0 * pred.x_outer;
    cfg.x_max = 8.0 * pred.x_outer;
    cfg.n_points = 1601;
  }
  const ScanResult scan = find_periodic_orbits(eq, cfg);
  report.doc["results"]["scan"] = scan_to_json(scan);
  append_scan_csv(report, scan);
}

PerturbationParams perturb_params(const AnalysisRequest& req) {
  PerturbationParams p;
  p.b1_tilde = require_option(req.options, "p_b1");
  p.a0_tilde = option_or(req.options, "p_a0", 0.0);
  p.a1_tilde = option_or(req.options, "p_a1", 0.0);
  p.a2_tilde = option_or(req.options, "p_a2", 0.0);
  p.b0_tilde = option_or(req.options, "p_b0", 0.0);
  p.epsilon = option_or(req.options, "epsilon", 0.0);
  return p;
}

void run_perturb(const AnalysisRequest& req, Report& report) {
  const PerturbationParams p = perturb_params(req);
  ordered_json pj;
  pj["b1_tilde"] = p.b1_tilde;
  pj["a0_tilde"] = p.a0_tilde;
  pj["a1_tilde"] = p.a1_tilde;
  pj["a2_tilde"] = p.a2_tilde;
  pj["b0_tilde"] = p.b0_tilde;
  pj["epsilon"] = p.epsilon;
  report.doc["results"]["params"] = pj;

  const BifurcationRoots roots = predict_bifurcating_orbits(p);
  ordered_json rj = ordered_json::array();
  for (const auto& r : roots.roots)
    rj.push_back({{"rho", r.rho}, {"simple", r.simple}, {"w_hat_slope", r.w_hat_slope}});
  report.doc["results"]["w_hat_roots"] = rj;
  report.doc["results"]["degenerate"] = roots.degenerate;
  report.doc["results"]["closed_form_max_discrepancy"] = w_hat_max_discrepancy(p);

  if (p.epsilon > 0.0) {
    const ValidationReport v = validate_against_integration(p);
    ordered_json vj = ordered_json::array();
    for (const auto& row : v.rows) {
      ordered_json r;
      r["rho_predicted"] = row.rho_predicted;
      r["matched"] = row.matched;
      if (row.matched) {
        r["x0_found"] = row.x0_found;
        r["gap"] = row.gap;
        r["x0_found_half"] = row.x0_found_half;
        r["gap_half"] = row.gap_half;
        r["multiplier"] = row.multiplier;
      }
      vj.push_back(r);
    }
    report.doc["results"]["validation"] = vj;
    report.doc["results"]["unmatched_orbits"] = v.unmatched_orbits;
    report.doc["results"]["orbit_count"] = v.orbit_count;
  }
}

void run_transform(const AnalysisRequest& req, Report& report) {
  const AbelEquation& eq = require_equation(req);
  const double ic = integrate_exact(eq.C, 0.0, 1.0);
  report.doc["results"]["c_mean"] = ic;
  if (std::abs(ic) > 1e-10 * std::max(1.0, eq.C.coefficient_scale()))
    throw std::invalid_argument(
        "transform requires int_0^1 C = 0 (got " + format_double(ic) + ")");
  constexpr int kNodes = 1025;
  const CoefficientFunction a2t(SampledFunction::from_function(
      [&eq](double t) {
        return eq.A.eval(t) * std::exp(2.0 * integrate_exact(eq.C, 0.0, t));
      },
      kNodes));
  const CoefficientFunction b2t(SampledFunction::from_function(
      [&eq](double t) {
        return eq.B.eval(t) * std::exp(integrate_exact(eq.C, 0.0, t));
      },
      kNodes));
  const AbelEquation transformed(a2t, b2t);
  report.transformed_spec = serialize_spec(transformed);
  report.doc["results"]["transformed_spec"] = report.transformed_spec;
}

}  // namespace

Report run(const AnalysisRequest& request) {
  Report report;
  report.doc["tool"] = "abel-orbits";
  report.doc["command"] = to_string(request.command);
  if (request.equation)
    report.doc["equation"] = equation_to_json(*request.equation);
  ordered_json opts;
  for (const auto& [key, value] : request.options) opts[key] = value;
  report.doc["options"] = opts;
  report.doc["results"] = ordered_json::object();

  switch (request.command) {
    case Command::Analyze: run_analyze(request, report); break;
    case Command::Orbits: run_orbits(request, report); break;
    case Command::Criterion: run_criterion(request, report); break;
    case Command::Lyapunov: run_lyapunov(request, report); break;
    case Command::Bifurcate: run_bifurcate(request, report); break;
    case Command::Perturb: run_perturb(request, report); break;
    case Command::Transform: run_transform(request, report); break;
  }

  ordered_json diag;
  diag["rel_tol"] = option_or(request.options, "tol", 1e-10);
  diag["abs_tol"] = option_or(request.options, "tol", 1e-10);
  report.doc["diagnostics"] = diag;
  if (!report.doc.contains("inconsistency"))
    report.doc["inconsistency"] = report.inconsistent;
  return report;
}

}  // namespace abel
