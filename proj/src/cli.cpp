#include "indefsl/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <vector>

#include "indefsl/errors.hpp"
#include "indefsl/locate.hpp"
#include "indefsl/oracle.hpp"
#include "indefsl/problem_io.hpp"
#include "json.hpp"

namespace indefsl {

namespace {

using nlohmann::ordered_json;

// Shortest round-trip representation, identical on every run.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string short_num(double v, int prec = 10) {
  if (std::isnan(v)) return "-";
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

ordered_json jnum(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

struct Check {
  std::string name;
  std::string status;  // PASS, FAIL or SKIP
  std::string detail;
};

struct SolveOutcome {
  bool certified = false;        // false: oracle-only fallback
  std::string fallback_reason;
  NonrealResult res;
  std::vector<EigenvalueRecord> records;
};

struct OracleOutcome {
  Discretization disc;
  OracleSpectrum spectrum;
  std::vector<cplx> nonreal;
  int negative_count = 0;
};

LocateOptions locate_options(const RunConfig& cfg) {
  LocateOptions o;
  o.newton_tol = cfg.tol;
  o.contour_tol = cfg.contour_tol;
  o.margin = cfg.margin;
  o.delta_im = cfg.delta_im;
  return o;
}

OracleOutcome run_oracle(const Problem& p, int n) {
  OracleOutcome o;
  o.disc = discretize(p, n);
  o.spectrum = eigen_all(o.disc);
  o.nonreal = nonreal_eigenvalues(o.spectrum);
  o.negative_count = definite_negative_count(o.disc);
  return o;
}

std::vector<EigenvalueRecord> oracle_records(const OracleOutcome& o) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<EigenvalueRecord> out;
  for (const cplx& z : o.nonreal) {
    EigenvalueRecord r;
    r.lambda = z;
    r.source = Source::oracle;
    r.newton_residual = nan;
    r.identity = {nan, nan, nan, nan, nan};
    out.push_back(r);
  }
  return out;
}

SolveOutcome run_solve(const Problem& p, const RunConfig& cfg, const OracleOutcome* oracle) {
  SolveOutcome s;
  try {
    s.res = find_nonreal(p, locate_options(cfg));
    s.certified = true;
    s.records = s.res.records;
    return s;
  } catch (const HypothesisError& e) {
    s.fallback_reason = e.what();
  }
  // No a priori box: the contour search cannot be certified, report the oracle instead.
  OracleOutcome local;
  if (!oracle) {
    local = run_oracle(p, cfg.n_oracle);
    oracle = &local;
  }
  s.records = oracle_records(*oracle);
  return s;
}

BoundBox scaled(BoundBox b, double s) {
  b.re_max *= s;
  b.im_max *= s;
  return b;
}

bool admitted_by_all(const BoundsReport& b, cplx z, double scale) {
  return scaled(b.xw, scale).admits(z) && scaled(b.w2, scale).admits(z) &&
         scaled(b.imaginary, scale).admits(z);
}

bool purely_imaginary(cplx z) { return std::abs(z.real()) <= 1e-8 * std::abs(z); }

std::vector<Check> run_checks(const Problem& p, const RunConfig& cfg, const BoundsReport& bounds,
                              const SolveOutcome& s, const OracleOutcome& o) {
  std::vector<Check> checks;
  auto add = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok ? "PASS" : "FAIL", std::move(detail)});
  };
  auto skip = [&](std::string name, std::string detail) {
    checks.push_back({std::move(name), "SKIP", std::move(detail)});
  };

  if (!s.certified) {
    for (const char* name : {"newton_residual", "identity_wphi2", "identity_dirichlet",
                             "gradient_bound", "count_cap", "symmetric_closure", "bounds_solver",
                             "oracle_agreement"})
      skip(name, "no applicable search region: " + s.fallback_reason);
  } else {
    double worst_newton = 0.0, worst_wphi2 = 0.0, worst_dir = 0.0, worst_grad = 0.0,
           worst_refl = 0.0;
    bool ok_newton = true, ok_wphi2 = true, ok_dir = true, ok_grad = true, ok_refl = true;
    int imaginary_records = 0;
    for (const EigenvalueRecord& r : s.records) {
      worst_newton = std::max(worst_newton, r.newton_residual);
      ok_newton = ok_newton && r.newton_residual <= 1e-9;
      worst_wphi2 = std::max(worst_wphi2, r.identity.wphi2);
      ok_wphi2 = ok_wphi2 && r.identity.wphi2 <= 1e-7;
      worst_dir = std::max(worst_dir, r.identity.dirichlet_form);
      ok_dir = ok_dir && r.identity.dirichlet_form <= 1e-6;
      const double ratio = r.identity.phi_prime_sq / std::max(r.identity.gradient_bound, 1e-300);
      worst_grad = std::max(worst_grad, ratio);
      ok_grad = ok_grad && r.identity.phi_prime_sq <= r.identity.gradient_bound * (1.0 + 1e-6);
      if (p.flags().symmetric && purely_imaginary(r.lambda)) {
        ++imaginary_records;
        worst_refl = std::max(worst_refl, r.identity.reflection);
        ok_refl = ok_refl && r.identity.reflection <= 1e-7;
      }
    }
    add("newton_residual", ok_newton, "max " + num(worst_newton) + " <= 1e-9");
    add("identity_wphi2", ok_wphi2, "max |int w|phi|^2| " + num(worst_wphi2) + " <= 1e-7");
    add("identity_dirichlet", ok_dir,
        "max |int |phi'|^2 + q|phi|^2| " + num(worst_dir) + " <= 1e-6");
    add("gradient_bound", ok_grad,
        "max ||phi'||^2 / (4 ||q_-||_1^2) = " + num(worst_grad) + " <= 1 + 1e-6");
    if (p.flags().symmetric && imaginary_records > 0)
      add("reflection", ok_refl, "max ||phi(-x)| - |phi(x)|| " + num(worst_refl) + " <= 1e-7");
    else
      skip("reflection", "no imaginary eigenvalue of a symmetric problem");

    int total = 0;
    for (const auto& r : s.records) total += r.winding;
    add("count_cap", s.res.cap_satisfied && total <= 2 * s.res.negative_count,
        "found " + std::to_string(total) + " <= 2n = " + std::to_string(2 * s.res.negative_count));
    if (p.flags().symmetric)
      add("symmetric_closure", s.res.symmetric_closed, "closed under lambda -> -conj(lambda)");
    else
      skip("symmetric_closure", "problem is not symmetric");

    bool ok = true;
    for (const auto& r : s.records) ok = ok && admitted_by_all(bounds, r.lambda, cfg.box_scale);
    add("bounds_solver", ok,
        std::to_string(s.records.size()) + " solver eigenvalues checked against every applicable box");

    // Oracle agreement in both directions, restricted to the certified region.
    const double rel = 1e-3;
    bool agree = true;
    std::size_t in_region = 0;
    for (const auto& r : s.records) {
      bool hit = false;
      for (const cplx& z : o.nonreal) hit = hit || std::abs(z - r.lambda) <= rel * std::abs(z);
      agree = agree && hit;
    }
    const Rect& sr = s.res.searched;
    for (const cplx& z : o.nonreal) {
      const cplx up{z.real(), std::abs(z.imag())};
      if (!sr.contains(up) || up.imag() < s.res.delta_im) continue;
      ++in_region;
      bool hit = false;
      for (const auto& r : s.records) hit = hit || std::abs(z - r.lambda) <= rel * std::abs(z);
      agree = agree && hit;
    }
    add("oracle_agreement", agree,
        std::to_string(s.records.size()) + " solver / " + std::to_string(in_region) +
            " oracle eigenvalues matched within 1e-3 relative (n=" + std::to_string(cfg.n_oracle) +
            ")");
  }

  bool ok = true;
  for (const cplx& z : o.nonreal) ok = ok && admitted_by_all(bounds, z, cfg.box_scale);
  add("bounds_oracle", ok,
      std::to_string(o.nonreal.size()) + " oracle eigenvalues checked against every applicable box");

  const OscillationCount osc = oscillation_count(p.q(), p.w().absolute());
  add("negative_count", osc.zeros_interior == o.negative_count,
      "oscillation " + std::to_string(osc.zeros_interior) + ", oracle (A,|W|) " +
          std::to_string(o.negative_count));
  return checks;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (c.status == "FAIL") return false;
  return true;
}

// ---- serialization --------------------------------------------------------------------------

ordered_json problem_json(const Problem& p, const RunConfig& cfg) {
  ordered_json j;
  if (cfg.preset) {
    j["preset"] = *cfg.preset;
    j["mu"] = *cfg.mu;
  } else {
    j["path"] = *cfg.problem_path;
  }
  if (p.sign_ramp_half_width()) j["sign_ramp_half_width"] = *p.sign_ramp_half_width();
  const ProblemFlags& f = p.flags();
  j["flags"] = {{"w_nonvanishing_ae", f.w_nonvanishing_ae},
                {"single_turning_point", f.single_turning_point},
                {"symmetric", f.symmetric}};
  const NormData nd = norms(p);
  j["norms"] = {{"q_minus_l1", nd.q_minus_l1}, {"w_sup", nd.w_sup}, {"wprime_l2", nd.wprime_l2},
                {"q0", nd.q0}, {"w0", nd.w0}};
  return j;
}

ordered_json box_json(const BoundBox& b) {
  return {{"bound", to_string(b.kind)},
          {"applicable", b.applicable},
          {"eps_used", b.eps_used ? jnum(*b.eps_used) : ordered_json(nullptr)},
          {"re_max", b.applicable ? jnum(b.re_max) : ordered_json(nullptr)},
          {"im_max", b.applicable ? jnum(b.im_max) : ordered_json(nullptr)},
          {"imaginary_axis_only", b.imaginary_axis_only},
          {"reason", b.reason}};
}

std::vector<const BoundBox*> boxes(const BoundsReport& b) {
  return {&b.xw, &b.w2, &b.imaginary, &b.region};
}

ordered_json bounds_json(const BoundsReport& b) {
  ordered_json arr = ordered_json::array();
  for (const BoundBox* x : boxes(b)) arr.push_back(box_json(*x));
  return arr;
}

ordered_json record_json(const EigenvalueRecord& r) {
  return {{"re", r.lambda.real()},
          {"im", r.lambda.imag()},
          {"winding", r.winding},
          {"newton_residual", jnum(r.newton_residual)},
          {"wphi2_residual", jnum(r.identity.wphi2)},
          {"dirichlet_residual", jnum(r.identity.dirichlet_form)},
          {"phi_prime_sq", jnum(r.identity.phi_prime_sq)},
          {"gradient_bound", jnum(r.identity.gradient_bound)},
          {"reflection", jnum(r.identity.reflection)},
          {"source", to_string(r.source)}};
}

ordered_json solve_json(const SolveOutcome& s) {
  ordered_json j;
  j["mode"] = s.certified ? "certified" : "oracle_only";
  if (!s.certified) j["fallback_reason"] = s.fallback_reason;
  if (s.certified) {
    j["searched"] = {{"re_lo", s.res.searched.re_lo}, {"re_hi", s.res.searched.re_hi},
                     {"im_lo", s.res.searched.im_lo}, {"im_hi", s.res.searched.im_hi}};
    j["upper_count"] = s.res.upper_count;
    j["negative_count"] = s.res.negative_count;
    j["zero_is_eigenvalue"] = s.res.zero_is_eigenvalue;
    j["cap_satisfied"] = s.res.cap_satisfied;
    j["symmetric_closed"] = s.res.symmetric_closed;
    j["caveat"] = s.res.caveat;
  }
  ordered_json recs = ordered_json::array();
  for (const auto& r : s.records) recs.push_back(record_json(r));
  j["records"] = recs;
  return j;
}

ordered_json oracle_json(const OracleOutcome& o) {
  ordered_json nr = ordered_json::array();
  for (const cplx& z : o.nonreal) nr.push_back({{"re", z.real()}, {"im", z.imag()}});
  const auto& ev = o.spectrum.eigenvalues;
  return {{"n", o.disc.n},
          {"h", o.disc.h},
          {"shifted_nodes", o.disc.shifted_nodes},
          {"eigenvalue_count", ev.size()},
          {"min_real", ev.empty() ? ordered_json(nullptr) : ordered_json(ev.front().real())},
          {"max_real", ev.empty() ? ordered_json(nullptr) : ordered_json(ev.back().real())},
          {"max_residual", o.spectrum.max_residual},
          {"definite_negative_count", o.negative_count},
          {"nonreal", nr}};
}

ordered_json checks_json(const std::vector<Check>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks)
    arr.push_back({{"check", c.name}, {"status", c.status}, {"detail", c.detail}});
  return arr;
}

constexpr const char* kRecordHeader =
    "re,im,winding,newton_residual,wphi2_residual,dirichlet_residual,source";

std::string record_csv_row(const EigenvalueRecord& r) {
  return num(r.lambda.real()) + "," + num(r.lambda.imag()) + "," + std::to_string(r.winding) + "," +
         num(r.newton_residual) + "," + num(r.identity.wphi2) + "," +
         num(r.identity.dirichlet_form) + "," + to_string(r.source);
}

void records_csv(std::ostream& os, const std::vector<EigenvalueRecord>& recs) {
  os << kRecordHeader << "\n";
  for (const auto& r : recs) os << record_csv_row(r) << "\n";
}

void header_table(std::ostream& os, const Problem& p, const RunConfig& cfg) {
  if (cfg.preset)
    os << "problem: " << *cfg.preset << " mu=" << num(*cfg.mu);
  else
    os << "problem: " << *cfg.problem_path;
  if (p.sign_ramp_half_width())
    os << " (sgn modelled by a ramp of half-width " << num(*p.sign_ramp_half_width()) << ")";
  os << "\n";
  const ProblemFlags& f = p.flags();
  os << "flags: single_turning_point=" << (f.single_turning_point ? "yes" : "no")
     << " symmetric=" << (f.symmetric ? "yes" : "no") << "\n";
}

void bounds_table(std::ostream& os, const BoundsReport& b) {
  os << std::left << std::setw(22) << "bound" << std::setw(12) << "applicable" << std::setw(16)
     << "eps" << std::setw(16) << "re_max" << std::setw(16) << "im_max"
     << "note\n";
  for (const BoundBox* x : boxes(b)) {
    os << std::left << std::setw(22) << to_string(x->kind) << std::setw(12)
       << (x->applicable ? "yes" : "no") << std::setw(16)
       << (x->eps_used ? short_num(*x->eps_used) : "-") << std::setw(16)
       << (x->applicable ? short_num(x->re_max) : "-") << std::setw(16)
       << (x->applicable ? short_num(x->im_max) : "-") << x->reason
       << (x->imaginary_axis_only ? " (imaginary axis only)" : "") << "\n";
  }
  if (b.region.empty()) os << "note: no non-real eigenvalues\n";
}

void solve_table(std::ostream& os, const SolveOutcome& s, const BoundsReport& b) {
  if (s.certified) {
    if (b.region.empty()) {
      os << "search region is empty: no non-real eigenvalues\n";
    } else {
      os << "searched: Re in [" << short_num(s.res.searched.re_lo) << ", "
         << short_num(s.res.searched.re_hi) << "], Im in [" << short_num(s.res.searched.im_lo)
         << ", " << short_num(s.res.searched.im_hi) << "] (upper half; conjugates added)\n";
    }
    int total = 0;
    for (const auto& r : s.records) total += r.winding;
    os << "negative eigenvalues of the |w| problem: n=" << s.res.negative_count << "; found "
       << total << " non-real, cap 2n=" << 2 * s.res.negative_count << ": "
       << (s.res.cap_satisfied ? "cap satisfied" : "CAP VIOLATED") << "\n";
  } else {
    os << "oracle-only mode (no certified search): " << s.fallback_reason << "\n";
  }
  os << std::right << std::setw(20) << "re" << std::setw(20) << "im" << std::setw(8) << "wind"
     << std::setw(12) << "newton" << std::setw(12) << "wphi2" << std::setw(12) << "dirichlet"
     << std::setw(12) << "bound" << std::setw(7) << "check" << "  source\n";
  for (const auto& r : s.records) {
    const bool on_axis = purely_imaginary(r.lambda) && b.imaginary.applicable;
    const bool ok = admitted_by_all(b, r.lambda, 1.0);
    os << std::right << std::setw(20) << short_num(r.lambda.real(), 12) << std::setw(20)
       << short_num(r.lambda.imag(), 12) << std::setw(8) << r.winding << std::setw(12)
       << short_num(r.newton_residual, 3) << std::setw(12) << short_num(r.identity.wphi2, 3)
       << std::setw(12) << short_num(r.identity.dirichlet_form, 3) << std::setw(12)
       << (on_axis ? short_num(b.imaginary.im_max, 6) : "-") << std::setw(7)
       << (ok ? "PASS" : "FAIL") << "  " << to_string(r.source) << "\n";
  }
  if (s.certified && !s.res.caveat.empty()) os << "caveat: " << s.res.caveat << "\n";
}

void oracle_table(std::ostream& os, const OracleOutcome& o) {
  os << "finite differences: n=" << o.disc.n << " h=" << short_num(o.disc.h)
     << " shifted nodes=" << o.disc.shifted_nodes << "\n";
  os << "eigenvalues: " << o.spectrum.eigenvalues.size()
     << ", max residual " << short_num(o.spectrum.max_residual, 3)
     << ", negative eigenvalues of (A,|W|): " << o.negative_count << "\n";
  os << "non-real eigenvalues: " << o.nonreal.size() << "\n";
  for (const cplx& z : o.nonreal)
    os << std::right << std::setw(22) << short_num(z.real(), 12) << std::setw(22)
       << short_num(z.imag(), 12) << "\n";
}

void checks_table(std::ostream& os, const std::vector<Check>& checks) {
  for (const auto& c : checks)
    os << std::left << std::setw(6) << c.status << std::setw(22) << c.name << c.detail << "\n";
  os << (all_pass(checks) ? "verify: PASS\n" : "verify: FAIL\n");
}

void checks_csv(std::ostream& os, const std::vector<Check>& checks) {
  os << "check,status,detail\n";
  for (const auto& c : checks)
    os << c.name << "," << c.status << "," << csv_field(c.detail) << "\n";
}

void bounds_csv(std::ostream& os, const BoundsReport& b) {
  os << "bound,applicable,eps_used,re_max,im_max,reason\n";
  for (const BoundBox* x : boxes(b)) {
    os << to_string(x->kind) << "," << (x->applicable ? "true" : "false") << ","
       << (x->eps_used ? num(*x->eps_used) : "") << "," << (x->applicable ? num(x->re_max) : "")
       << "," << (x->applicable ? num(x->im_max) : "") << "," << csv_field(x->reason) << "\n";
  }
}

std::string csv_path_for(const std::string& out) {
  const std::size_t slash = out.find_last_of('/');
  const std::size_t dot = out.find_last_of('.');
  std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash))
                         ? out.substr(0, dot)
                         : out;
  std::string path = stem + ".csv";
  if (path == out) path = stem + ".points.csv";
  return path;
}

int execute(const RunConfig& cfg, std::ostream& out) {
  const Problem p = problem_from_config(cfg);
  const BoundsReport bounds = all_bounds(p, cfg.margin);
  const bool json = cfg.format == OutputFormat::json;
  const bool csv = cfg.format == OutputFormat::csv;

  switch (cfg.command) {
    case Command::bounds: {
      if (json) {
        ordered_json j{{"command", "bounds"}, {"problem", problem_json(p, cfg)},
                       {"bounds", bounds_json(bounds)}};
        if (bounds.region.empty()) j["note"] = "no non-real eigenvalues";
        out << j.dump(2) << "\n";
      } else if (csv) {
        bounds_csv(out, bounds);
      } else {
        header_table(out, p, cfg);
        bounds_table(out, bounds);
      }
      return 0;
    }
    case Command::solve: {
      const SolveOutcome s = run_solve(p, cfg, nullptr);
      bool ok = true;
      for (const auto& r : s.records) ok = ok && admitted_by_all(bounds, r.lambda, 1.0);
      if (json) {
        out << ordered_json{{"command", "solve"},
                            {"problem", problem_json(p, cfg)},
                            {"region", box_json(bounds.region)},
                            {"imaginary_bound", box_json(bounds.imaginary)},
                            {"result", solve_json(s)},
                            {"bounds_check", ok ? "PASS" : "FAIL"}}
                   .dump(2)
            << "\n";
      } else if (csv) {
        records_csv(out, s.records);
      } else {
        header_table(out, p, cfg);
        solve_table(out, s, bounds);
      }
      return ok ? 0 : 1;
    }
    case Command::oracle: {
      const OracleOutcome o = run_oracle(p, cfg.n_oracle);
      if (json) {
        out << ordered_json{{"command", "oracle"},
                            {"problem", problem_json(p, cfg)},
                            {"oracle", oracle_json(o)}}
                   .dump(2)
            << "\n";
      } else if (csv) {
        records_csv(out, oracle_records(o));
      } else {
        header_table(out, p, cfg);
        oracle_table(out, o);
      }
      return 0;
    }
    case Command::verify:
    case Command::report: {
      const OracleOutcome o = run_oracle(p, cfg.n_oracle);
      const SolveOutcome s = run_solve(p, cfg, &o);
      const std::vector<Check> checks = run_checks(p, cfg, bounds, s, o);
      const bool pass = all_pass(checks);
      if (cfg.command == Command::verify) {
        if (json) {
          out << ordered_json{{"command", "verify"},
                              {"problem", problem_json(p, cfg)},
                              {"checks", checks_json(checks)},
                              {"status", pass ? "PASS" : "FAIL"}}
                     .dump(2)
              << "\n";
        } else if (csv) {
          checks_csv(out, checks);
        } else {
          header_table(out, p, cfg);
          checks_table(out, checks);
        }
        return pass ? 0 : 1;
      }
      // report: one JSON document plus a CSV of every eigenvalue point.
      std::vector<EigenvalueRecord> points = s.records;
      if (s.certified)
        for (const auto& r : oracle_records(o)) points.push_back(r);
      ordered_json doc{{"command", "report"},
                       {"problem", problem_json(p, cfg)},
                       {"bounds", bounds_json(bounds)},
                       {"solve", solve_json(s)},
                       {"oracle", oracle_json(o)},
                       {"checks", checks_json(checks)},
                       {"status", pass ? "PASS" : "FAIL"}};
      if (cfg.output_path) {
        const std::string path = csv_path_for(*cfg.output_path);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InputError(path + ": cannot open for writing");
        records_csv(f, points);
        doc["csv_path"] = path;
      }
      out << doc.dump(2) << "\n";
      return pass ? 0 : 1;
    }
  }
  return 0;
}

}  // namespace

Command parse_command(std::string_view s) {
  if (s == "bounds") return Command::bounds;
  if (s == "solve") return Command::solve;
  if (s == "oracle") return Command::oracle;
  if (s == "verify") return Command::verify;
  if (s == "report") return Command::report;
  throw InputError("unknown command '" + std::string(s) +
                   "' (expected bounds, solve, oracle, verify or report)");
}

OutputFormat parse_format(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw InputError("unknown format '" + std::string(s) + "' (expected table, csv or json)");
}

const char* to_string(Command c) {
  switch (c) {
    case Command::bounds: return "bounds";
    case Command::solve: return "solve";
    case Command::oracle: return "oracle";
    case Command::verify: return "verify";
    case Command::report: return "report";
  }
  return "unknown";
}

void validate(const RunConfig& cfg) {
  if (cfg.problem_path.has_value() == cfg.preset.has_value())
    throw InputError("give exactly one of --problem and --preset");
  if (cfg.preset) {
    if (*cfg.preset != "richardson")
      throw InputError("unknown preset '" + *cfg.preset + "' (the only preset is richardson)");
    if (!cfg.mu) throw InputError("--preset richardson needs --mu");
    if (!std::isfinite(*cfg.mu)) throw InputError("--mu must be finite");
  } else if (cfg.mu) {
    throw InputError("--mu only applies to --preset");
  }
  if (cfg.n_oracle < 16) throw InputError("--n must be at least 16");
  if (!(cfg.tol >= 1e-13 && cfg.tol <= 1e-6)) throw InputError("--tol must lie in [1e-13, 1e-6]");
  if (!(cfg.contour_tol >= 1e-13 && cfg.contour_tol <= 1e-6))
    throw InputError("--contour-tol must lie in [1e-13, 1e-6]");
  if (!(cfg.margin > 0.0 && cfg.margin < 1.0)) throw InputError("--margin must lie in (0, 1)");
  if (cfg.delta_im && !(*cfg.delta_im > 0.0 && std::isfinite(*cfg.delta_im)))
    throw InputError("--delta-im must be positive");
  if (!(cfg.box_scale > 0.0 && std::isfinite(cfg.box_scale)))
    throw InputError("--box-scale must be positive");
}

Problem problem_from_config(const RunConfig& cfg) {
  if (cfg.preset) return richardson(*cfg.mu);
  return load_problem(*cfg.problem_path);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    if (cfg.output_path) {
      std::ofstream f(*cfg.output_path, std::ios::binary);
      if (!f) throw InputError(*cfg.output_path + ": cannot open for writing");
      return execute(cfg, f);
    }
    return execute(cfg, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    err << "hypothesis not satisfied: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace indefsl
