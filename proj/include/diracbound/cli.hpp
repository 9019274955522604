#pragma once

/// \file cli.hpp
/// Command-line front end, usable in-process: run_cli(args, out, err)
/// executes one subcommand and returns the process exit code.
///
/// Subcommands:
///   table <1..6>   reproduce a built-in reference table (CSV l,n,kappa,E)
///                  and gate it against the embedded values
///   spectrum       batch energy levels (CSV n,kappa,l,j,eps,E_minus,
///                  E_plus,selected,flag)
///   wavefunction   normalized two-component samples (CSV r,F,G)
///   curve          potential samples (CSV r,V)
///   verify         closed-form / NU-root / finite-difference
///                  cross-validation (JSON report)
///
/// Exit codes: 0 success, 1 usage or validation error, 2 physical absence
/// (no bound state), 3 verification failure.
///
/// All CSV output is deterministic byte-for-byte for a given configuration:
/// fixed row ordering, 12 significant digits (7 fixed decimals for table E
/// columns), and \n line endings.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diracbound/common.hpp"
#include "diracbound/nu_core.hpp"
#include "diracbound/oracle.hpp"
#include "diracbound/potentials.hpp"
#include "diracbound/reduction.hpp"
#include "diracbound/spectra.hpp"
#include "diracbound/tables.hpp"
#include "diracbound/wavefunctions.hpp"

namespace diracbound::cli {

using json = nlohmann::ordered_json;

/// Effective configuration of one run.  JSON config files carry the same
/// field names; explicit flags override file values.
struct RunConfig {
  std::string potential;                 ///< hellmann | weihua | varshni
  std::map<std::string, double> params;  ///< potential parameters
  std::string symmetry = "spin";         ///< spin | pseudospin
  double mass = 0.0;
  double sym_const = 0.0;  ///< A1 (spin) or A2 (pseudospin)
  std::string n_range = "0";
  std::string kappa_range = "-2";
  std::string mode = "table-consistent";  ///< as-printed | table-consistent
  std::string method;  ///< closed-form | nu | oracle; empty = command default
                       ///< (spectrum: closed-form, wavefunction: nu)
  std::string out;                        ///< output path; empty = stdout
  std::string format = "csv";             ///< csv | json
  int points = 0;                         ///< grid points; 0 = command default
  double r_min = 0.0;                     ///< 0 = beta-scaled default
  double r_max = 0.0;                     ///< 0 = beta-scaled default
  std::string exponents = "engine";       ///< engine | printed | both
};

namespace detail {

inline std::vector<int> parse_range(const std::string& text, const char* what) {
  auto parse_int = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot parse integer '" + s + "'");
    }
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_int(text)};
  const int a = parse_int(text.substr(0, dots));
  const int b = parse_int(text.substr(dots + 2));
  std::vector<int> out;
  const int step = (b >= a) ? 1 : -1;
  for (int v = a;; v += step) {
    out.push_back(v);
    if (v == b) break;
  }
  return out;
}

inline std::map<std::string, double>
parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, double> out;
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("--param expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    try {
      std::size_t pos = 0;
      const double v = std::stod(item.substr(eq + 1), &pos);
      if (pos != item.size() - eq - 1) throw std::invalid_argument(item);
      out[key] = v;
    } catch (const std::exception&) {
      throw UsageError("--param " + key + ": cannot parse value '" +
                       item.substr(eq + 1) + "'");
    }
  }
  return out;
}

inline reduction::Symmetry parse_symmetry(const std::string& s) {
  if (s == "spin") return reduction::Symmetry::spin;
  if (s == "pseudospin") return reduction::Symmetry::pseudospin;
  throw UsageError("unknown symmetry '" + s + "' (expected spin or pseudospin)");
}

inline spectra::Mode parse_mode(const std::string& s) {
  if (s == "as-printed") return spectra::Mode::as_printed;
  if (s == "table-consistent") return spectra::Mode::table_consistent;
  throw UsageError("unknown mode '" + s +
                   "' (expected as-printed or table-consistent)");
}

inline spectra::Method parse_method(const std::string& s) {
  if (s == "closed-form") return spectra::Method::closed_form;
  if (s == "nu") return spectra::Method::nu_rootfind;
  if (s == "oracle") return spectra::Method::oracle;
  throw UsageError("unknown method '" + s +
                   "' (expected closed-form, nu, or oracle)");
}

inline void apply_json(RunConfig& c, const json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "potential") c.potential = value.get<std::string>();
    else if (key == "params") {
      c.params.clear();
      for (const auto& [k, v] : value.items()) c.params[k] = v.get<double>();
    } else if (key == "symmetry") c.symmetry = value.get<std::string>();
    else if (key == "mass") c.mass = value.get<double>();
    else if (key == "sym_const") c.sym_const = value.get<double>();
    else if (key == "n_range") c.n_range = value.get<std::string>();
    else if (key == "kappa_range") c.kappa_range = value.get<std::string>();
    else if (key == "mode") c.mode = value.get<std::string>();
    else if (key == "method") c.method = value.get<std::string>();
    else if (key == "out") c.out = value.get<std::string>();
    else if (key == "format") c.format = value.get<std::string>();
    else if (key == "points") c.points = value.get<int>();
    else if (key == "r_min") c.r_min = value.get<double>();
    else if (key == "r_max") c.r_max = value.get<double>();
    else if (key == "exponents") c.exponents = value.get<std::string>();
    else throw UsageError("config: unknown field '" + key + "'");
  }
}

inline json to_json(const RunConfig& c) {
  json j;
  j["potential"] = c.potential;
  j["params"] = json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  j["symmetry"] = c.symmetry;
  j["mass"] = c.mass;
  j["sym_const"] = c.sym_const;
  j["n_range"] = c.n_range;
  j["kappa_range"] = c.kappa_range;
  j["mode"] = c.mode;
  j["method"] = c.method;
  j["out"] = c.out;
  j["format"] = c.format;
  j["points"] = c.points;
  j["r_min"] = c.r_min;
  j["r_max"] = c.r_max;
  j["exponents"] = c.exponents;
  return j;
}

/// Output sink: a named file, or the provided stream when no path is set.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::out | std::ios::trunc);
      if (!file_) throw Error("cannot open output file '" + path + "'");
      use_file_ = true;
    }
  }
  std::ostream& stream() { return use_file_ ? file_ : fallback_; }

 private:
  std::ostream& fallback_;
  std::ofstream file_;
  bool use_file_ = false;
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::out | std::ios::trunc);
  if (!f) throw Error("cannot open output file '" + path + "'");
  f << text;
}

struct ProblemSetup {
  potentials::PotentialSpec spec;
  reduction::SymmetryCase sym;
};

inline ProblemSetup setup_of(const RunConfig& c) {
  if (c.potential.empty())
    throw UsageError("missing potential (use --potential or a config file)");
  ProblemSetup ps;
  ps.spec = potentials::make(c.potential, c.params);
  ps.sym = reduction::SymmetryCase{parse_symmetry(c.symmetry), c.sym_const,
                                   c.mass};
  return ps;
}

inline oracle::OracleConfig oracle_config_of(const RunConfig& c) {
  oracle::OracleConfig cfg;
  if (c.points > 0) cfg.points = c.points;
  cfg.r_min = c.r_min;
  cfg.r_max = c.r_max;
  return cfg;
}

inline json row_json(const oracle::ComparisonRow& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  json j;
  j["n"] = r.n;
  j["kappa"] = r.kappa;
  j["closed_form_E"] = opt(r.closed_form_E);
  j["nu_E"] = opt(r.nu_E);
  j["oracle_E"] = opt(r.oracle_E);
  j["table_E"] = opt(r.table_E);
  j["delta_co"] = opt(r.delta_co);
  j["delta_no"] = opt(r.delta_no);
  j["delta_ct"] = opt(r.delta_ct);
  j["flag"] = r.flag;
  return j;
}

} // namespace detail

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

/// Computes one reference table (closed form, table-consistent mode), writes
/// the CSV, optionally writes a JSON comparison report, and evaluates the
/// table's numeric gate.  Returns 0, 2 (a row lost its bound state), or 3
/// (gated table missed its thresholds).
inline int cmd_table(int id, const std::string& out_path,
                     const std::string& report_path, std::ostream& out,
                     std::ostream& err) {
  const auto& fx = tables::table_fixture(id);
  std::vector<oracle::ComparisonRow> rows;
  std::string csv = "l,n,kappa,E\n";
  bool any_no_bound = false;
  for (const auto& row : fx.rows) {
    oracle::ComparisonRow cr;
    cr.n = row.n;
    cr.kappa = row.kappa;
    cr.table_E = row.E;
    std::string e_text;
    try {
      const auto lvl = spectra::energy_closed_form(
          fx.spec, fx.sym, {row.n, row.kappa}, spectra::Mode::table_consistent);
      cr.closed_form_E = lvl.selected;
      e_text = format_fixed(lvl.selected, 7);
    } catch (const NoBoundStateError& e) {
      any_no_bound = true;
      cr.flag = "NO_BOUND";
      err << "table " << id << " (n=" << row.n << ", kappa=" << row.kappa
          << "): " << e.what() << "\n";
    }
    csv += std::to_string(row.l) + "," + std::to_string(row.n) + "," +
           std::to_string(row.kappa) + "," + e_text + "\n";
    rows.push_back(cr);
  }
  const auto report = oracle::compare(std::move(rows), 1e-6);

  detail::Sink sink(out_path, out);
  sink.stream() << csv;

  // Gate bookkeeping against the embedded values.
  int within_bulk = 0;
  bool anchors_ok = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const double delta =
        r.delta_ct ? std::fabs(*r.delta_ct) : std::numeric_limits<double>::infinity();
    if (fx.gate.gated && delta < fx.gate.bulk_tol) ++within_bulk;
    if (i < 2 && fx.gate.gated && !(delta < fx.gate.anchor_tol))
      anchors_ok = false;
  }
  const bool gate_passed =
      !fx.gate.gated || (anchors_ok && within_bulk >= fx.gate.bulk_min);

  if (!report_path.empty()) {
    json j;
    j["table"] = id;
    j["title"] = fx.title;
    j["tolerance"] = report.tolerance;
    j["rows"] = json::array();
    for (const auto& r : report.rows) j["rows"].push_back(detail::row_json(r));
    json g;
    g["gated"] = fx.gate.gated;
    if (fx.gate.gated) {
      g["anchor_tol"] = fx.gate.anchor_tol;
      g["bulk_tol"] = fx.gate.bulk_tol;
      g["bulk_min"] = fx.gate.bulk_min;
      g["within_bulk"] = within_bulk;
      g["anchors_ok"] = anchors_ok;
    }
    g["passed"] = gate_passed;
    j["gate"] = g;
    detail::write_text_file(report_path, j.dump(2) + "\n");
  }

  if (any_no_bound) return 2;
  if (!gate_passed) {
    err << "table " << id << ": " << within_bulk << "/16 rows within "
        << format_sig(fx.gate.bulk_tol) << (anchors_ok ? "" : "; anchor mismatch")
        << " -- gate failed\n";
    return 3;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

inline int cmd_spectrum(const RunConfig& c, std::ostream& out,
                        std::ostream& err) {
  const auto ps = detail::setup_of(c);
  spectra::SpectrumRequest req;
  req.spec = ps.spec;
  req.sym = ps.sym;
  req.n_values = detail::parse_range(c.n_range, "--n");
  req.kappa_values = detail::parse_range(c.kappa_range, "--kappa");
  req.mode = detail::parse_mode(c.mode);
  req.method =
      detail::parse_method(c.method.empty() ? "closed-form" : c.method);

  spectra::OracleEps oracle_cb;
  if (req.method == spectra::Method::oracle) {
    const auto cfg = detail::oracle_config_of(c);
    oracle_cb = [cfg, &err](const reduction::ReducedProblem& rp,
                            int n) -> std::optional<double> {
      try {
        return oracle::bound_epsilon(rp, n, cfg);
      } catch (const Error& e) {
        err << "oracle (n=" << n << ", kappa=" << rp.qn.kappa
            << "): " << e.what() << "\n";
        return std::nullopt;
      }
    };
  }
  const auto rows = spectra::spectrum(req, oracle_cb);

  detail::Sink sink(c.out, out);
  if (c.format == "json") {
    json j;
    j["rows"] = json::array();
    for (const auto& row : rows) {
      json r;
      r["n"] = row.n;
      r["kappa"] = row.kappa;
      if (row.kappa != 0) {
        const reduction::QuantumNumbers qn{row.n, row.kappa};
        r["l"] = qn.ell();
        r["j"] = qn.j();
      } else {
        r["l"] = nullptr;
        r["j"] = nullptr;
      }
      if (row.level) {
        r["eps"] = row.level->eps;
        r["E_minus"] = row.level->E_minus;
        r["E_plus"] = row.level->E_plus;
        r["selected"] = row.level->selected;
      } else {
        r["eps"] = nullptr;
        r["E_minus"] = nullptr;
        r["E_plus"] = nullptr;
        r["selected"] = nullptr;
      }
      r["flag"] = row.flag;
      j["rows"].push_back(r);
    }
    sink.stream() << j.dump(2) << "\n";
  } else if (c.format == "csv") {
    std::string csv = "n,kappa,l,j,eps,E_minus,E_plus,selected,flag\n";
    for (const auto& row : rows) {
      csv += std::to_string(row.n) + "," + std::to_string(row.kappa) + ",";
      if (row.kappa != 0) {
        const reduction::QuantumNumbers qn{row.n, row.kappa};
        csv += std::to_string(qn.ell()) + "," + format_sig(qn.j()) + ",";
      } else {
        csv += ",,";
      }
      if (row.level) {
        csv += format_sig(row.level->eps) + "," +
               format_sig(row.level->E_minus) + "," +
               format_sig(row.level->E_plus) + "," +
               format_sig(row.level->selected) + ",";
      } else {
        csv += ",,,,";
      }
      csv += row.flag + "\n";
    }
    sink.stream() << csv;
  } else {
    throw UsageError("unknown format '" + c.format + "' (expected csv or json)");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// wavefunction
// ---------------------------------------------------------------------------

namespace detail {

/// Chooses (eps, engine exponents) for a level according to the method:
/// `nu` finds the quantization root and its branch; `closed-form` / `oracle`
/// take the eigenvalue from the respective source and attach the admissible
/// branch with the smallest quantization residual at that eps.
struct LevelChoice {
  double eps = 0.0;
  wavefunctions::ExponentSet engine;
};

inline LevelChoice choose_level(const reduction::ReducedProblem& rp,
                                const RunConfig& c,
                                const reduction::QuantumNumbers& qn,
                                spectra::Mode mode, spectra::Method method,
                                std::ostream& err) {
  LevelChoice lc;
  if (method == spectra::Method::nu_rootfind) {
    const auto [lo, hi] = spectra::default_nu_bracket(rp);
    std::optional<double> cf;
    try {
      cf = spectra::big_n(rp.spec, rp.sym, qn, mode);
    } catch (const Error&) {
    }
    const auto best = spectra::nu_select(
        spectra::nu_root_scan(rp, qn.n, lo, hi, spectra::default_nu_tol(lo, hi)),
        cf);
    if (!best)
      throw NoBoundStateError("no quantization root in the search bracket for n=" +
                              std::to_string(qn.n) +
                              ", kappa=" + std::to_string(qn.kappa));
    if (!best->normalizable)
      err << "note: selected solution branch has exponents alpha = "
          << format_sig(best->alpha) << ", gamma = " << format_sig(best->gamma)
          << " (not vanishing at both ends)\n";
    lc.eps = best->eps;
    lc.engine = wavefunctions::engine_exponents(rp, best->eps, best->key, qn.n);
    return lc;
  }
  if (method == spectra::Method::closed_form) {
    lc.eps = spectra::big_n(rp.spec, rp.sym, qn, mode);
  } else {
    const auto eps = oracle::bound_epsilon(rp, qn.n, oracle_config_of(c));
    if (!eps)
      throw NoBoundStateError("no bound eigenvalue with index n=" +
                              std::to_string(qn.n) +
                              ", kappa=" + std::to_string(qn.kappa));
    lc.eps = *eps;
  }
  // Attach the admissible branch closest to satisfying the quantization
  // condition at this eps.
  const auto pr = reduction::nu_problem_of(rp)(lc.eps);
  std::optional<nu_core::BranchKey> best_key;
  double best_res = 0.0;
  for (const auto& br : nu_core::branches(pr)) {
    if (!br.admissible) continue;
    const double res =
        std::fabs(br.lambda - nu_core::lambda_n(qn.n, br, pr.sigma));
    if (!best_key || res < best_res) {
      best_key = br.key;
      best_res = res;
    }
  }
  if (!best_key)
    throw NoBoundStateError("no admissible solution branch at eps = " +
                            format_sig(lc.eps));
  lc.engine = wavefunctions::engine_exponents(rp, lc.eps, *best_key, qn.n);
  return lc;
}

struct ComponentPair {
  std::vector<double> F, G;
};

inline ComponentPair build_components(const reduction::ReducedProblem& rp,
                                      const wavefunctions::ExponentSet& es,
                                      double E_signed,
                                      const std::vector<double>& grid) {
  const auto principal = wavefunctions::principal_component(rp, es, grid);
  const auto companion =
      wavefunctions::companion_component(rp, E_signed, principal, grid);
  ComponentPair cp;
  if (rp.sym.sym == reduction::Symmetry::spin) {
    cp.F = principal;
    cp.G = companion;
  } else {
    cp.F = companion;
    cp.G = principal;
  }
  return cp;
}

inline void normalize_pair(ComponentPair& cp, const std::vector<double>& grid) {
  wavefunctions::RadialSolution sol;
  sol.grid = grid;
  sol.F = std::move(cp.F);
  sol.G = std::move(cp.G);
  sol = wavefunctions::normalize(std::move(sol));
  cp.F = std::move(sol.F);
  cp.G = std::move(sol.G);
}

} // namespace detail

inline int cmd_wavefunction(const RunConfig& c, std::ostream& out,
                            std::ostream& err) {
  const auto ps = detail::setup_of(c);
  const auto n_list = detail::parse_range(c.n_range, "--n");
  const auto k_list = detail::parse_range(c.kappa_range, "--kappa");
  if (n_list.size() != 1 || k_list.size() != 1)
    throw UsageError("wavefunction expects single --n and --kappa values");
  const reduction::QuantumNumbers qn{n_list.front(), k_list.front()};
  qn.validate();
  const auto mode = detail::parse_mode(c.mode);
  const auto method = detail::parse_method(c.method.empty() ? "nu" : c.method);
  const auto rp = reduction::reduce(ps.spec, ps.sym, qn);

  const auto lc = detail::choose_level(rp, c, qn, mode, method, err);
  const auto lvl = spectra::level_from_eps(rp, lc.eps, method, mode);
  const double E_signed =
      (ps.sym.sym == reduction::Symmetry::spin) ? lvl.E_plus : lvl.E_minus;

  const double beta = potentials::beta_of(ps.spec);
  const double r_min = c.r_min > 0.0 ? c.r_min : 1e-6 / beta;
  const double r_max = c.r_max > 0.0 ? c.r_max : 30.0 / beta;
  const int points = c.points > 0 ? c.points : 2001;
  const auto grid = wavefunctions::make_grid(r_min, r_max, points);

  const bool want_engine = c.exponents == "engine" || c.exponents == "both";
  const bool want_printed = c.exponents == "printed" || c.exponents == "both";
  if (!want_engine && !want_printed)
    throw UsageError("unknown exponent source '" + c.exponents +
                     "' (expected engine, printed, or both)");

  std::optional<detail::ComponentPair> engine_pair, printed_pair;
  if (want_engine) {
    auto cp = detail::build_components(rp, lc.engine, E_signed, grid);
    detail::normalize_pair(cp, grid);
    engine_pair = std::move(cp);
  }
  if (want_printed) {
    const auto es = wavefunctions::printed_exponents(rp, lc.eps, qn.n);
    if (!es.normalizable && c.exponents == "printed")
      throw NoBoundStateError(
          "published-form exponents are not normalizable: z->0 exponent "
          "alpha = " + format_sig(es.alpha) + ", z->1 exponent gamma = " +
          format_sig(es.gamma));
    auto cp = detail::build_components(rp, es, E_signed, grid);
    detail::normalize_pair(cp, grid);
    printed_pair = std::move(cp);
  }

  detail::Sink sink(c.out, out);
  const auto& primary = want_engine ? *engine_pair : *printed_pair;
  if (c.format == "json") {
    json j;
    j["eps"] = lc.eps;
    j["E"] = E_signed;
    j["rows"] = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      json r;
      r["r"] = grid[i];
      r["F"] = primary.F[i];
      r["G"] = primary.G[i];
      if (c.exponents == "both") {
        r["F_printed"] = printed_pair->F[i];
        r["G_printed"] = printed_pair->G[i];
      }
      j["rows"].push_back(r);
    }
    sink.stream() << j.dump(2) << "\n";
  } else if (c.format == "csv") {
    std::string csv = "r,F,G";
    if (c.exponents == "both") csv += ",F_printed,G_printed";
    csv += "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += format_sig(grid[i]) + "," + format_sig(primary.F[i]) + "," +
             format_sig(primary.G[i]);
      if (c.exponents == "both")
        csv += "," + format_sig(printed_pair->F[i]) + "," +
               format_sig(printed_pair->G[i]);
      csv += "\n";
    }
    sink.stream() << csv;
  } else {
    throw UsageError("unknown format '" + c.format + "' (expected csv or json)");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

inline int cmd_curve(const RunConfig& c, std::ostream& out) {
  if (c.potential.empty())
    throw UsageError("missing potential (use --potential or a config file)");
  const auto spec = potentials::make(c.potential, c.params);
  const double beta = potentials::beta_of(spec);
  const double r_min = c.r_min > 0.0 ? c.r_min : 0.01 / beta;
  const double r_max = c.r_max > 0.0 ? c.r_max : 30.0 / beta;
  const int samples = c.points > 0 ? c.points : 500;
  const auto pts = potentials::curve(spec, r_min, r_max, samples);
  detail::Sink sink(c.out, out);
  if (c.format == "json") {
    json j;
    j["rows"] = json::array();
    for (const auto& p : pts) {
      json r;
      r["r"] = p.r;
      r["V"] = p.V;
      j["rows"].push_back(r);
    }
    sink.stream() << j.dump(2) << "\n";
  } else if (c.format == "csv") {
    std::string csv = "r,V\n";
    for (const auto& p : pts)
      csv += format_sig(p.r) + "," + format_sig(p.V) + "\n";
    sink.stream() << csv;
  } else {
    throw UsageError("unknown format '" + c.format + "' (expected csv or json)");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline int cmd_verify(const RunConfig& c, bool selftest, std::ostream& out,
                      std::ostream& err) {
  if (selftest) {
    const auto box = oracle::box_selftest(1.0, 4000, 2);
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      const double raw_rel =
          std::fabs(box.eigenvalues[k] - box.exact[k]) / box.exact[k];
      const double ext_rel =
          std::fabs(box.extrapolated[k] - box.exact[k]) / box.exact[k];
      out << "box level " << (k + 1) << ": raw " << format_sig(box.eigenvalues[k])
          << " (rel " << format_sig(raw_rel, 3) << "), extrapolated "
          << format_sig(box.extrapolated[k]) << " (rel "
          << format_sig(ext_rel, 3) << "), exact " << format_sig(box.exact[k])
          << "\n";
      if (raw_rel > 1e-3 || ext_rel > 1e-6) ok = false;
    }
    if (!ok) {
      err << "box self-test outside tolerance\n";
      return 3;
    }
    return 0;
  }

  const auto ps = detail::setup_of(c);
  const auto mode = detail::parse_mode(c.mode);
  const auto n_list = detail::parse_range(c.n_range, "--n");
  const auto k_list = detail::parse_range(c.kappa_range, "--kappa");
  const auto cfg = detail::oracle_config_of(c);

  std::vector<oracle::ComparisonRow> rows;
  json checks = json::array();
  bool any_mismatch = false;
  bool any_no_bound = false;
  for (int n : n_list) {
    for (int kappa : k_list) {
      oracle::ComparisonRow row;
      row.n = n;
      row.kappa = kappa;
      const reduction::QuantumNumbers qn{n, kappa};
      try {
        qn.validate();
      } catch (const UsageError&) {
        row.flag = "SINGULAR";
        rows.push_back(row);
        continue;
      }
      const auto rp = reduction::reduce(ps.spec, ps.sym, qn);

      std::optional<double> closed_eps;
      try {
        closed_eps = spectra::big_n(ps.spec, ps.sym, qn, mode);
        row.closed_form_E =
            spectra::level_from_eps(rp, *closed_eps, spectra::Method::closed_form, mode)
                .selected;
      } catch (const Error& e) {
        err << "closed form (n=" << n << ", kappa=" << kappa << "): " << e.what()
            << "\n";
      }

      std::optional<double> nu_eps;
      try {
        const auto [lo, hi] = spectra::default_nu_bracket(rp);
        const auto best = spectra::nu_select(
            spectra::nu_root_scan(rp, n, lo, hi, spectra::default_nu_tol(lo, hi)),
            closed_eps);
        if (best) {
          nu_eps = best->eps;
          row.nu_E =
              spectra::level_from_eps(rp, best->eps, spectra::Method::nu_rootfind, mode)
                  .selected;
        }
      } catch (const Error& e) {
        err << "quantization root (n=" << n << ", kappa=" << kappa
            << "): " << e.what() << "\n";
      }

      std::optional<double> oracle_eps;
      try {
        const auto ce = oracle::converged_epsilon(rp, n, cfg);
        if (oracle::is_bound(rp, ce.eps)) {
          oracle_eps = ce.eps;
          row.oracle_E =
              spectra::level_from_eps(rp, ce.eps, spectra::Method::oracle, mode)
                  .selected;
        }
      } catch (const Error& e) {
        err << "eigensolver (n=" << n << ", kappa=" << kappa << "): " << e.what()
            << "\n";
      }

      if (!oracle_eps) {
        row.flag = "NO_BOUND";
        any_no_bound = true;
      }
      if (nu_eps && oracle_eps) {
        const double rel =
            std::fabs(*nu_eps - *oracle_eps) / std::fabs(*oracle_eps);
        json chk;
        chk["n"] = n;
        chk["kappa"] = kappa;
        chk["nu_eps"] = *nu_eps;
        chk["oracle_eps"] = *oracle_eps;
        chk["rel_diff"] = rel;
        checks.push_back(chk);
        if (rel > 1e-6) any_mismatch = true;
      }
      rows.push_back(row);
    }
  }

  const auto report = oracle::compare(std::move(rows), 1e-6);
  json j;
  j["tolerance"] = report.tolerance;
  j["rows"] = json::array();
  for (const auto& r : report.rows) j["rows"].push_back(detail::row_json(r));
  j["eps_checks"] = checks;
  const int code = any_mismatch ? 3 : (any_no_bound ? 2 : 0);
  j["exit_code"] = code;
  detail::Sink sink(c.out, out);
  sink.stream() << j.dump(2) << "\n";
  if (any_mismatch)
    err << "verification failed: quantization roots and eigensolver disagree "
           "beyond 1e-6 relative\n";
  return code;
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Relativistic bound states of screened potentials under spin "
               "and pseudospin symmetry"};
  app.require_subcommand(1);

  // Common option storage shared by the config-driven subcommands.
  RunConfig flags;
  std::vector<std::string> param_kv;
  std::string config_path, emit_config_path;

  auto add_common = [&](CLI::App* cmd, bool with_grid) {
    cmd->add_option("--potential", flags.potential,
                    "Potential: hellmann, weihua, or varshni");
    cmd->add_option("--param", param_kv, "Potential parameter key=value")
        ->take_all();
    cmd->add_option("--symmetry", flags.symmetry, "spin or pseudospin");
    cmd->add_option("--mass", flags.mass, "Particle mass M");
    cmd->add_option("--sym-const", flags.sym_const,
                    "Constant potential combination (A1 for spin, A2 for "
                    "pseudospin)");
    cmd->add_option("--n", flags.n_range, "Radial quantum number(s), a or a..b");
    cmd->add_option("--kappa", flags.kappa_range,
                    "Spin-orbit quantum number(s), a or a..b");
    cmd->add_option("--mode", flags.mode, "as-printed or table-consistent");
    cmd->add_option("--method", flags.method, "closed-form, nu, or oracle");
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option("--out", flags.out, "Output file (default stdout)");
    cmd->add_option("--format", flags.format, "csv or json");
    cmd->add_option("--emit-config", emit_config_path,
                    "Write the effective configuration as JSON");
    if (with_grid) {
      cmd->add_option("--points", flags.points, "Grid points");
      cmd->add_option("--rmin", flags.r_min, "Grid start radius");
      cmd->add_option("--rmax", flags.r_max, "Grid end radius");
    }
  };

  int table_id = 0;
  std::string table_out, table_report;
  auto* t = app.add_subcommand("table", "Reproduce a built-in reference table");
  t->add_option("id", table_id, "Table number (1-6)")->required();
  t->add_option("--out", table_out, "Output CSV file (default stdout)");
  t->add_option("--report", table_report, "Write a JSON comparison report");

  auto* sp = app.add_subcommand("spectrum", "Batch energy levels");
  add_common(sp, true);

  auto* wf = app.add_subcommand("wavefunction",
                                "Normalized two-component radial solution");
  add_common(wf, true);
  wf->add_option("--exponents", flags.exponents, "engine, printed, or both");

  auto* cv = app.add_subcommand("curve", "Potential curve samples");
  add_common(cv, true);

  bool selftest = false;
  auto* vf = app.add_subcommand("verify",
                                "Cross-validate closed-form, quantization-root, "
                                "and finite-difference results");
  add_common(vf, true);
  vf->add_flag("--selftest", selftest, "Run the particle-in-a-box self-test");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (t->parsed()) return cmd_table(table_id, table_out, table_report, out, err);

    // Assemble the effective config: defaults, then config file, then flags.
    CLI::App* active = sp->parsed() ? sp
                       : wf->parsed() ? static_cast<CLI::App*>(wf)
                       : cv->parsed() ? static_cast<CLI::App*>(cv)
                                      : static_cast<CLI::App*>(vf);
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw UsageError("cannot open config file '" + config_path + "'");
      json j;
      try {
        f >> j;
      } catch (const json::exception& e) {
        throw UsageError("config file '" + config_path + "': " + e.what());
      }
      detail::apply_json(c, j);
    }
    auto used = [&](const char* name) { return active->count(name) > 0; };
    if (used("--potential")) c.potential = flags.potential;
    if (used("--param")) c.params = detail::parse_params(param_kv);
    if (used("--symmetry")) c.symmetry = flags.symmetry;
    if (used("--mass")) c.mass = flags.mass;
    if (used("--sym-const")) c.sym_const = flags.sym_const;
    if (used("--n")) c.n_range = flags.n_range;
    if (used("--kappa")) c.kappa_range = flags.kappa_range;
    if (used("--mode")) c.mode = flags.mode;
    if (used("--method")) c.method = flags.method;
    if (used("--out")) c.out = flags.out;
    if (used("--format")) c.format = flags.format;
    if (active->get_option_no_throw("--points") && used("--points"))
      c.points = flags.points;
    if (active->get_option_no_throw("--rmin") && used("--rmin"))
      c.r_min = flags.r_min;
    if (active->get_option_no_throw("--rmax") && used("--rmax"))
      c.r_max = flags.r_max;
    if (active->get_option_no_throw("--exponents") && used("--exponents"))
      c.exponents = flags.exponents;

    if (c.method.empty()) c.method = wf->parsed() ? "nu" : "closed-form";
    if (!emit_config_path.empty())
      detail::write_text_file(emit_config_path, detail::to_json(c).dump(2) + "\n");

    if (sp->parsed()) return cmd_spectrum(c, out, err);
    if (wf->parsed()) return cmd_wavefunction(c, out, err);
    if (cv->parsed()) return cmd_curve(c, out);
    return cmd_verify(c, selftest, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NoBoundStateError& e) {
    err << "no bound state: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    err << "verification failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace diracbound::cli
