#pragma once

/// \file spectra.hpp
/// Bound-state energy levels: the six closed-form eigenvalue expressions
/// (one per potential x symmetry pair), a mode switch selecting either the
/// formulas exactly as published or the variant that reproduces the published
/// numeric tables, and an independent NU-quantization root-finding path.
///
/// The closed forms give the linear eigenvalue N (an eps value); the
/// relativistic energy follows through the quadratic map of `reduction`.
/// Mode semantics:
///   as_printed       -- formulas verbatim; the Varshni-spin eps shift is
///                       honored when mapping eps -> E.
///   table_consistent -- three documented corrections (Wei Hua bracket uses
///                       n^2 + kappa^2 for both symmetries; Varshni drops the
///                       trailing +a; Varshni pseudospin flips the sign of
///                       the beta^2 kappa(kappa-1) term) and the eps -> E map
///                       is applied without the shift.  This is the variant
///                       consistent with the published tables and is the
///                       default.
///
/// All operations are pure; rows of a batch request are independent.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diracbound/common.hpp"
#include "diracbound/nu_core.hpp"
#include "diracbound/potentials.hpp"
#include "diracbound/reduction.hpp"

namespace diracbound::spectra {

enum class Mode { as_printed, table_consistent };
enum class Method { closed_form, nu_rootfind, oracle };

inline std::string to_string(Mode m) {
  return m == Mode::as_printed ? "as-printed" : "table-consistent";
}
inline std::string to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::nu_rootfind: return "nu";
    default: return "oracle";
  }
}

/// One bound level: linear eigenvalue, both energy roots, and the selected
/// physical root (E_plus under spin symmetry; |E_minus| under pseudospin,
/// with the signed root retained).
struct EnergyLevel {
  int n = 0;
  int kappa = 0;
  double eps = 0.0;
  double E_minus = 0.0;
  double E_plus = 0.0;
  double selected = 0.0;
  bool selected_is_magnitude = false;  ///< true when selected = |E_minus|
  Method method = Method::closed_form;
  Mode mode = Mode::table_consistent;
};

/// Closed-form linear eigenvalue N for the given mode.  Throws UsageError on
/// invalid quantum numbers (including the singular n + kappa = 0).
inline double big_n(const potentials::PotentialSpec& spec,
                    const reduction::SymmetryCase& sym,
                    const reduction::QuantumNumbers& qn, Mode mode) {
  potentials::validate(spec);
  qn.validate();
  const bool spin = sym.sym == reduction::Symmetry::spin;
  const double beta = potentials::beta_of(spec);
  const double b2 = beta * beta;
  const double n = qn.n;
  const double k = qn.kappa;
  const double pref = -b2 / (4.0 * (n + k) * (n + k));

  if (const auto* h = std::get_if<potentials::Hellmann>(&spec)) {
    // Identical in both modes.
    const double a = h->a, b = h->b;
    if (spin) {
      const double br = (a - b) / beta - (n * n - k * k) - k * (k + 1.0);
      return pref * br * br - a * beta + b2 * k * (k + 1.0);
    }
    const double br = -(a - b) / beta + n * n + k * k + k * (k - 3.0);
    return pref * br * br - a * beta + b2 * k * (k - 1.0);
  }

  if (const auto* w = std::get_if<potentials::WeiHua>(&spec)) {
    const double shape_term = (2.0 * w->D / b2) * (1.0 / w->a_shape - 1.0);
    const double kk = spin ? k * (k + 1.0) : k * (k - 1.0);
    // As published the pseudospin bracket carries n^2 - kappa^2; the
    // table-consistent variant uses n^2 + kappa^2 for both symmetries
    // (a no-op for spin).
    double quad = spin ? (n * n + k * k) : (n * n - k * k);
    if (mode == Mode::table_consistent) quad = n * n + k * k;
    const double br = quad + kk - shape_term;
    return pref * br * br + w->D + b2 * kk;
  }

  const auto& v = std::get<potentials::Varshni>(spec);
  const double a = v.a, b = v.b;
  if (spin) {
    const double br = -a * b / beta + n * n + k * k + k * (k + 1.0);
    double N = pref * br * br + b2 * k * (k + 1.0);
    if (mode == Mode::as_printed) N += a;  // dropped in table_consistent
    return N;
  }
  const double br = n * n + k * k + k * (k - 3.0) - a * b / beta;
  double N = pref * br * br;
  // Published sign is -beta^2 kappa(kappa-1); tables require +.
  N += (mode == Mode::as_printed ? -1.0 : +1.0) * b2 * k * (k - 1.0);
  if (mode == Mode::as_printed) N += a;
  return N;
}

/// Builds an EnergyLevel from a linear eigenvalue.  In as_printed mode the
/// recorded eps shift is removed before the quadratic map (P = eps - shift);
/// in table_consistent mode the map is applied to eps directly, matching how
/// the published tables were evidently produced.
inline EnergyLevel level_from_eps(const reduction::ReducedProblem& rp,
                                  double eps, Method method, Mode mode) {
  const double P = (mode == Mode::as_printed) ? eps - rp.epsilon_shift : eps;
  const auto [em, ep] = reduction::energy_roots(rp.sym, P);
  EnergyLevel lvl;
  lvl.n = rp.qn.n;
  lvl.kappa = rp.qn.kappa;
  lvl.eps = eps;
  lvl.E_minus = em;
  lvl.E_plus = ep;
  if (rp.sym.sym == reduction::Symmetry::spin) {
    lvl.selected = ep;
    lvl.selected_is_magnitude = false;
  } else {
    lvl.selected = std::fabs(em);
    lvl.selected_is_magnitude = true;
  }
  lvl.method = method;
  lvl.mode = mode;
  return lvl;
}

/// Closed-form level.  Throws UsageError on singular quantum numbers and
/// NoBoundStateError when the energy map has complex roots.
inline EnergyLevel energy_closed_form(const potentials::PotentialSpec& spec,
                                      const reduction::SymmetryCase& sym,
                                      const reduction::QuantumNumbers& qn,
                                      Mode mode) {
  const double N = big_n(spec, sym, qn, mode);
  const auto rp = reduction::reduce(spec, sym, qn);
  return level_from_eps(rp, N, Method::closed_form, mode);
}

/// One root of the NU quantization condition with the solution-branch
/// identity and the factorization exponents evaluated at the root.
struct NuRoot {
  double eps = 0.0;
  nu_core::BranchKey key;
  double alpha = 0.0;  ///< z -> 0 exponent of the factorized solution
  double gamma = 0.0;  ///< z -> 1 exponent
  bool normalizable = false;  ///< alpha > 0 and gamma > 0
};

/// Default eps bracket for the quantization search.  Upper end: just below
/// the continuum threshold (where a1_sq -> 0+ and NU closure degenerates).
/// Lower end: the eps at which a1_sq reaches a bound that provably exceeds
/// the squared z->0 exponent of any polynomial solution, derived from the
/// eps-independent combinations S = a1_sq+a2_sq+a3_sq and B2 = a2_sq+2 a1_sq.
inline std::pair<double, double>
default_nu_bracket(const reduction::ReducedProblem& rp) {
  const double S = reduction::coeff_sum(rp);
  const double B2 = reduction::coeff_b2(rp);
  const double a1sq_hi = std::max(4.0 * S + 4.0, B2 * B2 + 4.0);
  const double lo = reduction::epsilon_of_a1sq(rp, a1sq_hi);
  const double hi =
      rp.threshold - std::max(1e-12, 1e-10 * std::fabs(rp.threshold));
  return {lo, hi};
}

/// All roots of lambda(eps) = lambda_n(eps) over every solution branch
/// inside [lo, hi], bisected to the absolute eps tolerance `tol` and
/// deduplicated at 10*tol (normalizable representatives win).  Sorted by eps.
inline std::vector<NuRoot> nu_root_scan(const reduction::ReducedProblem& rp,
                                        int n, double lo, double hi,
                                        double tol) {
  if (!(hi > lo)) throw UsageError("nu_root_scan: need lo < hi");
  if (!(tol > 0.0)) throw UsageError("nu_root_scan: need tol > 0");
  auto problem_of = reduction::nu_problem_of(rp);

  std::vector<NuRoot> roots;
  const int grid = 4000;
  const double step = (hi - lo) / grid;
  for (int ki = 0; ki < 2; ++ki) {
    for (int sign : {+1, -1}) {
      const nu_core::BranchKey key{ki, sign};
      auto res = nu_core::quantization_residual(problem_of, n, key);
      std::optional<double> prev;
      double prev_eps = lo;
      for (int i = 0; i <= grid; ++i) {
        const double eps = (i == grid) ? hi : lo + i * step;
        const std::optional<double> cur = res(eps);
        if (prev && cur && *prev * *cur <= 0.0 && (*prev != 0.0 || *cur != 0.0)) {
          // Bisect; abandon the interval if the branch vanishes inside it.
          double a = prev_eps, b = eps, fa = *prev;
          bool ok = true;
          while (b - a > tol) {
            const double m = 0.5 * (a + b);
            const auto fm = res(m);
            if (!fm) { ok = false; break; }
            if (fa * *fm <= 0.0) b = m;
            else { a = m; fa = *fm; }
          }
          // Polish to machine resolution: the residual slope reaches
          // ~1/beta^2, so downstream analytic identities need the root at
          // ulp accuracy, not just within `tol`.  If the branch becomes
          // unavailable mid-polish, keep the tol-level estimate.
          while (ok) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const auto fm = res(m);
            if (!fm) break;
            if (fa * *fm <= 0.0) b = m;
            else { a = m; fa = *fm; }
          }
          if (ok) {
            NuRoot root;
            root.eps = 0.5 * (a + b);
            root.key = key;
            const auto pr = problem_of(root.eps);
            for (const auto& br : nu_core::branches(pr)) {
              if (br.key == key) {
                const auto fe = nu_core::factor_exponents(pr, br);
                root.alpha = fe.alpha;
                root.gamma = fe.gamma;
                root.normalizable = root.alpha > 0.0 && root.gamma > 0.0;
              }
            }
            roots.push_back(root);
          }
        }
        prev = cur;
        prev_eps = eps;
      }
    }
  }

  std::sort(roots.begin(), roots.end(),
            [](const NuRoot& x, const NuRoot& y) { return x.eps < y.eps; });
  std::vector<NuRoot> dedup;
  for (const auto& r : roots) {
    if (!dedup.empty() && std::fabs(r.eps - dedup.back().eps) <= 10.0 * tol) {
      if (r.normalizable && !dedup.back().normalizable) dedup.back() = r;
      continue;
    }
    dedup.push_back(r);
  }
  return dedup;
}

/// Selects the root to report for a given (n, kappa): a unique root wins;
/// among several, normalizable ones are preferred; remaining ties go to the
/// root nearest the closed-form eigenvalue.  Empty when no root exists.
inline std::optional<NuRoot>
nu_select(const std::vector<NuRoot>& roots,
          std::optional<double> closed_form_eps) {
  if (roots.empty()) return std::nullopt;
  if (roots.size() == 1) return roots.front();
  std::vector<NuRoot> pool;
  for (const auto& r : roots)
    if (r.normalizable) pool.push_back(r);
  if (pool.empty()) pool = roots;
  if (pool.size() == 1 || !closed_form_eps) return pool.front();
  return *std::min_element(pool.begin(), pool.end(),
                           [&](const NuRoot& x, const NuRoot& y) {
                             return std::fabs(x.eps - *closed_form_eps) <
                                    std::fabs(y.eps - *closed_form_eps);
                           });
}

/// All NU quantization roots in the bracket as EnergyLevels
/// (method = nu_rootfind).  An empty list means no root in the bracket.
inline std::vector<EnergyLevel>
energy_nu(const potentials::PotentialSpec& spec,
          const reduction::SymmetryCase& sym,
          const reduction::QuantumNumbers& qn, double lo, double hi,
          double tol, Mode mode = Mode::table_consistent) {
  const auto rp = reduction::reduce(spec, sym, qn);
  std::vector<EnergyLevel> out;
  for (const auto& r : nu_root_scan(rp, qn.n, lo, hi, tol))
    out.push_back(level_from_eps(rp, r.eps, Method::nu_rootfind, mode));
  return out;
}

/// Default absolute eps tolerance for the quantization bisection.
inline double default_nu_tol(double lo, double hi) {
  return 1e-13 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
}

/// Batch request over rectangular (n, kappa) ranges.
struct SpectrumRequest {
  potentials::PotentialSpec spec;
  reduction::SymmetryCase sym;
  std::vector<int> n_values;
  std::vector<int> kappa_values;
  Mode mode = Mode::table_consistent;
  Method method = Method::closed_form;
};

/// One computed (or failed) row of a batch.
struct SpectrumRow {
  int n = 0;
  int kappa = 0;
  std::optional<EnergyLevel> level;  ///< empty on SINGULAR / NO_BOUND
  std::string flag;                  ///< "", "SINGULAR", or "NO_BOUND"
  std::string message;               ///< failure detail, empty on success
};

/// Callback type letting the caller supply grid-converged eigenvalues for
/// Method::oracle without this header depending on the eigensolver.
using OracleEps = std::function<std::optional<double>(
    const reduction::ReducedProblem&, int n)>;

/// Evaluates every (n, kappa) pair; per-row failures are flagged, never
/// aborting the batch.  Rows are ordered n-major then by kappa as given.
inline std::vector<SpectrumRow> spectrum(const SpectrumRequest& req,
                                         const OracleEps& oracle_eps = {}) {
  if (req.n_values.empty() || req.kappa_values.empty())
    throw UsageError("spectrum: empty quantum-number range");
  if (req.method == Method::oracle && !oracle_eps)
    throw UsageError("spectrum: oracle method requires an eigensolver callback");
  std::vector<SpectrumRow> rows;
  for (int n : req.n_values) {
    for (int kappa : req.kappa_values) {
      SpectrumRow row;
      row.n = n;
      row.kappa = kappa;
      const reduction::QuantumNumbers qn{n, kappa};
      try {
        qn.validate();
        if (req.method == Method::closed_form) {
          row.level = energy_closed_form(req.spec, req.sym, qn, req.mode);
        } else {
          const auto rp = reduction::reduce(req.spec, req.sym, qn);
          std::optional<double> eps;
          if (req.method == Method::nu_rootfind) {
            const auto [lo, hi] = default_nu_bracket(rp);
            std::optional<double> cf;
            try {
              cf = big_n(req.spec, req.sym, qn, req.mode);
            } catch (const Error&) {
            }
            const auto best =
                nu_select(nu_root_scan(rp, n, lo, hi, default_nu_tol(lo, hi)), cf);
            if (best) eps = best->eps;
          } else {
            eps = oracle_eps(rp, n);
          }
          if (!eps)
            throw NoBoundStateError("no bound state for n=" + std::to_string(n) +
                                    ", kappa=" + std::to_string(kappa));
          row.level = level_from_eps(rp, *eps, req.method, req.mode);
        }
      } catch (const NoBoundStateError& e) {
        row.flag = "NO_BOUND";
        row.message = e.what();
      } catch (const UsageError& e) {
        row.flag = "SINGULAR";
        row.message = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

} // namespace diracbound::spectra
