#pragma once

/// \file oracle.hpp
/// Independent ground truth for the reduced eigenproblem
///     F'' + [eps - U_eff(r)] F = 0,   F(r_min) = F(r_max) = 0:
/// three-point finite differences on a uniform grid, Sturm-sequence
/// bisection for the lowest eigenvalues, inverse-iteration eigenvectors,
/// Richardson extrapolation across grid doublings, and comparison reporting
/// against the closed-form and NU results.
///
/// Radial level index n is identified with the ascending-eps index at fixed
/// kappa; an eigenvalue is a bound state iff it lies below the reduced
/// problem's continuum threshold.
///
/// Each eigensolve owns its grid and matrix; no shared mutable state.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diracbound/common.hpp"
#include "diracbound/reduction.hpp"
#include "diracbound/spectra.hpp"

namespace diracbound::oracle {

/// Discretization and extrapolation controls.  Nonpositive r_min / r_max
/// select the beta-scaled defaults 1e-6/beta and 30/beta (exponential tails
/// need boxes of order tens of screening lengths).
struct OracleConfig {
  double r_min = 0.0;
  double r_max = 0.0;
  int points = 4000;         ///< interior grid points of the coarsest grid
  int levels_wanted = 1;     ///< eigenvalues per solve when listing spectra
  int richardson_steps = 2;  ///< grid doublings for extrapolation
};

/// Resolves the beta-scaled defaults against a concrete problem.
inline OracleConfig resolve(OracleConfig cfg, const reduction::ReducedProblem& rp) {
  const double beta = potentials::beta_of(rp.spec);
  if (cfg.r_min <= 0.0) cfg.r_min = 1e-6 / beta;
  if (cfg.r_max <= 0.0) cfg.r_max = 30.0 / beta;
  if (!(cfg.r_min < cfg.r_max))
    throw UsageError("oracle: need r_min < r_max");
  if (cfg.points < 100) throw UsageError("oracle: need at least 100 points");
  if (cfg.richardson_steps < 1)
    throw UsageError("oracle: need at least 1 extrapolation step");
  return cfg;
}

/// Symmetric tridiagonal system from the 3-point Laplacian on the interior
/// nodes r_i = r_min + (i+1) h, h = (r_max - r_min)/(points+1), with
/// Dirichlet conditions at both ends (endpoints excluded from the grid).
struct Tridiag {
  std::vector<double> diag;  ///< 2/h^2 + U_eff(r_i)
  std::vector<double> off;   ///< -1/h^2, length diag.size() - 1
  double h = 0.0;
};

/// Builds the system.  Throws Error if U is non-finite at any node.
template <class PotentialFn>
inline Tridiag discretize(const PotentialFn& U, double r_min, double r_max,
                          int points) {
  if (!(r_min < r_max)) throw UsageError("discretize: need r_min < r_max");
  if (points < 1) throw UsageError("discretize: need at least 1 point");
  Tridiag T;
  T.h = (r_max - r_min) / (points + 1);
  const double inv_h2 = 1.0 / (T.h * T.h);
  T.diag.resize(points);
  T.off.assign(points > 1 ? points - 1 : 0, -inv_h2);
  for (int i = 0; i < points; ++i) {
    const double r = r_min + (i + 1) * T.h;
    const double u = U(r);
    if (!std::isfinite(u))
      throw Error("discretize: potential not finite at r = " + format_sig(r));
    T.diag[i] = 2.0 * inv_h2 + u;
  }
  return T;
}

/// Number of eigenvalues of T strictly below x (Sturm sequence via the
/// signs of the LDL^T pivots).
inline int sturm_count(const Tridiag& T, double x) {
  int count = 0;
  double d = 1.0;
  const std::size_t m = T.diag.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double offsq = i ? T.off[i - 1] * T.off[i - 1] : 0.0;
    d = T.diag[i] - x - offsq / d;
    if (d < 0.0) ++count;
    if (std::fabs(d) < 1e-300) d = (d < 0.0) ? -1e-300 : 1e-300;
  }
  return count;
}

/// The `count` smallest eigenvalues, ascending, each bisected inside the
/// Gerschgorin interval until the bracket is below ~1e-13 relative width.
inline std::vector<double> lowest_eigenvalues(const Tridiag& T, int count) {
  const int m = static_cast<int>(T.diag.size());
  if (count < 1 || count > m)
    throw UsageError("lowest_eigenvalues: count out of range");
  double glo = T.diag[0], ghi = T.diag[0];
  for (int i = 0; i < m; ++i) {
    const double w = (i > 0 ? std::fabs(T.off[i - 1]) : 0.0) +
                     (i + 1 < m ? std::fabs(T.off[i]) : 0.0);
    glo = std::min(glo, T.diag[i] - w);
    ghi = std::max(ghi, T.diag[i] + w);
  }
  std::vector<double> out;
  out.reserve(count);
  for (int k = 1; k <= count; ++k) {
    double a = glo, b = ghi;
    for (int iter = 0;
         iter < 200 && (b - a) > 1e-13 * (std::fabs(a) + std::fabs(b) + 1e-30);
         ++iter) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(T, mid) >= k) b = mid;
      else a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

/// Eigenvector by shifted inverse iteration (two refinement solves against
/// the slightly regularized matrix T - (eig + delta) I), normalized to unit
/// maximum element.  Intended for node counting, not high-accuracy output.
inline std::vector<double> eigenvector(const Tridiag& T, double eig) {
  const int m = static_cast<int>(T.diag.size());
  const double scale = std::fabs(eig) + 2.0 / (T.h * T.h);
  const double shift = eig + 1e-10 * scale;
  // Deterministic varied start: an all-ones start is exactly orthogonal to
  // antisymmetric eigenvectors of symmetric problems and would converge to
  // the wrong mode.
  std::vector<double> v(m), c(m), dvec(m);
  std::uint32_t state = 0x9e3779b9u;
  for (int i = 0; i < m; ++i) {
    state = state * 1664525u + 1013904223u;
    v[i] = 0.5 + static_cast<double>(state) / 8589934592.0;
  }
  for (int pass = 0; pass < 2; ++pass) {
    // Thomas solve (T - shift I) x = v with guarded pivots.
    double piv = T.diag[0] - shift;
    if (std::fabs(piv) < 1e-300) piv = 1e-300;
    c[0] = (m > 1) ? T.off[0] / piv : 0.0;
    dvec[0] = v[0] / piv;
    for (int i = 1; i < m; ++i) {
      piv = T.diag[i] - shift - T.off[i - 1] * c[i - 1];
      if (std::fabs(piv) < 1e-300) piv = 1e-300;
      if (i + 1 < m) c[i] = T.off[i] / piv;
      dvec[i] = (v[i] - T.off[i - 1] * dvec[i - 1]) / piv;
    }
    v[m - 1] = dvec[m - 1];
    for (int i = m - 2; i >= 0; --i) v[i] = dvec[i] - c[i] * v[i + 1];
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::fabs(x));
    if (!(vmax > 0.0)) throw Error("eigenvector: inverse iteration collapsed");
    for (double& x : v) x /= vmax;
  }
  return v;
}

/// Grid-converged eigenvalue with a raw-difference error estimate.
struct ConvergedEps {
  double eps = 0.0;            ///< Richardson-extrapolated value
  double error_estimate = 0.0; ///< |eps(h) - eps(h/2)| from the finest pair
  std::vector<int> grids_used; ///< interior point counts, coarse to fine
};

/// Eigenvalue `level_index` (0-based, ascending) of the reduced problem,
/// extrapolated across `richardson_steps` grid doublings (points -> 2*points+1
/// keeps the spacing exactly halving).  Throws Error when the raw grid
/// sequence diverges instead of settling.
inline ConvergedEps converged_epsilon(const reduction::ReducedProblem& rp,
                                      int level_index, OracleConfig cfg) {
  cfg = resolve(cfg, rp);
  if (level_index < 0) throw UsageError("oracle: level index must be >= 0");
  ConvergedEps result;
  std::vector<double> raw;
  int pts = cfg.points;
  for (int step = 0; step <= cfg.richardson_steps; ++step) {
    const auto T = discretize(rp.U_eff, cfg.r_min, cfg.r_max, pts);
    raw.push_back(lowest_eigenvalues(T, level_index + 1)[level_index]);
    result.grids_used.push_back(pts);
    pts = 2 * pts + 1;
  }
  for (std::size_t j = 2; j < raw.size(); ++j) {
    const double d_prev = std::fabs(raw[j - 1] - raw[j - 2]);
    const double d_cur = std::fabs(raw[j] - raw[j - 1]);
    const double floor = 1e-12 * std::max(1.0, std::fabs(raw[j]));
    if (d_cur > 2.0 * d_prev && d_cur > floor)
      throw Error("oracle: eigenvalue sequence diverges under refinement (" +
                  format_sig(d_prev) + " -> " + format_sig(d_cur) + ")");
  }
  result.error_estimate = std::fabs(raw.back() - raw[raw.size() - 2]);
  // Richardson table on h^2 (each column removes the next even power of h).
  std::vector<double> row = raw;
  for (std::size_t k = 1; k < raw.size(); ++k) {
    const double w = std::pow(4.0, static_cast<double>(k));
    for (std::size_t j = raw.size() - 1; j >= k; --j)
      row[j] = (w * row[j] - row[j - 1]) / (w - 1.0);
  }
  result.eps = row.back();
  return result;
}

/// Bound-state test for an oracle eigenvalue of a reduced problem.
inline bool is_bound(const reduction::ReducedProblem& rp, double eps) {
  return eps < rp.threshold;
}

/// Grid-converged eigenvalue as an optional: empty when the level lies at or
/// above the continuum threshold (no bound state with that index).
inline std::optional<double> bound_epsilon(const reduction::ReducedProblem& rp,
                                           int level_index, OracleConfig cfg) {
  const auto ce = converged_epsilon(rp, level_index, cfg);
  if (!is_bound(rp, ce.eps)) return std::nullopt;
  return ce.eps;
}

/// Particle-in-a-box self-test data: U = 0 on [0, L] with the same solver
/// path used for physics runs.
struct BoxSelfTest {
  std::vector<double> eigenvalues;   ///< lowest three at the base grid
  std::vector<double> extrapolated;  ///< Richardson across the doublings
  std::vector<double> exact;         ///< (k pi / L)^2, k = 1..3
};

inline BoxSelfTest box_selftest(double length = 1.0, int points = 4000,
                                int steps = 2) {
  if (!(length > 0.0)) throw UsageError("box: length must be > 0");
  auto zero = [](double) { return 0.0; };
  BoxSelfTest out;
  std::vector<std::vector<double>> raw;
  int pts = points;
  for (int s = 0; s <= steps; ++s) {
    raw.push_back(lowest_eigenvalues(discretize(zero, 0.0, length, pts), 3));
    pts = 2 * pts + 1;
  }
  out.eigenvalues = raw.front();
  out.extrapolated = raw.front();
  for (int k = 0; k < 3; ++k) {
    std::vector<double> row;
    for (const auto& g : raw) row.push_back(g[k]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      const double w = std::pow(4.0, static_cast<double>(c));
      for (std::size_t j = row.size() - 1; j >= c; --j)
        row[j] = (w * row[j] - row[j - 1]) / (w - 1.0);
    }
    out.extrapolated[k] = row.back();
    const double kpi = (k + 1) * 3.14159265358979323846 / length;
    out.exact.push_back(kpi * kpi);
  }
  return out;
}

/// One row of the cross-validation report.  E columns are absent when the
/// corresponding method produced no value for this (n, kappa).
struct ComparisonRow {
  int n = 0;
  int kappa = 0;
  std::optional<double> closed_form_E;
  std::optional<double> nu_E;
  std::optional<double> oracle_E;
  std::optional<double> table_E;
  std::optional<double> delta_co;  ///< closed_form_E - oracle_E
  std::optional<double> delta_no;  ///< nu_E - oracle_E
  std::optional<double> delta_ct;  ///< closed_form_E - table_E
  std::string flag;                ///< MATCH, DISCREPANT, SINGULAR, NO_BOUND
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double tolerance = 1e-6;
};

/// Fills the delta columns from whichever values are present and assigns
/// MATCH/DISCREPANT by comparing every available delta against `tol`
/// (absolute, in E).  Rows arriving pre-flagged SINGULAR or NO_BOUND keep
/// their flag.
inline ComparisonReport compare(std::vector<ComparisonRow> rows,
                                double tol = 1e-6) {
  ComparisonReport report;
  report.tolerance = tol;
  for (auto& row : rows) {
    if (row.closed_form_E && row.oracle_E)
      row.delta_co = *row.closed_form_E - *row.oracle_E;
    if (row.nu_E && row.oracle_E) row.delta_no = *row.nu_E - *row.oracle_E;
    if (row.closed_form_E && row.table_E)
      row.delta_ct = *row.closed_form_E - *row.table_E;
    if (row.flag.empty()) {
      double worst = 0.0;
      for (const auto& d : {row.delta_co, row.delta_no, row.delta_ct})
        if (d) worst = std::max(worst, std::fabs(*d));
      row.flag = worst < tol ? "MATCH" : "DISCREPANT";
    }
  }
  report.rows = std::move(rows);
  return report;
}

} // namespace diracbound::oracle
