#pragma once

/// \file wavefunctions.hpp
/// Two-component radial spinor construction: Jacobi polynomials with
/// arbitrary real parameters, the factorized principal component
///     W(z) = z^alpha (1-z)^gamma P_n^{(p,q)}(1-2z),   z = e^{-beta r}
/// (Wei Hua: z = a_shape e^{-beta r}), and the companion component obtained
/// by applying the exact first-order coupling
///     spin:        (d/dr + kappa/r) F = (E + M - A1) G
///     pseudospin:  (d/dr - kappa/r) G = (M - E + A2) F
/// with a five-point finite-difference derivative.
///
/// Exponent sources: `engine` takes (alpha, gamma) from the NU branch
/// factorization, with Jacobi parameters (2 alpha, 2 gamma - 1); `printed`
/// uses the published closed form z^{-a1}(1-z)^{1-kappa} with Jacobi
/// parameters (-2(1+kappa+a1), -(1+2 kappa)).  The printed exponents are
/// generally non-normalizable at z -> 0 (a1 > 0) and are provided for
/// side-by-side comparison only.
///
/// All operations are pure; grids and samples are immutable after
/// construction; unrestricted concurrent use is safe.

#include <cmath>
#include <string>
#include <vector>

#include "diracbound/common.hpp"
#include "diracbound/nu_core.hpp"
#include "diracbound/potentials.hpp"
#include "diracbound/reduction.hpp"
#include "diracbound/spectra.hpp"

namespace diracbound::wavefunctions {

/// Degree and the two real parameters of a Jacobi polynomial.
struct JacobiParams {
  int n = 0;
  double p = 0.0;
  double q = 0.0;
};

namespace detail {

/// Rising factorial (x)_m = x (x+1) ... (x+m-1); 1 for m = 0.
inline double pochhammer(double x, int m) {
  double out = 1.0;
  for (int i = 0; i < m; ++i) out *= x + i;
  return out;
}

/// Binomial coefficient C(n, s) for small integer arguments.
inline double binomial(int n, int s) {
  double out = 1.0;
  for (int i = 1; i <= s; ++i) out *= static_cast<double>(n - s + i) / i;
  return out;
}

} // namespace detail

/// Jacobi polynomial value by the explicit finite sum
///   P_n^{(p,q)}(x) = (1/n!) * sum_s C(n,s) (n+p+q+1)_s (p+s+1)_{n-s}
///                    ((x-1)/2)^s,
/// valid for arbitrary real parameters (no positivity restriction).
inline double jacobi(const JacobiParams& jp, double x) {
  if (jp.n < 0) throw UsageError("jacobi: degree must be >= 0");
  const double t = 0.5 * (x - 1.0);
  double sum = 0.0;
  double ts = 1.0;  // t^s
  for (int s = 0; s <= jp.n; ++s) {
    sum += detail::binomial(jp.n, s) * detail::pochhammer(jp.n + jp.p + jp.q + 1.0, s) *
           detail::pochhammer(jp.p + s + 1.0, jp.n - s) * ts;
    ts *= t;
  }
  double nfact = 1.0;
  for (int i = 2; i <= jp.n; ++i) nfact *= i;
  return sum / nfact;
}

/// d/dx P_n^{(p,q)}(x) = (n+p+q+1)/2 * P_{n-1}^{(p+1,q+1)}(x); 0 for n = 0.
inline double jacobi_derivative(const JacobiParams& jp, double x) {
  if (jp.n == 0) return 0.0;
  return 0.5 * (jp.n + jp.p + jp.q + 1.0) *
         jacobi({jp.n - 1, jp.p + 1.0, jp.q + 1.0}, x);
}

/// Second derivative by iterating the derivative identity; 0 for n < 2.
inline double jacobi_second_derivative(const JacobiParams& jp, double x) {
  if (jp.n < 2) return 0.0;
  return 0.25 * (jp.n + jp.p + jp.q + 1.0) * (jp.n + jp.p + jp.q + 2.0) *
         jacobi({jp.n - 2, jp.p + 2.0, jp.q + 2.0}, x);
}

enum class ExponentSource { engine, printed };

inline std::string to_string(ExponentSource s) {
  return s == ExponentSource::engine ? "engine" : "printed";
}

/// Exponents and Jacobi parameters of one factorized component.
struct ExponentSet {
  double alpha = 0.0;  ///< z -> 0 exponent (controls r -> infinity decay)
  double gamma = 0.0;  ///< z -> 1 exponent (controls r -> 0 behavior)
  JacobiParams jacobi;
  ExponentSource source = ExponentSource::engine;
  /// alpha > 0 and gamma > 0: the component vanishes at both ends.
  bool normalizable = false;
};

/// Engine exponents: factorization of the NU branch identified by `key` at
/// the level's eps, with Jacobi parameters (2 alpha, 2 gamma - 1).
/// Throws Error when the branch does not exist at this eps.
inline ExponentSet engine_exponents(const reduction::ReducedProblem& rp,
                                    double eps, nu_core::BranchKey key, int n) {
  const auto pr = reduction::nu_problem_of(rp)(eps);
  for (const auto& br : nu_core::branches(pr)) {
    if (br.key == key) {
      const auto fe = nu_core::factor_exponents(pr, br);
      ExponentSet es;
      es.alpha = fe.alpha;
      es.gamma = fe.gamma;
      es.jacobi = {n, 2.0 * fe.alpha, 2.0 * fe.gamma - 1.0};
      es.source = ExponentSource::engine;
      es.normalizable = es.alpha > 0.0 && es.gamma > 0.0;
      return es;
    }
  }
  throw Error("engine_exponents: solution branch not present at eps = " +
              format_sig(eps));
}

/// Published closed-form exponents z^{-a1}(1-z)^{1-kappa} with a1 the
/// positive square root of a1_sq(eps).  Throws Error when a1_sq < 0.
inline ExponentSet printed_exponents(const reduction::ReducedProblem& rp,
                                     double eps, int n) {
  const double a1_sq = reduction::coefficients(rp, eps).a1_sq;
  if (a1_sq < 0.0)
    throw Error("printed_exponents: a1_sq = " + format_sig(a1_sq) +
                " < 0 at eps = " + format_sig(eps));
  const double a1 = std::sqrt(a1_sq);
  const double kappa = rp.qn.kappa;
  ExponentSet es;
  es.alpha = -a1;
  es.gamma = 1.0 - kappa;
  es.jacobi = {n, -2.0 * (1.0 + kappa + a1), -(1.0 + 2.0 * kappa)};
  es.source = ExponentSource::printed;
  es.normalizable = es.alpha > 0.0 && es.gamma > 0.0;
  return es;
}

/// Uniform radial grid with both endpoints included.
inline std::vector<double> make_grid(double r_min, double r_max, int points) {
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw UsageError("grid: need 0 < r_min < r_max");
  if (points < 5) throw UsageError("grid: need at least 5 points");
  std::vector<double> r(points);
  const double h = (r_max - r_min) / (points - 1);
  for (int i = 0; i < points; ++i) r[i] = r_min + i * h;
  r.back() = r_max;
  return r;
}

/// The NU variable at radius r: e^{-beta r}, scaled by a_shape for Wei Hua.
inline double z_of_r(const potentials::PotentialSpec& spec, double r) {
  const double z = std::exp(-potentials::beta_of(spec) * r);
  if (const auto* w = std::get_if<potentials::WeiHua>(&spec))
    return w->a_shape * z;
  return z;
}

/// Unnormalized samples of the factorized principal component on the grid.
/// This is the upper component F under spin symmetry and the lower component
/// G under pseudospin.  Non-normalizable exponent sets are sampled as-is;
/// callers decide how to report them (the `normalizable` flag is the signal).
inline std::vector<double> principal_component(
    const reduction::ReducedProblem& rp, const ExponentSet& es,
    const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double r : grid) {
    const double z = z_of_r(rp.spec, r);
    const double w = std::exp(es.alpha * std::log(z) +
                              es.gamma * std::log1p(-z));
    out.push_back(w * jacobi(es.jacobi, 1.0 - 2.0 * z));
  }
  return out;
}

namespace detail {

/// Five-point finite-difference first derivative on a uniform grid:
/// fourth-order central stencil inside, one-sided fourth/third-order
/// stencils at the two points nearest each end.
inline std::vector<double> derivative5(const std::vector<double>& f, double h) {
  const std::size_t m = f.size();
  if (m < 5) throw UsageError("derivative: need at least 5 samples");
  std::vector<double> d(m);
  const double inv12h = 1.0 / (12.0 * h);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv12h;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv12h;
  for (std::size_t i = 2; i + 2 < m; ++i)
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv12h;
  d[m - 2] = (3.0 * f[m - 1] + 10.0 * f[m - 2] - 18.0 * f[m - 3] + 6.0 * f[m - 4] - f[m - 5]) * inv12h;
  d[m - 1] = (25.0 * f[m - 1] - 48.0 * f[m - 2] + 36.0 * f[m - 3] - 16.0 * f[m - 4] + 3.0 * f[m - 5]) * inv12h;
  return d;
}

inline double grid_spacing(const std::vector<double>& grid) {
  if (grid.size() < 2) throw UsageError("grid: too short");
  const double h = (grid.back() - grid.front()) / (grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::fabs(grid[i] - grid[i - 1] - h) > 1e-9 * std::fabs(h))
      throw UsageError("companion: grid must be uniform");
  }
  return h;
}

} // namespace detail

/// The companion spinor component from the exact first-order coupling, using
/// the signed energy E of the level:
///   spin:        G = (F' + kappa F / r) / (E + M - A1)
///   pseudospin:  F = (G' - kappa G / r) / (M - E + A2)
/// Throws Error when the dividing factor is below 1e-12 in magnitude (exact
/// symmetry limit).
inline std::vector<double> companion_component(
    const reduction::ReducedProblem& rp, double E,
    const std::vector<double>& principal, const std::vector<double>& grid) {
  if (principal.size() != grid.size())
    throw UsageError("companion: sample/grid size mismatch");
  const double kappa = rp.qn.kappa;
  double divisor, kappa_sign;
  if (rp.sym.sym == reduction::Symmetry::spin) {
    divisor = E + rp.sym.M - rp.sym.sym_const;
    kappa_sign = +1.0;
  } else {
    divisor = rp.sym.M - E + rp.sym.sym_const;
    kappa_sign = -1.0;
  }
  if (std::fabs(divisor) < 1e-12)
    throw Error("companion: first-order coupling factor " + format_sig(divisor) +
                " is at the exact symmetry limit");
  const double h = detail::grid_spacing(grid);
  const auto d = detail::derivative5(principal, h);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = (d[i] + kappa_sign * kappa * principal[i] / grid[i]) / divisor;
  return out;
}

/// A sampled, normalized two-component solution.
struct RadialSolution {
  spectra::EnergyLevel level;
  ExponentSet exponents;
  std::vector<double> grid;  ///< strictly increasing radii
  std::vector<double> F;     ///< upper component samples
  std::vector<double> G;     ///< lower component samples
  double norm = 0.0;         ///< quadrature normalization factor applied
};

/// Rescales (F, G) so the trapezoidal quadrature of F^2 + G^2 over the grid
/// equals 1; records the factor.  Throws Error on zero or non-finite norm.
inline RadialSolution normalize(RadialSolution sol) {
  if (sol.F.size() != sol.grid.size() || sol.G.size() != sol.grid.size())
    throw UsageError("normalize: sample/grid size mismatch");
  double integral = 0.0;
  for (std::size_t i = 1; i < sol.grid.size(); ++i) {
    const double f2a = sol.F[i - 1] * sol.F[i - 1] + sol.G[i - 1] * sol.G[i - 1];
    const double f2b = sol.F[i] * sol.F[i] + sol.G[i] * sol.G[i];
    integral += 0.5 * (f2a + f2b) * (sol.grid[i] - sol.grid[i - 1]);
  }
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw Error("normalize: quadrature norm " + format_sig(integral) +
                " is not positive and finite");
  const double scale = 1.0 / std::sqrt(integral);
  for (auto& v : sol.F) v *= scale;
  for (auto& v : sol.G) v *= scale;
  sol.norm = scale;
  return sol;
}

/// Residual diagnostics of the factorized component against the NU-form ODE
///   sigma^2 W'' + sigma tau_tilde W' + sigma_tilde W = 0
/// at the level's eps, using analytic derivatives of
/// W = z^alpha (1-z)^gamma P_n(1-2z), evaluated on `points` interior z
/// samples z_i = i/(points+1).
struct OdeResidual {
  double max_residual = 0.0;  ///< max |ODE residual| over the samples
  double max_abs_value = 0.0; ///< max |W| over the samples
};

inline OdeResidual zspace_ode_residual(const reduction::ReducedProblem& rp,
                                       double eps, const ExponentSet& es,
                                       int points = 2000) {
  const auto pr = reduction::nu_problem_of(rp)(eps);
  OdeResidual out;
  for (int i = 1; i <= points; ++i) {
    const double z = static_cast<double>(i) / (points + 1);
    const double x = 1.0 - 2.0 * z;
    const double P = jacobi(es.jacobi, x);
    const double Pp = jacobi_derivative(es.jacobi, x);
    const double Ppp = jacobi_second_derivative(es.jacobi, x);
    const double w = std::exp(es.alpha * std::log(z) + es.gamma * std::log1p(-z));
    const double g = es.alpha / z - es.gamma / (1.0 - z);
    const double gp = -es.alpha / (z * z) - es.gamma / ((1.0 - z) * (1.0 - z));
    const double W = w * P;
    const double W1 = w * (g * P - 2.0 * Pp);
    const double W2 = w * ((g * g + gp) * P - 4.0 * g * Pp + 4.0 * Ppp);
    const double sig = pr.sigma(z);
    const double res = sig * sig * W2 + sig * pr.tau_tilde(z) * W1 +
                       pr.sigma_tilde(z) * W;
    out.max_residual = std::max(out.max_residual, std::fabs(res));
    out.max_abs_value = std::max(out.max_abs_value, std::fabs(W));
  }
  return out;
}

/// Sign changes of a sampled function, ignoring near-zero samples below
/// `floor` in magnitude (node counter for eigenfunction checks).
inline int count_sign_changes(const std::vector<double>& f, double floor) {
  int changes = 0;
  double prev = 0.0;
  for (double v : f) {
    if (std::fabs(v) <= floor) continue;
    if (prev != 0.0 && v * prev < 0.0) ++changes;
    prev = v;
  }
  return changes;
}

} // namespace diracbound::wavefunctions
