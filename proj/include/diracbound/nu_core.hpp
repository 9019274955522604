#pragma once

/// \file nu_core.hpp
/// Generic Nikiforov-Uvarov (NU) engine.
///
/// A hypergeometric-type ODE
///     sigma^2(z) Psi'' + sigma(z) tau_tilde(z) Psi' + sigma_tilde(z) Psi = 0
/// (sigma, sigma_tilde of degree <= 2, tau_tilde of degree <= 1) is closed by
/// an auxiliary linear polynomial
///     pi(z) = (sigma' - tau_tilde)/2 +- sqrt{ [(sigma' - tau_tilde)/2]^2
///                                             - sigma_tilde + k sigma },
/// where k is fixed by requiring the under-root quadratic to be a perfect
/// square.  Each (k, sign) combination yields a solution branch with
///     tau = tau_tilde + 2 pi,   lambda = k + pi',
/// admissible when tau' < 0.  Polynomial (degree-n) solutions exist when
///     lambda = lambda_n = -n tau' - n(n-1)/2 sigma''.
///
/// All operations are pure functions of their inputs; every returned value is
/// immutable after construction, so unrestricted concurrent use is safe.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "diracbound/common.hpp"

namespace diracbound::nu_core {

/// Real polynomial of degree <= 2, stored by coefficient: c0 + c1 z + c2 z^2.
struct Quadratic {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  /// Highest index with a nonzero coefficient (0 for the zero polynomial).
  int degree() const {
    if (c2 != 0.0) return 2;
    if (c1 != 0.0) return 1;
    return 0;
  }
  double operator()(double z) const { return c0 + z * (c1 + z * c2); }
  double derivative(double z) const { return c1 + 2.0 * c2 * z; }
  double second_derivative() const { return 2.0 * c2; }
};

/// The polynomial triple defining one NU problem.
struct NUProblem {
  Quadratic sigma;        ///< degree <= 2, not identically zero
  Quadratic tau_tilde;    ///< degree <= 1
  Quadratic sigma_tilde;  ///< degree <= 2

  /// Throws UsageError when the degree constraints are violated.
  void validate() const {
    if (sigma.c0 == 0.0 && sigma.c1 == 0.0 && sigma.c2 == 0.0)
      throw UsageError("NUProblem: sigma is identically zero");
    if (tau_tilde.c2 != 0.0)
      throw UsageError("NUProblem: tau_tilde must have degree <= 1");
  }
};

/// Stable identity of a solution branch across changes of the spectral
/// parameter: index of the k root (ascending order) plus the sign choice.
struct BranchKey {
  int k_index = 0;  ///< 0 = smaller k candidate, 1 = larger
  int sign = +1;    ///< +1 / -1 sign in front of the perfect-square root
  friend bool operator==(const BranchKey&, const BranchKey&) = default;
};

/// One admissible-or-not NU solution branch.
struct NUBranch {
  double k = 0.0;
  Quadratic pi;             ///< degree <= 1
  Quadratic tau;            ///< tau_tilde + 2 pi, degree <= 1
  double lambda = 0.0;      ///< k + pi'
  double sqrt_slope = 0.0;  ///< p of the perfect-square root p z + q
  double sqrt_const = 0.0;  ///< q
  bool admissible = false;  ///< tau' < 0
  BranchKey key;
};

/// Exponents of the factorized solution pieces for sigma proportional to
/// z(1-z): psi(z) = z^alpha (1-z)^gamma and weight rho(z) = z^rho_alpha
/// (1-z)^rho_gamma.
struct FactorExponents {
  double alpha = 0.0;
  double gamma = 0.0;
  double rho_alpha = 0.0;
  double rho_gamma = 0.0;
};

namespace detail {

/// Coefficients of the under-root quadratic U(z; k) = A z^2 + B z + C with
/// A = A0 + k*sigma.c2, B = B0 + k*sigma.c1, C = C0 + k*sigma.c0.
struct UnderRoot {
  double A0, B0, C0;  // k-independent parts
  double sA, sB, sC;  // multipliers of k (the sigma coefficients)
};

inline UnderRoot under_root_parts(const NUProblem& pr) {
  // d(z) = sigma'(z) - tau_tilde(z), degree <= 1
  const double d0 = pr.sigma.c1 - pr.tau_tilde.c0;
  const double d1 = 2.0 * pr.sigma.c2 - pr.tau_tilde.c1;
  UnderRoot u{};
  u.A0 = 0.25 * d1 * d1 - pr.sigma_tilde.c2;
  u.B0 = 0.5 * d0 * d1 - pr.sigma_tilde.c1;
  u.C0 = 0.25 * d0 * d0 - pr.sigma_tilde.c0;
  u.sA = pr.sigma.c2;
  u.sB = pr.sigma.c1;
  u.sC = pr.sigma.c0;
  return u;
}

inline double coeff_scale(const NUProblem& pr) {
  return std::max({1.0, std::fabs(pr.sigma.c0), std::fabs(pr.sigma.c1),
                   std::fabs(pr.sigma.c2), std::fabs(pr.tau_tilde.c0),
                   std::fabs(pr.tau_tilde.c1), std::fabs(pr.sigma_tilde.c0),
                   std::fabs(pr.sigma_tilde.c1), std::fabs(pr.sigma_tilde.c2)});
}

} // namespace detail

/// All real k for which the under-root quadratic of pi(z) is a perfect
/// square; 0, 1 or 2 values, ascending.  The zero-discriminant condition is a
/// quadratic in k; near-double roots with |disc| < 1e-10 * scale^2 are
/// accepted as a single double root (the spectral parameter arrives from
/// floating root-finding, so exact vanishing cannot be required).
inline std::vector<double> k_candidates(const NUProblem& pr) {
  pr.validate();
  const auto u = detail::under_root_parts(pr);
  // disc(k) = B(k)^2 - 4 A(k) C(k) = qa k^2 + qb k + qc
  const double qa = u.sB * u.sB - 4.0 * u.sA * u.sC;
  const double qb = 2.0 * u.B0 * u.sB - 4.0 * (u.A0 * u.sC + u.sA * u.C0);
  const double qc = u.B0 * u.B0 - 4.0 * u.A0 * u.C0;

  const double s = detail::coeff_scale(pr);
  const double scale2 = s * s;
  std::vector<double> ks;
  if (std::fabs(qa) <= 1e-14 * scale2) {
    // Degenerate: disc is (at most) linear in k.
    if (std::fabs(qb) > 1e-14 * scale2 * s) ks.push_back(-qc / qb);
    else if (std::fabs(qc) <= 1e-10 * scale2 * scale2) ks.push_back(0.0);
    return ks;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  const double disc_scale = std::max(qb * qb, std::fabs(4.0 * qa * qc));
  if (disc < -1e-10 * std::max(disc_scale, 1e-300)) return ks;  // no real k
  if (disc <= 1e-10 * std::max(disc_scale, 1e-300)) {
    ks.push_back(-qb / (2.0 * qa));  // double root
  } else {
    const double r = std::sqrt(disc);
    ks.push_back((-qb - r) / (2.0 * qa));
    ks.push_back((-qb + r) / (2.0 * qa));
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

/// All (k, sign) solution branches (up to 4), deduplicated, each with pi, tau,
/// lambda and the admissibility flag (tau' < 0) filled in.
inline std::vector<NUBranch> branches(const NUProblem& pr) {
  const auto ks = k_candidates(pr);
  const auto u = detail::under_root_parts(pr);
  const double s = detail::coeff_scale(pr);
  const double tol = 1e-12 * s;

  // d(z) = sigma' - tau_tilde enters pi as +d/2.
  const double d0 = pr.sigma.c1 - pr.tau_tilde.c0;
  const double d1 = 2.0 * pr.sigma.c2 - pr.tau_tilde.c1;

  std::vector<NUBranch> out;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    const double k = ks[ki];
    const double A = u.A0 + k * u.sA;
    const double B = u.B0 + k * u.sB;
    const double C = u.C0 + k * u.sC;
    // The perfect square (p z + q)^2 requires A >= 0 and C >= 0.
    if (A < -tol || C < -tol) continue;
    double p, q;
    if (A > tol) {
      p = std::sqrt(std::max(A, 0.0));
      q = B / (2.0 * p);
    } else {
      p = 0.0;
      q = std::sqrt(std::max(C, 0.0));
    }
    for (int sign : {+1, -1}) {
      NUBranch br;
      br.k = k;
      br.sqrt_slope = p;
      br.sqrt_const = q;
      br.key = BranchKey{static_cast<int>(ki), sign};
      br.pi.c0 = 0.5 * d0 + sign * q;
      br.pi.c1 = 0.5 * d1 + sign * p;
      br.tau.c0 = pr.tau_tilde.c0 + 2.0 * br.pi.c0;
      br.tau.c1 = pr.tau_tilde.c1 + 2.0 * br.pi.c1;
      br.lambda = k + br.pi.c1;
      br.admissible = br.tau.c1 < 0.0;
      // Deduplicate (double k roots or q == 0 make sign choices coincide).
      bool dup = false;
      for (const auto& other : out)
        if (std::fabs(other.pi.c0 - br.pi.c0) <= tol &&
            std::fabs(other.pi.c1 - br.pi.c1) <= tol)
          dup = true;
      if (!dup) out.push_back(br);
    }
  }
  return out;
}

/// lambda_n = -n tau' - n(n-1)/2 sigma'': the value lambda must take for a
/// degree-n polynomial solution to exist on the given branch.
inline double lambda_n(int n, const NUBranch& branch, const Quadratic& sigma) {
  return -static_cast<double>(n) * branch.tau.c1 -
         0.5 * static_cast<double>(n) * (n - 1.0) * sigma.second_derivative();
}

/// Exponents of psi and of the weight rho for the two-singular-point family
/// sigma(z) = s * z(1-z) (any nonzero scale s).  From partial fractions of
/// psi'/psi = pi/sigma and rho'/rho = (tau - sigma')/sigma:
///   alpha = pi(0)/s,            gamma = -pi(1)/s,
///   rho_alpha = (tau(0)-sigma'(0))/s,  rho_gamma = -(tau(1)-sigma'(1))/s.
/// Throws UsageError for any sigma outside this family (degree != 2 or
/// singular points not at z = 0, 1).
inline FactorExponents factor_exponents(const NUProblem& pr, const NUBranch& branch) {
  const double s = pr.sigma.c1;
  const double tol = 1e-12 * detail::coeff_scale(pr);
  if (pr.sigma.degree() != 2 || std::fabs(pr.sigma.c0) > tol ||
      std::fabs(pr.sigma.c2 + pr.sigma.c1) > tol || std::fabs(s) <= tol)
    throw UsageError("factor_exponents: sigma must be a nonzero multiple of z(1-z)");
  FactorExponents fe;
  fe.alpha = branch.pi(0.0) / s;
  fe.gamma = -branch.pi(1.0) / s;
  fe.rho_alpha = (branch.tau(0.0) - pr.sigma.derivative(0.0)) / s;
  fe.rho_gamma = -(branch.tau(1.0) - pr.sigma.derivative(1.0)) / s;
  return fe;
}

/// Residual r(eps) = lambda(eps) - lambda_n(eps) of the quantization
/// condition for the branch identified by `key` in the eps-parametrized
/// problem family.  Returns an empty optional when the branch vanishes or
/// loses admissibility at the given eps (the caller's root bracketing must
/// then re-enumerate branches).
inline std::function<std::optional<double>(double)>
quantization_residual(std::function<NUProblem(double)> problem_of, int n, BranchKey key) {
  return [problem_of = std::move(problem_of), n, key](double eps) -> std::optional<double> {
    const NUProblem pr = problem_of(eps);
    for (const auto& br : branches(pr)) {
      if (br.key == key) {
        if (!br.admissible) return std::nullopt;
        return br.lambda - lambda_n(n, br, pr.sigma);
      }
    }
    return std::nullopt;
  };
}

} // namespace diracbound::nu_core
