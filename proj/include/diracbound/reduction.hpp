#pragma once

/// \file reduction.hpp
/// Reduction of the radial Dirac problem, under exact spin or pseudospin
/// symmetry, to a one-dimensional linear eigenproblem
///     F'' + [eps - U_eff(r)] F = 0,
/// together with the quadratic map between the linear eigenvalue eps and the
/// relativistic energy E, and the coefficient triple (a1^2, a2^2, a3^2) that
/// turns the problem into hypergeometric NU form after z = e^{-beta r}.
///
/// Spin symmetry keeps the difference potential constant (value A1) and acts
/// on the upper radial component F with centrifugal factor kappa(kappa+1);
/// pseudospin keeps the sum potential constant (value A2) and acts on the
/// lower component G with factor kappa(kappa-1).  The centrifugal 1/r^2 is
/// replaced by the Pekeris-type approximation beta^2/(1-e^{-beta r})^2
/// throughout, matching the closed-form derivation.
///
/// All operations are pure; unrestricted concurrent use is safe.

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "diracbound/common.hpp"
#include "diracbound/nu_core.hpp"
#include "diracbound/potentials.hpp"

namespace diracbound::reduction {

enum class Symmetry { spin, pseudospin };

inline std::string to_string(Symmetry s) {
  return s == Symmetry::spin ? "spin" : "pseudospin";
}

/// Symmetry limit plus the constants it freezes: the non-dynamical potential
/// combination (A1 for spin, A2 for pseudospin) and the particle mass.
struct SymmetryCase {
  Symmetry sym = Symmetry::spin;
  double sym_const = 0.0;  ///< A1 (spin) or A2 (pseudospin)
  double M = 0.0;          ///< particle mass
};

/// Radial and spin-orbit quantum numbers with the derived (ell, j) labels.
struct QuantumNumbers {
  int n = 0;      ///< radial quantum number, >= 0
  int kappa = 0;  ///< spin-orbit quantum number, != 0

  /// Throws UsageError when n < 0, kappa == 0, or n + kappa == 0 (the
  /// closed forms divide by (n+kappa)^2).
  void validate() const {
    if (n < 0) throw UsageError("quantum numbers: n must be >= 0");
    if (kappa == 0) throw UsageError("quantum numbers: kappa must be nonzero");
    if (n + kappa == 0)
      throw UsageError("quantum numbers: n + kappa = 0 is singular");
  }
  /// Orbital angular momentum: kappa for kappa > 0, -(kappa+1) for kappa < 0.
  int ell() const { return kappa > 0 ? kappa : -(kappa + 1); }
  /// Total angular momentum j = |kappa| - 1/2.
  double j() const { return std::abs(kappa) - 0.5; }
};

/// Centrifugal factor of the reduced equation: kappa(kappa+1) under spin
/// symmetry, kappa(kappa-1) under pseudospin.
inline double kappa_factor(Symmetry sym, int kappa) {
  const double k = kappa;
  return sym == Symmetry::spin ? k * (k + 1.0) : k * (k - 1.0);
}

/// The one-dimensional eigenproblem F'' + [eps - U_eff] F = 0 produced by a
/// (potential, symmetry, quantum numbers) triple.
struct ReducedProblem {
  potentials::PotentialSpec spec;
  SymmetryCase sym;
  QuantumNumbers qn;
  double kappa_factor = 0.0;
  /// Constant absorbed into eps relative to the plain quadratic E-map:
  /// eps = P + epsilon_shift with P the quadratic in E.  Zero except for the
  /// Varshni potential under spin symmetry, where eps absorbs -a.
  double epsilon_shift = 0.0;
  /// Effective potential of the reduced equation, defined for r > 0.
  std::function<double(double)> U_eff;
  /// Continuum edge: lim_{r->inf} U_eff(r).  Bound states have eps below it.
  double threshold = 0.0;
};

/// The NU coefficient triple evaluated at a given eps.  For all three
/// potentials a1_sq(eps) = a1_sq(0) - eps/beta^2; a2_sq and a3_sq are also
/// affine in eps.  The sum a1_sq+a2_sq+a3_sq is eps-independent:
/// kappa_factor, plus (D/beta^2)(1-1/a_shape)^2 for Wei Hua.
struct CoefficientTriple {
  double a1_sq = 0.0;
  double a2_sq = 0.0;
  double a3_sq = 0.0;
};

/// Builds the reduced problem.  The effective potential is, with
/// t = 1 - e^{-beta r} and the Pekeris replacement 1/r^2 -> beta^2/t^2:
///   Hellmann:  kf*beta^2/t^2 - beta (a - b e^{-beta r}) / t
///   Wei Hua:   kf*beta^2/t^2 + D [t / (1 - a_shape e^{-beta r})]^2
///   Varshni:   kf*beta^2/t^2 - a b beta e^{-beta r} / t
/// Throws UsageError on invalid potential parameters or quantum numbers.
inline ReducedProblem reduce(const potentials::PotentialSpec& spec,
                             const SymmetryCase& sym,
                             const QuantumNumbers& qn) {
  potentials::validate(spec);
  qn.validate();
  ReducedProblem rp;
  rp.spec = spec;
  rp.sym = sym;
  rp.qn = qn;
  rp.kappa_factor = kappa_factor(sym.sym, qn.kappa);
  const double beta = potentials::beta_of(spec);
  const double kf = rp.kappa_factor;

  if (const auto* h = std::get_if<potentials::Hellmann>(&spec)) {
    const double a = h->a, b = h->b;
    rp.epsilon_shift = 0.0;
    rp.threshold = beta * beta * kf - a * beta;
    rp.U_eff = [kf, a, b, beta](double r) {
      const double z = std::exp(-beta * r);
      const double t = -std::expm1(-beta * r);
      return kf * beta * beta / (t * t) - beta * (a - b * z) / t;
    };
  } else if (const auto* w = std::get_if<potentials::WeiHua>(&spec)) {
    const double D = w->D, ash = w->a_shape;
    rp.epsilon_shift = 0.0;
    rp.threshold = beta * beta * kf + D;
    rp.U_eff = [kf, D, ash, beta](double r) {
      const double z = std::exp(-beta * r);
      const double t = -std::expm1(-beta * r);
      const double denom = 1.0 - ash * z;
      if (std::fabs(denom) < 1e-14)
        throw Error("weihua: effective-potential pole at r = " + format_sig(r));
      const double q = t / denom;
      return kf * beta * beta / (t * t) + D * q * q;
    };
  } else {
    const auto& v = std::get<potentials::Varshni>(spec);
    const double a = v.a, b = v.b;
    rp.epsilon_shift = (sym.sym == Symmetry::spin) ? -a : 0.0;
    rp.threshold = beta * beta * kf;
    rp.U_eff = [kf, a, b, beta](double r) {
      const double z = std::exp(-beta * r);
      const double t = -std::expm1(-beta * r);
      return kf * beta * beta / (t * t) - a * b * beta * z / t;
    };
  }
  return rp;
}

/// The coefficient triple at a given eps (verbatim per-case expressions).
inline CoefficientTriple coefficients(const ReducedProblem& rp, double eps) {
  const double beta = potentials::beta_of(rp.spec);
  const double b2 = beta * beta;
  const double kf = rp.kappa_factor;
  CoefficientTriple c;
  if (const auto* h = std::get_if<potentials::Hellmann>(&rp.spec)) {
    c.a1_sq = kf - (h->a * beta + eps) / b2;
    c.a2_sq = (beta * (h->a + h->b) + 2.0 * eps) / b2;
    c.a3_sq = -(h->b * beta + eps) / b2;
  } else if (const auto* w = std::get_if<potentials::WeiHua>(&rp.spec)) {
    c.a1_sq = kf - (eps - w->D) / b2;
    c.a2_sq = -(2.0 * w->D / w->a_shape - 2.0 * eps) / b2;
    c.a3_sq = -(eps - w->D / (w->a_shape * w->a_shape)) / b2;
  } else {
    const auto& v = std::get<potentials::Varshni>(rp.spec);
    c.a1_sq = kf - eps / b2;
    c.a2_sq = -(v.a * v.b * beta - 2.0 * eps) / b2;
    c.a3_sq = -(eps - v.a * v.b * beta) / b2;
  }
  return c;
}

/// Eps-independent coefficient sum S = a1_sq + a2_sq + a3_sq.
inline double coeff_sum(const ReducedProblem& rp) {
  const auto c = coefficients(rp, 0.0);
  return c.a1_sq + c.a2_sq + c.a3_sq;
}

/// Eps-independent combination B2 = a2_sq + 2 a1_sq.
inline double coeff_b2(const ReducedProblem& rp) {
  const auto c = coefficients(rp, 0.0);
  return c.a2_sq + 2.0 * c.a1_sq;
}

/// Inverts a1_sq(eps) = a1_sq(0) - eps/beta^2: the eps at which a1_sq takes
/// the given value.  Note eps = threshold exactly when a1_sq = 0.
inline double epsilon_of_a1sq(const ReducedProblem& rp, double a1_sq) {
  const double beta = potentials::beta_of(rp.spec);
  return beta * beta * (coefficients(rp, 0.0).a1_sq - a1_sq);
}

/// Both roots of the quadratic E-map at a given plain quadratic value P:
///   spin:        (E + M - A1)(E - M) = P
///   pseudospin:  (E - M - A2)(E + M) = P
/// Returns (E_minus, E_plus) with E_minus <= E_plus.  Throws
/// NoBoundStateError when the discriminant is negative.
inline std::pair<double, double> energy_roots(const SymmetryCase& sym, double P) {
  const double M = sym.M;
  double disc, center;
  if (sym.sym == Symmetry::spin) {
    const double A1 = sym.sym_const;
    disc = A1 * A1 - 4.0 * (A1 * M - M * M - P);
    center = A1;
  } else {
    const double A2 = sym.sym_const;
    disc = A2 * A2 + 4.0 * (M * M + A2 * M + P);
    center = A2;
  }
  if (disc < 0.0)
    throw NoBoundStateError("energy map: complex roots (discriminant " +
                            format_sig(disc) + " < 0)");
  const double root = std::sqrt(disc);
  return {0.5 * (center - root), 0.5 * (center + root)};
}

/// Both energy roots at linear eigenvalue eps, honoring the recorded
/// epsilon_shift: P = eps - epsilon_shift.
inline std::pair<double, double> epsilon_to_energy(const ReducedProblem& rp,
                                                   double eps) {
  return energy_roots(rp.sym, eps - rp.epsilon_shift);
}

/// The eps-parametrized NU problem family of the reduced equation after the
/// exponential substitution: sigma = z(1-z), tau_tilde = 1-z,
/// sigma_tilde = -a3_sq z^2 - a2_sq z - a1_sq.
inline std::function<nu_core::NUProblem(double)>
nu_problem_of(const ReducedProblem& rp) {
  return [rp](double eps) {
    const auto c = coefficients(rp, eps);
    nu_core::NUProblem pr;
    pr.sigma = {0.0, 1.0, -1.0};
    pr.tau_tilde = {1.0, -1.0, 0.0};
    pr.sigma_tilde = {-c.a1_sq, -c.a2_sq, -c.a3_sq};
    return pr;
  };
}

} // namespace diracbound::reduction
