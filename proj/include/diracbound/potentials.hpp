#pragma once

/// \file potentials.hpp
/// The three screened model potentials, their parameter validation,
/// accuracy-safe pointwise evaluation, and curve sampling.
///
///   Hellmann:  V(r) = -a/r + (b/r) e^{-beta r}
///   Wei Hua:   V(r) = D [ (1 - e^{-beta r}) / (1 - a_shape e^{-beta r}) ]^2
///   Varshni:   V(r) = a [ 1 - (b/r) e^{-beta r} ]
///
/// plus the Pekeris-type centrifugal approximation
///   1/r^2  ~  beta^2 / (1 - e^{-beta r})^2 .
///
/// All operations are pure; unrestricted concurrent use is safe.

#include <cmath>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "diracbound/common.hpp"

namespace diracbound::potentials {

/// Hellmann potential V(r) = -a/r + (b/r) e^{-beta r}.
struct Hellmann {
  double a = 0.0;     ///< Coulomb strength
  double b = 0.0;     ///< Yukawa strength
  double beta = 0.0;  ///< screening parameter, 1/length, > 0
};

/// Wei Hua potential V(r) = D [(1-e^{-beta r})/(1-a_shape e^{-beta r})]^2.
struct WeiHua {
  double D = 0.0;        ///< well depth, energy units, > 0
  double a_shape = 0.0;  ///< dimensionless shape parameter, != 1
  double beta = 0.0;     ///< screening parameter, > 0
};

/// Varshni potential V(r) = a [1 - (b/r) e^{-beta r}].
struct Varshni {
  double a = 0.0;     ///< asymptotic value, energy units
  double b = 0.0;     ///< length-weighted strength
  double beta = 0.0;  ///< screening parameter, > 0
};

using PotentialSpec = std::variant<Hellmann, WeiHua, Varshni>;

/// Canonical lower-case name used by the CLI and file formats.
inline std::string name_of(const PotentialSpec& spec) {
  if (std::holds_alternative<Hellmann>(spec)) return "hellmann";
  if (std::holds_alternative<WeiHua>(spec)) return "weihua";
  return "varshni";
}

/// Screening parameter shared by every variant.
inline double beta_of(const PotentialSpec& spec) {
  return std::visit([](const auto& p) { return p.beta; }, spec);
}

/// Throws UsageError when parameter invariants are violated (beta <= 0
/// everywhere; a_shape == 1 for Wei Hua, which would put the pole at r = 0+).
inline void validate(const PotentialSpec& spec) {
  if (!(beta_of(spec) > 0.0))
    throw UsageError("potential: beta must be > 0");
  if (const auto* w = std::get_if<WeiHua>(&spec)) {
    if (w->a_shape == 1.0)
      throw UsageError("weihua: a_shape must differ from 1");
    if (!(w->D > 0.0))
      throw UsageError("weihua: D must be > 0");
  }
}

/// Builds a validated PotentialSpec from a name and key=value parameters.
/// Accepted keys: hellmann/varshni {a, b, beta}; weihua {D, a, beta} where
/// `a` is the shape parameter.  Missing or unknown keys raise UsageError.
inline PotentialSpec make(const std::string& name,
                          const std::map<std::string, double>& params) {
  auto need = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end())
      throw UsageError("potential '" + name + "': missing parameter '" + key + "'");
    return it->second;
  };
  auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || (k == a);
      if (!ok)
        throw UsageError("potential '" + name + "': unknown parameter '" + k + "'");
    }
  };
  PotentialSpec spec;
  if (name == "hellmann") {
    check_keys({"a", "b", "beta"});
    spec = Hellmann{need("a"), need("b"), need("beta")};
  } else if (name == "weihua") {
    check_keys({"D", "a", "beta"});
    spec = WeiHua{need("D"), need("a"), need("beta")};
  } else if (name == "varshni") {
    check_keys({"a", "b", "beta"});
    spec = Varshni{need("a"), need("b"), need("beta")};
  } else {
    throw UsageError("unknown potential '" + name +
                     "' (expected hellmann, weihua, or varshni)");
  }
  validate(spec);
  return spec;
}

/// Pointwise potential value at r > 0.  Throws UsageError at r <= 0 and
/// Error at a Wei Hua pole (denominator magnitude < 1e-14).
///
/// The Hellmann evaluation is written as (b-a)/r + b*expm1(-beta r)/r so the
/// a == b case reaches its removable-singularity limit -a*beta without
/// catastrophic cancellation, and b == 0 reduces to exactly -a/r.
inline double evaluate(const PotentialSpec& spec, double r) {
  if (!(r > 0.0)) throw UsageError("potential: r must be > 0");
  return std::visit(
      [r](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Hellmann>) {
          return (p.b - p.a) / r + p.b * std::expm1(-p.beta * r) / r;
        } else if constexpr (std::is_same_v<T, WeiHua>) {
          const double z = std::exp(-p.beta * r);
          const double denom = 1.0 - p.a_shape * z;
          if (std::fabs(denom) < 1e-14)
            throw Error("weihua: potential pole at r = " + format_sig(r));
          const double t = -std::expm1(-p.beta * r);  // 1 - e^{-beta r}
          const double q = t / denom;
          return p.D * q * q;
        } else {
          return p.a * (1.0 - (p.b / r) * std::exp(-p.beta * r));
        }
      },
      spec);
}

/// Pekeris-type approximation beta^2/(1-e^{-beta r})^2 to 1/r^2 (r > 0).
inline double centrifugal_approx(double beta, double r) {
  const double t = -std::expm1(-beta * r);  // 1 - e^{-beta r}
  return beta * beta / (t * t);
}

/// One sampled point of a potential curve.
struct CurvePoint {
  double r = 0.0;
  double V = 0.0;
};

/// Uniform samples of V on [r_min, r_max], endpoints included.
/// Throws UsageError unless 0 < r_min < r_max and samples >= 2; evaluation
/// errors propagate annotated with the offending radius.
inline std::vector<CurvePoint> curve(const PotentialSpec& spec, double r_min,
                                     double r_max, int samples) {
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw UsageError("curve: need 0 < r_min < r_max");
  if (samples < 2) throw UsageError("curve: need at least 2 samples");
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  const double h = (r_max - r_min) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double r = (i == samples - 1) ? r_max : r_min + i * h;
    try {
      out.push_back({r, evaluate(spec, r)});
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " (while sampling curve at r = " +
                  format_sig(r) + ")");
    }
  }
  return out;
}

} // namespace diracbound::potentials
