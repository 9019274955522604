#pragma once

/// \file common.hpp
/// Shared error types and small numeric/formatting helpers.
///
/// Error taxonomy (the CLI maps these onto its exit-code contract):
///   UsageError        -> invalid arguments, domain violations, unsupported input (exit 1)
///   NoBoundStateError -> physically absent result: no bound level, complex energy roots (exit 2)
///   VerificationError -> cross-validation or convergence failure (exit 3)

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace diracbound {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, domain violations (r <= 0, poles, bad quantum numbers),
/// or structurally unsupported input (e.g. a sigma outside the z(1-z) family).
class UsageError : public Error {
public:
  using Error::Error;
};

/// A physically absent result: the requested bound state does not exist
/// (negative discriminant in the energy map, empty quantization bracket, ...).
class NoBoundStateError : public Error {
public:
  using Error::Error;
};

/// A verification failure: cross-checks disagree or an iteration fails to converge.
class VerificationError : public Error {
public:
  using Error::Error;
};

/// Format a double with `sig` significant digits (deterministic "%.{sig}g").
inline std::string format_sig(double x, int sig = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, x);
  return buf;
}

/// Format a double with `dec` fixed decimal places (deterministic "%.{dec}f").
inline std::string format_fixed(double x, int dec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", dec, x);
  return buf;
}

/// True when |x - y| <= tol * max(|x|, |y|, floor).
inline bool approx_rel(double x, double y, double tol, double floor = 0.0) {
  const double scale = std::max({std::fabs(x), std::fabs(y), floor});
  return std::fabs(x - y) <= tol * scale;
}

} // namespace diracbound
