#pragma once

// Closed-form pieces of the asymptotic construction for
//   V(x) = (g^2/2)(x^2-1)^2(x^2+a).
//
// psi ~ exp(-g S0 - S1) with
//   S0' = (x^2-1) sqrt(x^2+a)
//   S1' = [x(3x^2+2a-1) - 2 sqrt(1+a) sqrt(x^2+a)] / [2(x^2-1)(x^2+a)]
// and the residual potentials
//   u = (S1'^2 - S1'')/2,   w = u + ghat.
//
// All functions are pure; only x >= 0 is accepted (the potentials are even).

#include <cmath>
#include <string>

#include "dwell/error.hpp"
#include "dwell/params.hpp"

namespace dwell {

namespace detail {

inline void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw ParameterError(std::string(what) + ": coordinate must be >= 0, got " + std::to_string(x));
  }
}

/// ln(x + sqrt(x^2+a)) for any real x, written through asinh so that the
/// negative branch does not cancel.
inline double log_x_plus_root(double a, double x) {
  return std::asinh(x / std::sqrt(a)) + 0.5 * std::log(a);
}

/// S0 at any real x (the trial function needs S0(-x)).
inline double s0_any(double a, double x) {
  const double root = std::sqrt(x * x + a);
  const double c = a / 8.0 + 0.5;
  return 0.25 * x * root * root * root - c * x * root - a * c * log_x_plus_root(a, x);
}

}  // namespace detail

/// Removable-singularity guard used by the raw S1' quotient.
inline constexpr double kS1QuotientGuard = 1e-4;

[[nodiscard]] inline double potential(const PotentialParams& p, double x) {
  const double x2 = x * x;
  const double d = x2 - 1.0;
  return 0.5 * p.g() * p.g() * d * d * (x2 + p.a());
}

[[nodiscard]] inline double s0(const PotentialParams& p, double x) {
  detail::require_nonnegative(x, "s0");
  return detail::s0_any(p.a(), x);
}

[[nodiscard]] inline double s0_prime(const PotentialParams& p, double x) {
  detail::require_nonnegative(x, "s0_prime");
  return (x * x - 1.0) * std::sqrt(x * x + p.a());
}

[[nodiscard]] inline double s1(const PotentialParams& p, double x) {
  detail::require_nonnegative(x, "s1");
  const double a = p.a();
  const double rs = p.e0() * std::sqrt(x * x + a);
  return std::log(x + 1.0) + 0.25 * std::log(x * x + a) + 0.5 * std::log((rs + a + x) / (rs + a - x));
}

/// S1' in rationalized form.
///
/// With s = x^2 the numerator of the quotient form satisfies
///   x^2(3s+2a-1)^2 - 4(1+a)(s+a) = (s-1) Q(s),  Q = 9s^2 + (12a+3)s + 4a(a+1),
/// so multiplying through by the conjugate cancels the (x^2-1) factor exactly:
///   S1' = Q(x^2) / (2(x^2+a)[x(3x^2+2a-1) + 2 sqrt(1+a) sqrt(x^2+a)]).
/// Q > 0 and the bracket is positive for x >= 0, so this form is smooth
/// through x = 1.
[[nodiscard]] inline double s1_prime(const PotentialParams& p, double x) {
  detail::require_nonnegative(x, "s1_prime");
  const double a = p.a();
  const double s = x * x;
  const double q = (9.0 * s + (12.0 * a + 3.0)) * s + 4.0 * a * (a + 1.0);
  const double conj = x * (3.0 * s + 2.0 * a - 1.0) + 2.0 * p.e0() * std::sqrt(s + a);
  return q / (2.0 * (s + a) * conj);
}

/// S1' straight from the quotient; undefined at x = 1. Throws if
/// |x - 1| < guard. Used to cross-check s1_prime.
[[nodiscard]] inline double s1_prime_quotient(const PotentialParams& p, double x,
                                              double guard = kS1QuotientGuard) {
  detail::require_nonnegative(x, "s1_prime_quotient");
  if (std::abs(x - 1.0) < guard) {
    throw NumericalError("s1_prime_quotient: |x-1| = " + std::to_string(std::abs(x - 1.0)) +
                         " is inside the removable-singularity guard " + std::to_string(guard));
  }
  const double a = p.a();
  const double s = x * x;
  const double num = x * (3.0 * s + 2.0 * a - 1.0) - 2.0 * p.e0() * std::sqrt(s + a);
  return num / (2.0 * (s - 1.0) * (s + a));
}

/// u(x) for shape a. u does not depend on g.
///
///   u = (alpha - 8 sqrt(x^2+a) beta) / (8 (x^2-1)^2 (x^2+a)^2)
///     = gamma / (8 (x^2+a)^2 (alpha + 8 sqrt(x^2+a) beta))
///
/// The second form has no (x^2-1) pole and no cancellation when beta > 0;
/// beta <= 0 only happens for x < sqrt((1-2a)/3) < 0.58, well away from 1.
[[nodiscard]] inline double u(double a, double x) {
  detail::require_nonnegative(x, "u");
  const double s = x * x;
  const double root = std::sqrt(s + a);
  const double alpha = ((15.0 * s + 6.0 * (3.0 * a - 1.0)) * s + (8.0 * a * a + 12.0 * a + 7.0)) * s +
                       8.0 * a * a + 2.0 * a;
  const double beta = std::sqrt(1.0 + a) * x * (3.0 * s + 2.0 * a - 1.0);
  const double sa2 = (s + a) * (s + a);
  if (beta > 0.0) {
    const double g1 = (15.0 * s + 18.0) * s - 1.0;
    const double g2 = 4.0 * ((141.0 * s + 90.0) * s + 1.0) * a * a + 32.0 * (9.0 * s + 1.0) * a * a * a +
                      64.0 * a * a * a * a;
    const double gamma = g1 * (15.0 * s + 36.0 * a) * s + g2;
    return gamma / (8.0 * sa2 * (alpha + 8.0 * root * beta));
  }
  const double d = s - 1.0;
  return (alpha - 8.0 * root * beta) / (8.0 * d * d * sa2);
}

[[nodiscard]] inline double u(const PotentialParams& p, double x) { return u(p.a(), x); }

/// log(phi_-/phi_+) = g (S0(x) - S0(-x)) = 2g (S0(x) - S0(0)); <= 0 on [0,1].
[[nodiscard]] inline double log_branch_ratio(const PotentialParams& p, double x) {
  return p.g() * (detail::s0_any(p.a(), x) - detail::s0_any(p.a(), -x));
}

namespace detail {
inline double ghat_from_ratio(const PotentialParams& p, double ratio) {
  const double gr = p.gamma() * ratio;
  return p.leading_energy() * 2.0 * gr / (1.0 + gr);
}
}  // namespace detail

/// ghat(x) = g e0 * 2 Gamma phi_- / (phi_+ + Gamma phi_-) on [0,1), 0 beyond.
/// At x = 1 the right limit (0) is returned; see ghat_knee_left.
[[nodiscard]] inline double ghat(const PotentialParams& p, double x) {
  detail::require_nonnegative(x, "ghat");
  p.require_positive_gamma();
  if (x >= 1.0) return 0.0;
  return detail::ghat_from_ratio(p, std::exp(log_branch_ratio(p, x)));
}

/// Left limit of ghat at the jump x = 1.
[[nodiscard]] inline double ghat_knee_left(const PotentialParams& p) {
  p.require_positive_gamma();
  return detail::ghat_from_ratio(p, std::exp(log_branch_ratio(p, 1.0)));
}

[[nodiscard]] inline double w(const PotentialParams& p, double x) { return u(p, x) + ghat(p, x); }

/// Specialized closed forms for a = 2, kept as an independent cross-check of
/// the general expressions.
namespace a2 {

[[nodiscard]] inline double s0(double x) {
  detail::require_nonnegative(x, "a2::s0");
  const double root = std::sqrt(x * x + 2.0);
  return 0.25 * x * (x * x - 1.0) * root - 1.5 * std::log(x + root);
}

[[nodiscard]] inline double s1(double x) {
  detail::require_nonnegative(x, "a2::s1");
  const double r3 = std::sqrt(3.0 * (x * x + 2.0));
  return std::log(x + 1.0) + 0.25 * std::log(x * x + 2.0) + 0.5 * std::log((2.0 + x + r3) / (2.0 - x + r3));
}

[[nodiscard]] inline double u(double x) {
  detail::require_nonnegative(x, "a2::u");
  const double s = x * x;
  const double num = (((25.0 * s + 150.0) * s + 393.0) * s + 408.0) * s + 144.0;
  const double big_a = ((5.0 * s + 10.0) * s + 21.0) * s + 12.0;
  const double big_b = 8.0 * std::sqrt(3.0) * x * (s + 1.0) * std::sqrt(s + 2.0);
  return 0.375 * num / ((s + 2.0) * (s + 2.0) * (big_a + big_b));
}

}  // namespace a2

}  // namespace dwell
