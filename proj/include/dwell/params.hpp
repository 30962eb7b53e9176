#pragma once

#include <cmath>
#include <string>

#include "dwell/error.hpp"

namespace dwell {

/// Parameters of the generalized double well V = (g^2/2)(x^2-1)^2(x^2+a).
///
/// The derived constants are computed once at construction:
///   e0      = sqrt(1+a), the leading energy coefficient (E ~ g*e0 + ...)
///   gamma   = (g*a - e0)/(g*a + e0), the mixing coefficient of the trial
///             function; positive iff g > e0/a
///   a_bound = (1 + sqrt(1+4g^2))/(2g^2); a > a_bound iff gamma > 0
class PotentialParams {
 public:
  PotentialParams(double g, double a) : g_(g), a_(a) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw ParameterError("coupling g must be a finite positive number, got " + std::to_string(g));
    }
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ParameterError("shape parameter a must be a finite positive number, got " +
                           std::to_string(a));
    }
    e0_ = std::sqrt(1.0 + a);
    gamma_ = (g * a - e0_) / (g * a + e0_);
    a_bound_ = (1.0 + std::sqrt(1.0 + 4.0 * g * g)) / (2.0 * g * g);
  }

  [[nodiscard]] double g() const noexcept { return g_; }
  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double e0() const noexcept { return e0_; }
  /// g * e0: the zeroth entry of every energy sequence.
  [[nodiscard]] double leading_energy() const noexcept { return g_ * e0_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] double a_bound() const noexcept { return a_bound_; }
  [[nodiscard]] bool gamma_positive() const noexcept { return gamma_ > 0.0; }

  /// Throws ConvergenceDomainError unless gamma > 0.
  void require_positive_gamma() const {
    if (!gamma_positive()) {
      throw ConvergenceDomainError(
          "mixing coefficient Gamma = " + std::to_string(gamma_) +
          " is not positive; the method requires g > sqrt(1+a)/a (here g = " + std::to_string(g_) +
          ", sqrt(1+a)/a = " + std::to_string(e0_ / a_) + "), equivalently a > a_g(g) = " +
          std::to_string(a_bound_));
    }
  }

  friend bool operator==(const PotentialParams& l, const PotentialParams& r) noexcept {
    return l.g_ == r.g_ && l.a_ == r.a_;
  }

 private:
  double g_;
  double a_;
  double e0_;
  double gamma_;
  double a_bound_;
};

/// Closed-form a_g(g) = (1 + sqrt(1+4g^2)) / (2g^2).
[[nodiscard]] inline double coupling_shape_bound(double g) {
  if (!(g > 0.0)) throw ParameterError("a_g(g) requires g > 0");
  return (1.0 + std::sqrt(1.0 + 4.0 * g * g)) / (2.0 * g * g);
}

/// Smallest coupling with gamma > 0 at shape a: g > sqrt(1+a)/a.
[[nodiscard]] inline double minimum_coupling(double a) {
  if (!(a > 0.0)) throw ParameterError("minimum coupling requires a > 0");
  return std::sqrt(1.0 + a) / a;
}

}  // namespace dwell
