#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dwell/closed_forms.hpp"
#include "dwell/error.hpp"
#include "dwell/grid.hpp"
#include "dwell/params.hpp"
#include "dwell/quadrature.hpp"

namespace dwell {

/// The even trial function
///
///   phi(x) = phi_+(x) + Gamma phi_-(x)                          0 <= x < 1
///          = (1 + Gamma phi_-(1)/phi_+(1)) phi_+(x)             x >= 1
///
/// with phi_+ = exp(-g S0(x) - S1(x)), phi_- = exp(-g S0(-x) - S1(x)), sampled
/// in log space. The common normalization puts max ln phi at 0; psi0 is
/// phi/phi(0).
class TrialFunction {
 public:
  TrialFunction(PotentialParams params, LogGridFunction phi, LogGridFunction phi_plus, LogGridFunction phi_minus,
                LogGridFunction psi0, double log_offset)
      : params_(params),
        phi_(std::move(phi)),
        phi_plus_(std::move(phi_plus)),
        phi_minus_(std::move(phi_minus)),
        psi0_(std::move(psi0)),
        log_offset_(log_offset) {}

  [[nodiscard]] const PotentialParams& params() const noexcept { return params_; }
  [[nodiscard]] const Grid& grid() const noexcept { return phi_.grid(); }
  [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return phi_.grid_ptr(); }
  [[nodiscard]] const LogGridFunction& phi() const noexcept { return phi_; }
  [[nodiscard]] const LogGridFunction& phi_plus() const noexcept { return phi_plus_; }
  [[nodiscard]] const LogGridFunction& phi_minus() const noexcept { return phi_minus_; }
  [[nodiscard]] const LogGridFunction& psi0() const noexcept { return psi0_; }
  /// Constant added to -g S0 - S1 so that max ln phi = 0.
  [[nodiscard]] double log_offset() const noexcept { return log_offset_; }

  /// (ln phi)' from the inner branch, any x in [0, 1].
  [[nodiscard]] double inner_log_derivative(double x) const {
    const auto& p = params_;
    const double sp = s0_prime(p, x);
    const double s1p = s1_prime(p, x);
    const double dplus = -p.g() * sp - s1p;   // (ln phi_+)'
    const double dminus = p.g() * sp - s1p;   // (ln phi_-)', S0' is even
    const double r = p.gamma() * std::exp(log_branch_ratio(p, x));
    return (dplus + r * dminus) / (1.0 + r);
  }

  /// (ln phi)' from the outer branch, any x >= 1.
  [[nodiscard]] double outer_log_derivative(double x) const {
    return -params_.g() * s0_prime(params_, x) - s1_prime(params_, x);
  }

  /// ln phi at an arbitrary x >= 0 in the same normalization as the samples.
  [[nodiscard]] double log_phi_at(double x) const {
    detail::require_nonnegative(x, "log_phi_at");
    const auto& p = params_;
    const double lp = -p.g() * detail::s0_any(p.a(), x) - s1(p, x) + log_offset_;
    if (x < 1.0) return lp + std::log1p(p.gamma() * std::exp(log_branch_ratio(p, x)));
    return lp + std::log1p(p.gamma() * std::exp(log_branch_ratio(p, 1.0)));
  }

  /// Continuation of phi^2 beyond x_max for the nested integrals.
  [[nodiscard]] TailModel tail_model() const {
    const double xm = grid().x_max();
    const double d_end = -outer_log_derivative(xm);
    // int_{xm}^inf D(xm)/D(y) dy with y = xm/t; integrand -> 0 as t -> 0.
    constexpr int n = 400;
    const double h = 1.0 / n;
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double t = i * h;
      const double y = xm / t;
      const double f = d_end * xm / (t * t * -outer_log_derivative(y));
      sum += (i == n ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0)) * f;
    }
    return TailModel{d_end, sum * h / 3.0};
  }

 private:
  PotentialParams params_;
  LogGridFunction phi_;
  LogGridFunction phi_plus_;
  LogGridFunction phi_minus_;
  LogGridFunction psi0_;
  double log_offset_;
};

[[nodiscard]] inline TrialFunction build_trial(const PotentialParams& p, const GridPtr& grid) {
  p.require_positive_gamma();
  if (!grid) throw GridError("build_trial: null grid");
  const Grid& g = *grid;
  if (g[g.knee()] != 1.0) throw GridError("build_trial: x = 1 is not a grid node");

  const std::size_t n = g.size();
  std::vector<double> lp(n), lm(n), lphi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g[i];
    const double s1v = s1(p, x);
    lp[i] = -p.g() * detail::s0_any(p.a(), x) - s1v;
    lm[i] = -p.g() * detail::s0_any(p.a(), -x) - s1v;
  }
  const std::size_t k = g.knee();
  const double outer_factor = std::log1p(p.gamma() * std::exp(lm[k] - lp[k]));
  for (std::size_t i = 0; i < n; ++i) {
    lphi[i] = i < k ? lp[i] + std::log1p(p.gamma() * std::exp(lm[i] - lp[i])) : lp[i] + outer_factor;
  }
  const double peak = *std::max_element(lphi.begin(), lphi.end());
  for (std::size_t i = 0; i < n; ++i) {
    lp[i] -= peak;
    lm[i] -= peak;
    lphi[i] -= peak;
  }
  std::vector<double> lpsi(lphi);
  const double at0 = lphi[0];
  for (auto& v : lpsi) v -= at0;
  lpsi[0] = 0.0;

  auto phi = LogGridFunction::positive(grid, std::move(lphi));
  return TrialFunction(p, std::move(phi), LogGridFunction::positive(grid, std::move(lp)),
                       LogGridFunction::positive(grid, std::move(lm)), LogGridFunction::positive(grid, std::move(lpsi)),
                       -peak);
}

/// ln(phi^2(z)/phi^2(y)) for node indices z, y.
[[nodiscard]] inline double trial_log_ratio(const TrialFunction& t, std::size_t z, std::size_t y) {
  const auto L = t.phi().log_mag();
  if (z >= L.size() || y >= L.size()) throw GridMismatchError("trial_log_ratio: node index out of range");
  return 2.0 * (L[z] - L[y]);
}

/// w = u + ghat sampled on the trial grid, with the left limit of the jump
/// at x = 1 kept separately.
[[nodiscard]] inline GridSamples sample_w(const TrialFunction& t) {
  const auto& p = t.params();
  const Grid& g = t.grid();
  GridSamples s;
  s.values.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s.values[i] = w(p, g[i]);
  s.knee_left = u(p, 1.0) + ghat_knee_left(p);
  return s;
}

}  // namespace dwell
