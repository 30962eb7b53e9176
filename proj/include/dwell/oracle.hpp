#pragma once

// Independent reference for the ground state: the three-point discretization
// of -1/2 psi'' + V psi on [-L, L] with psi(+-L) = 0. The lowest eigenvalue
// comes from Sturm-count bisection, the eigenvector from inverse iteration.
// Three resolutions n, 2n, 4n are combined by Richardson extrapolation
// (the error is O(h^2)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dwell/closed_forms.hpp"
#include "dwell/error.hpp"
#include "dwell/params.hpp"

namespace dwell {

/// Symmetric tridiagonal matrix: diagonal d, off-diagonal e (size n-1).
template <typename Real = double>
struct Tridiagonal {
  std::vector<Real> d;
  std::vector<Real> e;

  [[nodiscard]] std::size_t size() const noexcept { return d.size(); }

  /// Number of eigenvalues strictly below x.
  [[nodiscard]] std::size_t count_below(Real x) const {
    std::size_t count = 0;
    Real q = d[0] - x;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
      const Real prev = q == Real(0) ? std::numeric_limits<Real>::epsilon() * (std::abs(d[i - 1]) + std::abs(e[i - 1]) + 1)
                                     : q;
      q = d[i] - x - e[i - 1] * e[i - 1] / prev;
      if (q < 0) ++count;
    }
    return count;
  }

  /// Gerschgorin interval containing the spectrum.
  [[nodiscard]] std::pair<Real, Real> bounds() const {
    Real lo = std::numeric_limits<Real>::infinity();
    Real hi = -lo;
    for (std::size_t i = 0; i < d.size(); ++i) {
      Real r = 0;
      if (i > 0) r += std::abs(e[i - 1]);
      if (i + 1 < d.size()) r += std::abs(e[i]);
      lo = std::min(lo, d[i] - r);
      hi = std::max(hi, d[i] + r);
    }
    return {lo, hi};
  }

  /// k-th smallest eigenvalue (k = 0 is the lowest) by bisection.
  [[nodiscard]] Real eigenvalue(std::size_t k, Real rel_tol = Real(1e-15)) const {
    auto [lo, hi] = bounds();
    for (int it = 0; it < 200; ++it) {
      const Real mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      if (count_below(mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
      if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return lo + (hi - lo) / 2;
  }

  /// Solves (T - shift) x = b. Requires shift below the spectrum, so the
  /// shifted matrix is positive definite and needs no pivoting.
  [[nodiscard]] std::vector<Real> solve_shifted(Real shift, const std::vector<Real>& b) const {
    const std::size_t n = d.size();
    std::vector<Real> diag(n), rhs(b);
    diag[0] = d[0] - shift;
    for (std::size_t i = 1; i < n; ++i) {
      const Real m = e[i - 1] / diag[i - 1];
      diag[i] = d[i] - shift - m * e[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    std::vector<Real> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - e[i] * x[i + 1]) / diag[i];
    return x;
  }

  /// Eigenvector for an eigenvalue estimate, by inverse iteration.
  [[nodiscard]] std::vector<Real> eigenvector(Real lambda, int iterations = 4) const {
    const std::size_t n = d.size();
    std::vector<Real> v(n, Real(1));
    const Real shift = lambda - (std::abs(lambda) + Real(1)) * Real(1e-12);
    for (int it = 0; it < iterations; ++it) {
      v = solve_shifted(shift, v);
      Real norm = 0;
      for (Real t : v) norm = std::max(norm, std::abs(t));
      for (Real& t : v) t /= norm;
    }
    return v;
  }
};

struct OracleConfig {
  double half_width = 6.0;        ///< L
  std::size_t intervals = 4000;   ///< n on the coarsest level; must be even
  /// Largest accepted |E_n - E_2n| before the discretization is rejected.
  double max_level_gap = 1e-3;
};

struct OracleResult {
  double energy = 0.0;             ///< Richardson value
  double error_estimate = 0.0;     ///< |R(n,2n) - R(2n,4n)|
  std::vector<double> level_energies;   ///< n, 2n, 4n
  std::vector<double> x;           ///< nodes of the finest level, interior plus ends
  std::vector<double> psi;         ///< psi(0) = 1
};

namespace oracle_detail {

inline Tridiagonal<double> hamiltonian(const PotentialParams& p, double L, std::size_t n) {
  const double h = 2.0 * L / static_cast<double>(n);
  const double k = 0.5 / (h * h);
  Tridiagonal<double> t;
  t.d.resize(n - 1);
  t.e.assign(n - 2, -k);
  for (std::size_t i = 1; i < n; ++i) {
    const double x = -L + static_cast<double>(i) * h;
    t.d[i - 1] = 2.0 * k + potential(p, std::abs(x));
  }
  return t;
}

}  // namespace oracle_detail

/// Ground state of the finite-difference Hamiltonian.
[[nodiscard]] inline OracleResult oracle_ground_state(const PotentialParams& p, const OracleConfig& cfg = {}) {
  if (!(cfg.half_width > 1.0)) throw ParameterError("oracle: half width must exceed 1");
  if (cfg.intervals < 8 || cfg.intervals % 2 != 0) throw ParameterError("oracle: interval count must be even and >= 8");
  OracleResult r;
  Tridiagonal<double> finest;
  for (std::size_t level = 0; level < 3; ++level) {
    const std::size_t n = cfg.intervals << level;
    auto t = oracle_detail::hamiltonian(p, cfg.half_width, n);
    r.level_energies.push_back(t.eigenvalue(0));
    if (level == 2) finest = std::move(t);
  }
  const auto& e = r.level_energies;
  if (std::abs(e[0] - e[1]) > cfg.max_level_gap) {
    throw DiscretizationError("oracle: energies at n and 2n differ by " + std::to_string(std::abs(e[0] - e[1])) +
                              "; refine the grid or widen the box");
  }
  const double r1 = (4.0 * e[1] - e[0]) / 3.0;
  const double r2 = (4.0 * e[2] - e[1]) / 3.0;
  r.energy = r2;
  r.error_estimate = std::abs(r2 - r1);

  const std::size_t n = cfg.intervals << 2;
  const double h = 2.0 * cfg.half_width / static_cast<double>(n);
  auto v = finest.eigenvector(e[2]);
  r.x.resize(n + 1);
  r.psi.assign(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) r.x[i] = -cfg.half_width + static_cast<double>(i) * h;
  r.x[n / 2] = 0.0;
  for (std::size_t i = 1; i < n; ++i) r.psi[i] = v[i - 1];
  const double at0 = r.psi[n / 2];
  if (at0 == 0.0) throw NumericalError("oracle: eigenvector vanishes at the origin");
  for (auto& t : r.psi) t /= at0;
  return r;
}

enum class PeakShape { single_at_origin, double_near_unit, other };

[[nodiscard]] inline std::string to_string(PeakShape s) {
  switch (s) {
    case PeakShape::single_at_origin: return "single_at_origin";
    case PeakShape::double_near_unit: return "double_near_unit";
    default: return "other";
  }
}

struct PeakCensus {
  std::vector<double> positions;
  PeakShape shape = PeakShape::other;
};

/// Local maxima of |psi|, ignoring values below 1e-6 of the largest.
///
/// Neighbouring maxima separated by a dip shallower than 1e-6 of the largest
/// value are one flat-topped peak, reported at their midpoint; rounding noise
/// on a quartic maximum otherwise splits it in two.
[[nodiscard]] inline PeakCensus peak_census(const std::vector<double>& x, const std::vector<double>& psi) {
  if (x.size() != psi.size() || x.size() < 3) throw GridMismatchError("peak_census: need matching samples, at least 3");
  double top = 0.0;
  for (double v : psi) top = std::max(top, std::abs(v));
  const double floor = 1e-6 * top;
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double v = std::abs(psi[i]);
    if (v > floor && v >= std::abs(psi[i - 1]) && v > std::abs(psi[i + 1])) idx.push_back(i);
  }
  PeakCensus c;
  std::size_t k = 0;
  while (k < idx.size()) {
    std::size_t first = idx[k];
    std::size_t last = idx[k];
    while (k + 1 < idx.size()) {
      double dip = std::abs(psi[last]);
      for (std::size_t i = last; i <= idx[k + 1]; ++i) dip = std::min(dip, std::abs(psi[i]));
      const double lower = std::min(std::abs(psi[last]), std::abs(psi[idx[k + 1]]));
      if (lower - dip > floor) break;
      last = idx[++k];
    }
    c.positions.push_back(0.5 * (x[first] + x[last]));
    ++k;
  }
  if (c.positions.size() == 1 && std::abs(c.positions[0]) < 0.1) {
    c.shape = PeakShape::single_at_origin;
  } else if (c.positions.size() == 2 && std::abs(std::abs(c.positions[0]) - 1.0) < 0.5 &&
             std::abs(std::abs(c.positions[1]) - 1.0) < 0.5 && c.positions[0] * c.positions[1] < 0.0) {
    c.shape = PeakShape::double_near_unit;
  }
  return c;
}

/// Census of an even function given on x >= 0, after mirroring to x < 0.
[[nodiscard]] inline PeakCensus peak_census_even(const std::vector<double>& x, const std::vector<double>& psi) {
  if (x.size() != psi.size() || x.empty() || x.front() != 0.0) {
    throw GridMismatchError("peak_census_even: samples must start at x = 0");
  }
  std::vector<double> xs, ps;
  xs.reserve(2 * x.size() - 1);
  ps.reserve(2 * x.size() - 1);
  for (std::size_t i = x.size(); i-- > 1;) {
    xs.push_back(-x[i]);
    ps.push_back(psi[i]);
  }
  xs.insert(xs.end(), x.begin(), x.end());
  ps.insert(ps.end(), psi.begin(), psi.end());
  return peak_census(xs, ps);
}

}  // namespace dwell
