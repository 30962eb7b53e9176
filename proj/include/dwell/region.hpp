#pragma once

// Sign analysis of u and u' over the (a, x) plane.
//
// With s = x^2:
//   alpha = 15 s^3 + 6(3a-1) s^2 + (8a^2+12a+7) s + 8a^2 + 2a
//   beta  = sqrt(1+a) x (3 s + 2a - 1)
//   gamma_pm = alpha +- 8 sqrt(s+a) beta,   gamma_+ gamma_- = (s-1)^2 gamma
//   gamma = g1(x) (15 s^2 + 36 a s) + g2(a, s)
//
// and for the derivative
//   u' = tgamma_- / (8 (s+a)^3 (s-1)^3) = tgamma / (8 (s+a)^3 tgamma_+)
//   tgamma_pm = talpha +- 8 sqrt(s+a) tbeta,  tgamma_+ tgamma_- = (s-1)^3 tgamma
// where tgamma = sum_{l=0}^{6} TG_l(a) s^l.

#include <algorithm>
#include <array>
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

struct RegionPolynomials {
  double alpha = 0;
  double beta = 0;
  double g1 = 0;
  double g2 = 0;
  double gamma = 0;
  double gamma_plus = 0;
  double gamma_minus = 0;
  double tilde_alpha = 0;
  double tilde_beta = 0;
  double tilde_gamma = 0;
  double tilde_gamma_plus = 0;
  double tilde_gamma_minus = 0;
};

/// Coefficients TG_0..TG_6 of tgamma in powers of x^2.
[[nodiscard]] inline std::array<double, 7> tilde_gamma_coefficients(double a) {
  const double a2 = a * a;
  const double a3 = a2 * a;
  return {
      a3 * (64.0 - 192.0 * a + 256.0 * a3),
      a2 * (-228.0 - 1152.0 * a2 + 1536.0 * a3),
      a * (168.0 + 1068.0 * a - 960.0 * a2 + 3648.0 * a3),
      60.0 - 504.0 * a + 4500.0 * a2 + 4992.0 * a3,
      -180.0 + 8568.0 * a + 4644.0 * a2,
      3060.0 + 2520.0 * a,
      900.0,
  };
}

namespace region_detail {

inline double alpha(double a, double s) {
  return ((15.0 * s + 6.0 * (3.0 * a - 1.0)) * s + (8.0 * a * a + 12.0 * a + 7.0)) * s + 8.0 * a * a + 2.0 * a;
}

inline double beta(double a, double x) { return std::sqrt(1.0 + a) * x * (3.0 * x * x + 2.0 * a - 1.0); }

inline double g1(double s) { return (15.0 * s + 18.0) * s - 1.0; }

inline double g2(double a, double s) {
  const double a2 = a * a;
  return 4.0 * ((141.0 * s + 90.0) * s + 1.0) * a2 + 32.0 * (9.0 * s + 1.0) * a2 * a + 64.0 * a2 * a2;
}

inline double gamma(double a, double s) { return g1(s) * (15.0 * s + 36.0 * a) * s + g2(a, s); }

inline double tilde_alpha(double a, double x) {
  const double s = x * x;
  const double x3 = s * x;
  // x * (polynomial in s) for each power of a
  const double c0 = x3 * (((-30.0 * s - 6.0) * s - 42.0) * s + 14.0);
  const double c1 = x * ((((-42.0 * s - 162.0) * s + 18.0) * s) - 6.0);
  const double c2 = x3 * (-48.0 * s - 144.0);
  const double c3 = x * (-16.0 * s - 48.0);
  return c0 + a * (c1 + a * (c2 + a * c3));
}

inline double tilde_beta(double a, double x) {
  const double s = x * x;
  const double c0 = s * ((-12.0 * s + 6.0) * s - 2.0);
  const double c1 = (-15.0 * s - 2.0) * s + 1.0;
  const double c2 = -6.0 * s - 2.0;
  return std::sqrt(1.0 + a) * (c0 + a * (c1 + a * c2));
}

inline double tilde_gamma(double a, double s) {
  const auto c = tilde_gamma_coefficients(a);
  double acc = 0.0;
  for (std::size_t l = c.size(); l-- > 0;) acc = acc * s + c[l];
  return acc;
}

inline void require_domain(double a, double x, const char* what) {
  if (!(a > 0.0)) throw ParameterError(std::string(what) + ": a must be > 0");
  detail::require_nonnegative(x, what);
}

}  // namespace region_detail

[[nodiscard]] inline RegionPolynomials eval_region_polys(double a, double x) {
  region_detail::require_domain(a, x, "eval_region_polys");
  const double s = x * x;
  const double root = std::sqrt(s + a);
  RegionPolynomials r;
  r.alpha = region_detail::alpha(a, s);
  r.beta = region_detail::beta(a, x);
  r.g1 = region_detail::g1(s);
  r.g2 = region_detail::g2(a, s);
  r.gamma = region_detail::gamma(a, s);
  r.gamma_plus = r.alpha + 8.0 * root * r.beta;
  r.gamma_minus = r.alpha - 8.0 * root * r.beta;
  r.tilde_alpha = region_detail::tilde_alpha(a, x);
  r.tilde_beta = region_detail::tilde_beta(a, x);
  r.tilde_gamma = region_detail::tilde_gamma(a, s);
  r.tilde_gamma_plus = r.tilde_alpha + 8.0 * root * r.tilde_beta;
  r.tilde_gamma_minus = r.tilde_alpha - 8.0 * root * r.tilde_beta;
  return r;
}

/// Relative residual of alpha^2 - 64(s+a) beta^2 = (s-1)^2 gamma.
[[nodiscard]] inline double gamma_identity_residual(double a, double x) {
  const auto r = eval_region_polys(a, x);
  const double s = x * x;
  const double lhs_a = r.alpha * r.alpha;
  const double lhs_b = 64.0 * (s + a) * r.beta * r.beta;
  const double rhs = (s - 1.0) * (s - 1.0) * r.gamma;
  const double scale = std::max({lhs_a, lhs_b, std::abs(rhs), std::numeric_limits<double>::min()});
  return std::abs(lhs_a - lhs_b - rhs) / scale;
}

/// Relative residual of talpha^2 - 64(s+a) tbeta^2 = (s-1)^3 tgamma, with
/// tgamma taken from the coefficient table.
[[nodiscard]] inline double tilde_gamma_identity_residual(double a, double x) {
  const auto r = eval_region_polys(a, x);
  const double s = x * x;
  const double lhs_a = r.tilde_alpha * r.tilde_alpha;
  const double lhs_b = 64.0 * (s + a) * r.tilde_beta * r.tilde_beta;
  const double d = s - 1.0;
  const double rhs = d * d * d * r.tilde_gamma;
  const double scale = std::max({lhs_a, lhs_b, std::abs(rhs), std::numeric_limits<double>::min()});
  return std::abs(lhs_a - lhs_b - rhs) / scale;
}

/// tgamma by division, (talpha^2 - 64(s+a) tbeta^2) / (s-1)^3. Undefined at x = 1.
[[nodiscard]] inline double tilde_gamma_by_factorization(double a, double x) {
  region_detail::require_domain(a, x, "tilde_gamma_by_factorization");
  const double s = x * x;
  if (s == 1.0) throw NumericalError("tilde_gamma_by_factorization: x = 1");
  const double ta = region_detail::tilde_alpha(a, x);
  const double tb = region_detail::tilde_beta(a, x);
  const double d = s - 1.0;
  return (ta * ta - 64.0 * (s + a) * tb * tb) / (d * d * d);
}

/// du/dx for shape a at x > 0.
///
/// Uses tgamma/tgamma_+ whenever talpha and tbeta share a sign (tgamma_+ is
/// then free of cancellation, and this covers a neighbourhood of x = 1);
/// otherwise tgamma_- over the (s-1)^3 pole form.
[[nodiscard]] inline double u_prime(double a, double x) {
  region_detail::require_domain(a, x, "u_prime");
  const double s = x * x;
  const double root = std::sqrt(s + a);
  const double ta = region_detail::tilde_alpha(a, x);
  const double tb = region_detail::tilde_beta(a, x);
  const double sa = s + a;
  const double denom = 8.0 * sa * sa * sa;
  if (ta * tb >= 0.0) {
    return region_detail::tilde_gamma(a, s) / (denom * (ta + 8.0 * root * tb));
  }
  const double d = s - 1.0;
  return (ta - 8.0 * root * tb) / (denom * d * d * d);
}

/// The a = 2 polynomials A, B, C1, C2 of the positivity argument for u'.
struct A2Polynomials {
  double A = 0;
  double B = 0;
  double C1 = 0;
  double C2 = 0;
};

[[nodiscard]] inline A2Polynomials eval_a2_polys(double x) {
  detail::require_nonnegative(x, "eval_a2_polys");
  const double s = x * x;
  const double r3 = std::sqrt(3.0);
  A2Polynomials p;
  p.A = ((5.0 * s + 10.0) * s + 21.0) * s + 12.0;
  p.B = 8.0 * r3 * x * (s + 1.0) * std::sqrt(s + 2.0);
  p.C1 = x * ((((((((250.0 * s + 3000.0) * s + 16740.0) * s + 49880.0) * s + 83706.0) * s + 77952.0) * s + 34008.0) * s +
               2880.0) * s - 1152.0);
  p.C2 = 8.0 * r3 * ((((((322.0 * s + 2236.0) * s + 6322.0) * s + 9672.0) * s + 8904.0) * s + 4800.0) * s + 1152.0);
  return p;
}

/// u'(x) at a = 2 from the specialized closed form.
[[nodiscard]] inline double u_prime_a2(double x) {
  const auto p = eval_a2_polys(x);
  const double s = x * x;
  const double root = std::sqrt(s + 2.0);
  const double sa2 = (s + 2.0) * (s + 2.0);
  const double al = sa2 * p.A;
  const double be = 8.0 * std::sqrt(3.0) * x * (s + 1.0) * sa2;
  const double q = al + be * root;
  return -0.375 * (p.C1 * root + p.C2) / (root * q * q);
}

struct PositivityReport {
  std::size_t nodes = 0;
  std::size_t combined_failures = 0;   ///< nodes with C1 sqrt(x^2+2) + C2 <= 0
  std::size_t bound_failures = 0;      ///< nodes violating the constant-term bound
  double min_combined = std::numeric_limits<double>::infinity();
  double min_bound_margin = std::numeric_limits<double>::infinity();
  [[nodiscard]] bool passed() const noexcept { return combined_failures == 0 && bound_failures == 0; }
};

/// Checks C1 sqrt(x^2+2) + C2 > 0 and (4800x^2+1152) 8 sqrt(3) > 1152 x sqrt(x^2+2)
/// on x_i = x_max i / count, i = 1..count.
[[nodiscard]] inline PositivityReport verify_a2_positivity(double x_max = 10.0, std::size_t count = 10000) {
  if (!(x_max > 0.0) || count == 0) throw ParameterError("verify_a2_positivity: empty range");
  PositivityReport rep;
  const double r3 = std::sqrt(3.0);
  for (std::size_t i = 1; i <= count; ++i) {
    const double x = x_max * static_cast<double>(i) / static_cast<double>(count);
    const auto p = eval_a2_polys(x);
    const double root = std::sqrt(x * x + 2.0);
    const double combined = p.C1 * root + p.C2;
    const double margin = (4800.0 * x * x + 1152.0) * 8.0 * r3 - 1152.0 * x * root;
    rep.min_combined = std::min(rep.min_combined, combined);
    rep.min_bound_margin = std::min(rep.min_bound_margin, margin);
    if (!(combined > 0.0)) ++rep.combined_failures;
    if (!(margin > 0.0)) ++rep.bound_failures;
    ++rep.nodes;
  }
  return rep;
}

struct SupResult {
  double value = -std::numeric_limits<double>::infinity();
  double x = 0.0;
};

/// sup of u'(x; a) over (0, x_max]: dense scan plus golden-section refinement
/// around the best interior local maximum.
[[nodiscard]] inline SupResult sup_u_prime(double a, double x_max = 5.0, std::size_t samples = 4000) {
  if (samples < 3) throw ParameterError("sup_u_prime: need at least 3 samples");
  std::vector<double> xs(samples), vs(samples);
  SupResult best;
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = x_max * static_cast<double>(i + 1) / static_cast<double>(samples);
    vs[i] = u_prime(a, xs[i]);
    if (vs[i] > best.value) best = {vs[i], xs[i]};
  }
  std::size_t peak = samples;
  for (std::size_t i = 1; i + 1 < samples; ++i) {
    if (vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] && (peak == samples || vs[i] > vs[peak])) peak = i;
  }
  if (peak != samples) {
    double lo = xs[peak - 1];
    double hi = xs[peak + 1];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = u_prime(a, c);
    double fd = u_prime(a, d);
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - inv_phi * (hi - lo);
        fc = u_prime(a, c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + inv_phi * (hi - lo);
        fd = u_prime(a, d);
      }
    }
    const double xm = 0.5 * (lo + hi);
    const double vm = u_prime(a, xm);
    if (vm > best.value) best = {vm, xm};
  }
  return best;
}

struct CriticalShape {
  double value = 0.0;   ///< midpoint of the final bracket
  double lo = 0.0;      ///< largest a found with sup u' >= 0
  double hi = 0.0;      ///< smallest a found with sup u' < 0
  double width = 0.0;   ///< hi - lo
  std::size_t steps = 0;
};

struct CriticalShapeOptions {
  double bracket_lo = 0.3;
  double bracket_hi = 1.0;
  double x_max = 5.0;
  std::size_t samples = 4000;
  double width = 1e-6;
};

/// a_c: infimum of the shapes a for which u'(x) < 0 on all of (0, x_max].
[[nodiscard]] inline CriticalShape find_a_c(const CriticalShapeOptions& opt = {}) {
  auto violates = [&](double a) { return sup_u_prime(a, opt.x_max, opt.samples).value >= 0.0; };
  double lo = opt.bracket_lo;
  double hi = opt.bracket_hi;
  if (!violates(lo) || violates(hi)) {
    throw BracketError("find_a_c: sign of sup u' does not change over [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  CriticalShape out;
  while (hi - lo > opt.width) {
    const double mid = 0.5 * (lo + hi);
    (violates(mid) ? lo : hi) = mid;
    ++out.steps;
  }
  out.lo = lo;
  out.hi = hi;
  out.width = hi - lo;
  out.value = 0.5 * (lo + hi);
  return out;
}

/// find_a_c() with default options, computed once.
[[nodiscard]] inline const CriticalShape& critical_shape() {
  static const CriticalShape cached = find_a_c();
  return cached;
}

[[nodiscard]] inline double find_a_g(double g) { return coupling_shape_bound(g); }

// ---------------------------------------------------------------------------
// Curve tracing

struct CurvePoint {
  double a = 0;
  double coord = 0;   ///< x for (x, a) curves, z = x^2/a for (z, a) curves
};

struct Curve {
  std::string name;    ///< "beta", "gamma", "tilde_alpha", "tilde_beta", "tilde_gamma"
  std::string plane;   ///< "x" or "z"
  std::vector<CurvePoint> points;
  std::vector<double> unbracketed;   ///< sweep values of a inside the curve's range with no root found
};

struct OrderingCheck {
  std::size_t checked = 0;
  std::vector<CurvePoint> counterexamples;   ///< gamma roots where beta >= 0
};

struct RegionReport {
  std::vector<Curve> curves;
  OrderingCheck ordering;
  CriticalShape a_c;
  std::vector<std::pair<double, double>> a_g;   ///< (g, a_g(g))
};

struct TraceOptions {
  std::size_t resolution = 400;   ///< sweep values of a per curve
  double a_min = 1e-3;
  double a_max = 4.0;
  double x_max = 2.0;
  double z_max = 20.0;
  std::size_t scan = 4000;        ///< coordinate samples per sweep value
};

namespace region_detail {

template <class F>
std::vector<double> roots_in(F&& f, double hi, std::size_t scan) {
  std::vector<double> roots;
  double x0 = hi / static_cast<double>(scan);
  double f0 = f(x0);
  for (std::size_t i = 2; i <= scan; ++i) {
    const double x1 = hi * static_cast<double>(i) / static_cast<double>(scan);
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      double lo = x0, up = x1, flo = f0;
      for (int it = 0; it < 100 && up - lo > 1e-15 * std::max(1.0, up); ++it) {
        const double mid = 0.5 * (lo + up);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          up = mid;
        }
      }
      roots.push_back(0.5 * (lo + up));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

inline double curve_value(const std::string& name, double a, double c) {
  if (name == "beta") return beta(a, c);
  if (name == "gamma") return gamma(a, c * c);
  const double x = std::sqrt(a * c);
  if (name == "tilde_alpha") return tilde_alpha(a, x) / x;   // drop the overall factor x
  if (name == "tilde_beta") return tilde_beta(a, x);
  return tilde_gamma(a, x * x);
}

inline std::vector<double> log_sweep(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = lo * std::pow(hi / lo, t);
  }
  return out;
}

}  // namespace region_detail

/// Traces the zero sets of beta, gamma on the (x, a) plane and of talpha,
/// tbeta, tgamma on the (z, a) plane. Each curve is swept over the a-range
/// where it has roots (located by a coarse pre-sweep), at `resolution`
/// log-spaced values of a.
[[nodiscard]] inline RegionReport trace_curves(const TraceOptions& opt = {}) {
  if (opt.resolution < 50) throw ParameterError("trace_curves: resolution must be >= 50");
  RegionReport rep;
  const std::array<std::pair<const char*, const char*>, 5> specs = {{
      {"beta", "x"}, {"gamma", "x"}, {"tilde_alpha", "z"}, {"tilde_beta", "z"}, {"tilde_gamma", "z"}}};
  for (const auto& [name, plane] : specs) {
    const std::string nm = name;
    const double hi = std::string(plane) == "x" ? opt.x_max : opt.z_max;
    auto roots_at = [&](double a, std::size_t scan) {
      return region_detail::roots_in([&](double c) { return region_detail::curve_value(nm, a, c); }, hi, scan);
    };
    // Coarse pass: extent of a over which the curve has roots.
    const auto coarse = region_detail::log_sweep(opt.a_min, opt.a_max, 200);
    std::size_t first = coarse.size(), last = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      if (!roots_at(coarse[i], opt.scan).empty()) {
        first = std::min(first, i);
        last = i;
      }
    }
    Curve curve{nm, plane, {}, {}};
    if (first < coarse.size()) {
      const double lo_a = first == 0 ? coarse[0] : coarse[first - 1];
      const double hi_a = last + 1 < coarse.size() ? coarse[last + 1] : coarse.back();
      for (double a : region_detail::log_sweep(lo_a, hi_a, opt.resolution)) {
        auto rs = roots_at(a, opt.scan);
        const bool inside = a >= coarse[first] && a <= coarse[last];
        // two branches crossing can put a root pair inside one scan step
        if (rs.empty() && inside) rs = roots_at(a, 50 * opt.scan);
        if (rs.empty() && inside) curve.unbracketed.push_back(a);
        for (double r : rs) curve.points.push_back({a, r});
      }
    }
    rep.curves.push_back(std::move(curve));
  }
  // Ordering: every gamma = 0 point lies where beta < 0, i.e. below the beta curve.
  for (const auto& pt : rep.curves[1].points) {
    ++rep.ordering.checked;
    if (!(region_detail::beta(pt.a, pt.coord) < 0.0)) rep.ordering.counterexamples.push_back(pt);
  }
  rep.a_c = critical_shape();
  for (int i = 0; i <= 45; ++i) {
    const double g = 0.5 + 0.1 * i;
    rep.a_g.emplace_back(g, find_a_g(g));
  }
  return rep;
}

}  // namespace dwell
