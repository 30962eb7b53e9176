#pragma once

// Composite quadrature on the two-panel grid and the two nested integrals
//
//   tail:   F(x) = int_x^inf dy / phi^2(y) int_y^inf h(z) phi^2(z) dz
//   origin: F(x) = int_0^x   dy / phi^2(y) int_0^y   h(z) phi^2(z) dz
//
// phi is supplied as a LogGridFunction. The inner integral is carried in
// units of phi^2 at the current outer node, J(y) = inner(y)/phi^2(y), and is
// advanced cell by cell:
//
//   J(y_{j+1}) = J(y_j) e^{2(L_j - L_{j+1})} + sum_k c_k h_k e^{2(L_k - L_{j+1})}
//
// (L = ln phi), so every exponential that appears compares phi at two nodes
// of the same cell and nothing overflows even when phi spans e^{+-300}.
//
// The per-cell rule reproduces the composite rule exactly when summed over a
// panel: for Simpson the two halves of each cell pair use
// h/12 (5, 8, -1) and h/12 (-1, 8, 5).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dwell/error.hpp"
#include "dwell/grid.hpp"

namespace dwell {

enum class RuleKind { simpson, trapezoid };

/// Folded exponents above this abort a nested integral.
inline constexpr double kFoldedExponentLimit = 30.0;

/// Composite rule on a Grid; one weight vector per panel.
class QuadratureRule {
 public:
  explicit QuadratureRule(GridPtr grid, RuleKind kind = RuleKind::simpson)
      : grid_(std::move(grid)), kind_(kind) {
    if (!grid_) throw GridError("QuadratureRule: null grid");
    inner_w_ = panel_weights(grid_->inner_intervals(), grid_->inner_step());
    outer_w_ = panel_weights(grid_->outer_intervals(), grid_->outer_step());
  }

  [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
  [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
  [[nodiscard]] RuleKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::span<const double> inner_weights() const noexcept { return inner_w_; }
  [[nodiscard]] std::span<const double> outer_weights() const noexcept { return outer_w_; }

  /// Node/weight pairs integrating exactly over cell [x_j, x_{j+1}].
  struct CellStencil {
    std::array<std::size_t, 3> node{};
    std::array<double, 3> weight{};
    std::size_t count = 0;
    bool inner_panel = true;
  };

  [[nodiscard]] CellStencil cell(std::size_t j) const {
    const Grid& g = *grid_;
    CellStencil st;
    st.inner_panel = j < g.knee();
    const std::size_t base = st.inner_panel ? 0 : g.knee();
    const double h = st.inner_panel ? g.inner_step() : g.outer_step();
    const std::size_t local = j - base;
    if (kind_ == RuleKind::trapezoid) {
      st.count = 2;
      st.node = {j, j + 1, 0};
      st.weight = {0.5 * h, 0.5 * h, 0.0};
      return st;
    }
    const std::size_t first = base + (local / 2) * 2;
    st.count = 3;
    st.node = {first, first + 1, first + 2};
    const double c = h / 12.0;
    if (local % 2 == 0) {
      st.weight = {5.0 * c, 8.0 * c, -c};
    } else {
      st.weight = {-c, 8.0 * c, 5.0 * c};
    }
    return st;
  }

  [[nodiscard]] std::size_t cell_count() const noexcept { return grid_->size() - 1; }

 private:
  std::vector<double> panel_weights(std::size_t n, double h) const {
    std::vector<double> w(n + 1, 0.0);
    if (kind_ == RuleKind::trapezoid) {
      std::fill(w.begin(), w.end(), h);
      w.front() = w.back() = 0.5 * h;
      return w;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      w[i] = (i == 0 || i == n) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    }
    return w;
  }

  GridPtr grid_;
  RuleKind kind_;
  std::vector<double> inner_w_;
  std::vector<double> outer_w_;
};

namespace detail {

inline void require_on_grid(const QuadratureRule& rule, std::size_t n, const char* what) {
  if (n != rule.grid().size()) {
    throw GridMismatchError(std::string(what) + ": " + std::to_string(n) + " samples for a grid of " +
                            std::to_string(rule.grid().size()) + " nodes");
  }
}

/// Sample of h at node k as seen from the panel of the current cell.
inline double panel_value(const GridSamples& h, std::size_t k, bool inner_panel, const Grid& g) {
  return (inner_panel && k == g.knee()) ? h.knee_left : h.values[k];
}

}  // namespace detail

/// Integral over [0, x_max]; fixed left-to-right summation order.
[[nodiscard]] inline double integrate(const QuadratureRule& rule, const GridSamples& f) {
  detail::require_on_grid(rule, f.values.size(), "integrate");
  const Grid& g = rule.grid();
  const auto wi = rule.inner_weights();
  const auto wo = rule.outer_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < wi.size(); ++i) sum += wi[i] * f.inner_at(i, g);
  for (std::size_t i = 0; i < wo.size(); ++i) sum += wo[i] * f.values[g.knee() + i];
  return sum;
}

/// Integral of a function continuous at the knee.
[[nodiscard]] inline double integrate(const QuadratureRule& rule, std::span<const double> f) {
  detail::require_on_grid(rule, f.size(), "integrate");
  const Grid& g = rule.grid();
  const auto wi = rule.inner_weights();
  const auto wo = rule.outer_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < wi.size(); ++i) sum += wi[i] * f[i];
  for (std::size_t i = 0; i < wo.size(); ++i) sum += wo[i] * f[g.knee() + i];
  return sum;
}

/// Running integral from 0 (prefix = true) or from x_max (prefix = false)
/// at every node of a function continuous at the knee.
[[nodiscard]] inline std::vector<double> cumulative(const QuadratureRule& rule, std::span<const double> f,
                                                    bool prefix = true) {
  detail::require_on_grid(rule, f.size(), "cumulative");
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  auto cell_integral = [&](std::size_t j) {
    const auto st = rule.cell(j);
    double s = 0.0;
    for (std::size_t k = 0; k < st.count; ++k) s += st.weight[k] * f[st.node[k]];
    return s;
  };
  if (prefix) {
    for (std::size_t j = 0; j + 1 < n; ++j) out[j + 1] = out[j] + cell_integral(j);
  } else {
    for (std::size_t j = n - 1; j-- > 0;) out[j] = out[j + 1] + cell_integral(j);
  }
  return out;
}

/// Asymptotic continuation beyond x_max for integrands decaying like phi^2.
///
/// For y >= x_max, phi^2 is modelled as phi^2(x_max) exp(-2 D (y - x_max))
/// inside the inner integral, with D = -(ln phi)'(x_max), which gives
///   int_{x_max}^inf h phi^2 ~ h(x_max) phi^2(x_max) / (2 D).
/// The outer tail int_{x_max}^inf J(y) dy is J(x_max) * outer_length with
/// outer_length = int_{x_max}^inf D(x_max)/D(y) dy supplied by the caller.
/// A default-constructed model truncates both integrals at x_max.
struct TailModel {
  double decay_rate = 0.0;
  double outer_length = 0.0;
  [[nodiscard]] bool enabled() const noexcept { return decay_rate > 0.0; }
};

struct NestedOptions {
  /// The integrand satisfies int_0^inf h phi^2 = 0 (up to rounding). The
  /// inner integral is then taken from whichever end avoids growth of
  /// 1/phi^2: from the origin up to the maximum of phi and from the far end
  /// beyond it, using int_0^y = -int_y^inf.
  bool balanced = false;
  TailModel tail{};
  /// Relative tolerance of the balance check.
  double balance_tolerance = 1e-8;
};

struct NestedIntegral {
  std::vector<double> values;          ///< F at every node.
  std::vector<double> inner_scaled;    ///< J = inner(y)/phi^2(y) at every node.
  double max_folded_exponent = -std::numeric_limits<double>::infinity();
  /// Largest 2(L_z - L_y) among nodes y past the maximum of phi.
  double max_folded_exponent_beyond_peak = -std::numeric_limits<double>::infinity();
  /// phi^2(x_max) sup|h| relative to |inner| at the maximum of phi.
  double truncation_ratio = 0.0;
  std::size_t peak_index = 0;
};

namespace detail {

enum class Side { origin, tail };

/// J values from the origin (prefix) for nodes [0, stop]. Tracks folded
/// exponents 2(max_{z<=y} L_z - L_y).
inline void prefix_scaled(const QuadratureRule& rule, std::span<const double> L, const GridSamples& h,
                          std::size_t stop, std::vector<double>& J, NestedIntegral& res) {
  const Grid& g = rule.grid();
  J[0] = 0.0;
  double run_max = L[0];
  for (std::size_t j = 0; j < stop; ++j) {
    const auto st = rule.cell(j);
    const std::size_t y = j + 1;
    double acc = J[j] * std::exp(2.0 * (L[j] - L[y]));
    for (std::size_t k = 0; k < st.count; ++k) {
      const std::size_t z = st.node[k];
      run_max = std::max(run_max, L[z]);
      acc += st.weight[k] * panel_value(h, z, st.inner_panel, g) * std::exp(2.0 * (L[z] - L[y]));
    }
    const double folded = 2.0 * (run_max - L[y]);
    res.max_folded_exponent = std::max(res.max_folded_exponent, folded);
    if (y > res.peak_index) res.max_folded_exponent_beyond_peak = std::max(res.max_folded_exponent_beyond_peak, folded);
    if (folded > kFoldedExponentLimit) {
      throw OverflowGuardError("nested integral: folded exponent " + std::to_string(folded) + " at x = " +
                               std::to_string(g[y]) + " exceeds " + std::to_string(kFoldedExponentLimit) +
                               "; check grid truncation or integrand balance");
    }
    J[y] = acc;
  }
}

/// J values from x_max (suffix) for nodes [start, n-1].
inline void suffix_scaled(const QuadratureRule& rule, std::span<const double> L, const GridSamples& h,
                          std::size_t start, const TailModel& tail, std::vector<double>& J, NestedIntegral& res) {
  const Grid& g = rule.grid();
  const std::size_t last = g.size() - 1;
  J[last] = tail.enabled() ? h.values[last] / (2.0 * tail.decay_rate) : 0.0;
  double run_max = L[last];
  for (std::size_t j = last; j-- > start;) {
    const auto st = rule.cell(j);
    const std::size_t y = j;
    double acc = J[j + 1] * std::exp(2.0 * (L[j + 1] - L[y]));
    for (std::size_t k = 0; k < st.count; ++k) {
      const std::size_t z = st.node[k];
      run_max = std::max(run_max, L[z]);
      acc += st.weight[k] * panel_value(h, z, st.inner_panel, g) * std::exp(2.0 * (L[z] - L[y]));
    }
    const double folded = 2.0 * (run_max - L[y]);
    res.max_folded_exponent = std::max(res.max_folded_exponent, folded);
    if (y > res.peak_index) res.max_folded_exponent_beyond_peak = std::max(res.max_folded_exponent_beyond_peak, folded);
    if (folded > kFoldedExponentLimit) {
      throw OverflowGuardError("nested integral: folded exponent " + std::to_string(folded) + " at x = " +
                               std::to_string(g[y]) + " exceeds " + std::to_string(kFoldedExponentLimit) +
                               "; check grid truncation or integrand balance");
    }
    J[y] = acc;
  }
}

inline NestedIntegral nested(const LogGridFunction& phi, const QuadratureRule& rule, const GridSamples& h,
                             const NestedOptions& opt, Side side) {
  const Grid& g = rule.grid();
  if (!same_grid(phi.grid(), g)) throw GridMismatchError("nested integral: phi lives on a different grid");
  require_on_grid(rule, h.values.size(), "nested integral");
  if (!phi.all_positive()) throw NumericalError("nested integral: phi must be positive at every node");

  const auto L = phi.log_mag();
  const std::size_t n = g.size();
  NestedIntegral res;
  res.peak_index = static_cast<std::size_t>(std::max_element(L.begin(), L.end()) - L.begin());
  const std::size_t peak = res.peak_index;

  std::vector<double> J(n, 0.0);
  if (!opt.balanced) {
    if (side == Side::origin) {
      prefix_scaled(rule, L, h, n - 1, J, res);
    } else {
      suffix_scaled(rule, L, h, 0, opt.tail, J, res);
    }
  } else {
    // Balance check in units of phi^2 at the peak.
    double total = 0.0;
    double total_abs = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const auto st = rule.cell(j);
      for (std::size_t k = 0; k < st.count; ++k) {
        const std::size_t z = st.node[k];
        const double t = st.weight[k] * panel_value(h, z, st.inner_panel, g) * std::exp(2.0 * (L[z] - L[peak]));
        total += t;
        total_abs += std::abs(t);
      }
    }
    if (std::abs(total) > opt.balance_tolerance * total_abs) {
      throw NumericalError("nested integral: integrand declared balanced but int h phi^2 = " +
                           std::to_string(total) + " (scale " + std::to_string(total_abs) + ")");
    }
    std::vector<double> Jp(n, 0.0);
    std::vector<double> Js(n, 0.0);
    prefix_scaled(rule, L, h, peak, Jp, res);
    suffix_scaled(rule, L, h, peak, opt.tail, Js, res);
    for (std::size_t i = 0; i < n; ++i) {
      if (side == Side::origin) {
        J[i] = i <= peak ? Jp[i] : -Js[i];
      } else {
        J[i] = i <= peak ? -Jp[i] : Js[i];
      }
    }
  }

  // Diagnostic: neglected tail against the inner integral at the peak.
  double sup_h = std::abs(h.knee_left);
  for (double v : h.values) sup_h = std::max(sup_h, std::abs(v));
  const double bound = std::exp(2.0 * (L[n - 1] - L[peak])) * sup_h;
  const double at_peak = std::abs(J[peak]);
  res.truncation_ratio = bound == 0.0 ? 0.0 : (at_peak == 0.0 ? std::numeric_limits<double>::infinity() : bound / at_peak);

  if (side == Side::origin) {
    res.values = cumulative(rule, J, true);
  } else {
    res.values = cumulative(rule, J, false);
    if (opt.tail.enabled()) {
      const double extra = J[n - 1] * opt.tail.outer_length;
      for (auto& v : res.values) v += extra;
    }
  }
  res.inner_scaled = std::move(J);
  return res;
}

}  // namespace detail

/// F(x) = int_x^inf dy/phi^2(y) int_y^inf h phi^2 dz, truncated at x_max
/// unless a TailModel is supplied.
[[nodiscard]] inline NestedIntegral nested_tail(const LogGridFunction& phi, const QuadratureRule& rule,
                                                const GridSamples& h, const NestedOptions& opt = {}) {
  return detail::nested(phi, rule, h, opt, detail::Side::tail);
}

/// F(x) = int_0^x dy/phi^2(y) int_0^y h phi^2 dz. F(0) = 0 exactly.
[[nodiscard]] inline NestedIntegral nested_origin(const LogGridFunction& phi, const QuadratureRule& rule,
                                                  const GridSamples& h, const NestedOptions& opt = {}) {
  return detail::nested(phi, rule, h, opt, detail::Side::origin);
}

}  // namespace dwell
