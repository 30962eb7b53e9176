#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dwell/error.hpp"

namespace dwell {

/// Two-panel grid on [0, x_max]: uniform on [0,1] and uniform on [1, x_max].
///
/// x = 1 is always a node (the knee) so that the jump of ghat never falls
/// inside a quadrature cell.
class Grid {
 public:
  /// `intervals_per_panel` cells on each panel; must be even and >= 2.
  Grid(double x_max, std::size_t intervals_per_panel)
      : Grid(x_max, intervals_per_panel, intervals_per_panel) {}

  Grid(double x_max, std::size_t inner_intervals, std::size_t outer_intervals)
      : x_max_(x_max), inner_(inner_intervals), outer_(outer_intervals) {
    if (!(x_max > 1.0) || !std::isfinite(x_max)) {
      throw GridError("grid: x_max must be finite and > 1, got " + std::to_string(x_max));
    }
    if (inner_ < 2 || outer_ < 2 || inner_ % 2 != 0 || outer_ % 2 != 0) {
      throw GridError("grid: interval counts per panel must be even and >= 2 (got " +
                      std::to_string(inner_) + ", " + std::to_string(outer_) + ")");
    }
    nodes_.reserve(inner_ + outer_ + 1);
    const double h0 = inner_step();
    for (std::size_t i = 0; i < inner_; ++i) nodes_.push_back(static_cast<double>(i) * h0);
    const double h1 = outer_step();
    for (std::size_t j = 0; j < outer_; ++j) nodes_.push_back(1.0 + static_cast<double>(j) * h1);
    nodes_.push_back(x_max_);
  }

  [[nodiscard]] double x_max() const noexcept { return x_max_; }
  [[nodiscard]] std::size_t inner_intervals() const noexcept { return inner_; }
  [[nodiscard]] std::size_t outer_intervals() const noexcept { return outer_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  /// Index of the node x = 1.
  [[nodiscard]] std::size_t knee() const noexcept { return inner_; }
  [[nodiscard]] double inner_step() const noexcept { return 1.0 / static_cast<double>(inner_); }
  [[nodiscard]] double outer_step() const noexcept {
    return (x_max_ - 1.0) / static_cast<double>(outer_);
  }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return nodes_[i]; }

  friend bool operator==(const Grid& l, const Grid& r) noexcept {
    return l.x_max_ == r.x_max_ && l.inner_ == r.inner_ && l.outer_ == r.outer_;
  }

 private:
  double x_max_;
  std::size_t inner_;
  std::size_t outer_;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

[[nodiscard]] inline GridPtr make_grid(double x_max, std::size_t intervals_per_panel) {
  return std::make_shared<const Grid>(x_max, intervals_per_panel);
}

/// Node samples of a function that may jump at the knee.
///
/// `values[grid.knee()]` is the right limit; `knee_left` the left limit.
/// For continuous functions the two coincide.
struct GridSamples {
  std::vector<double> values;
  double knee_left = 0.0;

  [[nodiscard]] static GridSamples continuous(std::vector<double> v, const Grid& grid) {
    if (v.size() != grid.size()) {
      throw GridMismatchError("samples have " + std::to_string(v.size()) + " values, grid has " +
                              std::to_string(grid.size()) + " nodes");
    }
    const double left = v[grid.knee()];
    return GridSamples{std::move(v), left};
  }

  /// Value at node i as seen from the inner panel (i <= knee).
  [[nodiscard]] double inner_at(std::size_t i, const Grid& grid) const {
    return i == grid.knee() ? knee_left : values[i];
  }
};

/// A sign/log-magnitude representation of a function on a grid.
///
/// Stores ln|f| and sign(f) per node so that functions spanning hundreds of
/// orders of magnitude (exp(-g S0) for large g and x) stay representable.
/// Ratios are taken as differences of logs, never as quotients of
/// exponentials.
class LogGridFunction {
 public:
  LogGridFunction(GridPtr grid, std::vector<double> log_mag, std::vector<std::int8_t> sign)
      : grid_(std::move(grid)), log_mag_(std::move(log_mag)), sign_(std::move(sign)) {
    if (!grid_) throw GridError("LogGridFunction: null grid");
    if (log_mag_.size() != grid_->size() || sign_.size() != grid_->size()) {
      throw GridMismatchError("LogGridFunction: sample count does not match grid");
    }
  }

  /// All-positive function from its logarithm.
  [[nodiscard]] static LogGridFunction positive(GridPtr grid, std::vector<double> log_mag) {
    std::vector<std::int8_t> sign(log_mag.size(), 1);
    return LogGridFunction(std::move(grid), std::move(log_mag), std::move(sign));
  }

  [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
  [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> log_mag() const noexcept { return log_mag_; }
  [[nodiscard]] std::span<const std::int8_t> sign() const noexcept { return sign_; }
  [[nodiscard]] std::size_t size() const noexcept { return log_mag_.size(); }

  [[nodiscard]] double value(std::size_t i) const {
    return sign_[i] == 0 ? 0.0 : static_cast<double>(sign_[i]) * std::exp(log_mag_[i]);
  }

  /// f(z)/f(y) with a single exponential.
  [[nodiscard]] double ratio(std::size_t z, std::size_t y) const {
    if (sign_[y] == 0) throw NumericalError("LogGridFunction::ratio: zero denominator");
    if (sign_[z] == 0) return 0.0;
    return static_cast<double>(sign_[z] * sign_[y]) * std::exp(log_mag_[z] - log_mag_[y]);
  }

  [[nodiscard]] bool all_positive() const noexcept {
    for (auto s : sign_) {
      if (s != 1) return false;
    }
    return true;
  }

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = value(i);
    return out;
  }

  /// Copy with every log-magnitude shifted by `offset` (scales by e^offset).
  [[nodiscard]] LogGridFunction shifted(double offset) const {
    auto lm = log_mag_;
    for (auto& v : lm) v += offset;
    return LogGridFunction(grid_, std::move(lm), sign_);
  }

 private:
  GridPtr grid_;
  std::vector<double> log_mag_;
  std::vector<std::int8_t> sign_;
};

[[nodiscard]] inline bool same_grid(const Grid& l, const Grid& r) noexcept { return &l == &r || l == r; }

}  // namespace dwell
