#pragma once

// Self-check suite behind `dwell verify`: algebraic identities, the a = 2
// positivity argument, the critical shape, hierarchy orderings on the
// reference runs and agreement with the finite-difference oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dwell/hierarchy.hpp"
#include "dwell/oracle.hpp"
#include "dwell/reference_tables.hpp"
#include "dwell/region.hpp"

namespace dwell {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  /// A demonstration that is supposed to fail; `passed` then means it did.
  bool expected_failure = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240229;
  std::size_t random_points = 10000;
  double x_max = 4.0;
  std::size_t intervals_per_panel = 2000;
  /// Extra shape for the u' sign demonstration outside the good region.
  double demo_shape = 0.3;
};

struct VerifySummary {
  std::vector<CheckOutcome> checks;
  [[nodiscard]] std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
  }
  [[nodiscard]] bool all_passed() const { return failures() == 0; }
};

namespace verify_detail {

/// (a, x) pairs: a log-uniform on [0.05, 20], x uniform on (0, 5].
inline std::vector<std::pair<double, double>> random_points(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> la(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> ux(0.0, 5.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) {
    double x = 0.0;
    while (x == 0.0) x = ux(rng);
    p = {std::exp(la(rng)), x};
  }
  return pts;
}

inline CheckOutcome at_most(std::string name, double measured, double limit, std::string detail = {}) {
  return {std::move(name), measured <= limit, false, measured, limit, std::move(detail)};
}

}  // namespace verify_detail

[[nodiscard]] inline VerifySummary run_verification(const VerifyOptions& opt = {}) {
  using verify_detail::at_most;
  VerifySummary out;
  auto& c = out.checks;
  const auto pts = verify_detail::random_points(opt.seed, opt.random_points);

  double r1 = 0.0, r2 = 0.0, r3 = 0.0, umin = std::numeric_limits<double>::infinity();
  for (const auto& [a, x] : pts) {
    r1 = std::max(r1, gamma_identity_residual(a, x));
    r2 = std::max(r2, tilde_gamma_identity_residual(a, x));
    if (std::abs(x - 1.0) > 1e-2) {
      const double t = region_detail::tilde_gamma(a, x * x);
      const double f = tilde_gamma_by_factorization(a, x);
      r3 = std::max(r3, std::abs(t - f) / std::max(std::abs(t), 1e-300));
    }
    umin = std::min(umin, u(a, x));
  }
  c.push_back(at_most("identity_gamma", r1, 1e-9, "max relative residual over random (a, x)"));
  c.push_back(at_most("identity_tilde_gamma", r2, 1e-9, "max relative residual over random (a, x)"));
  c.push_back(at_most("tilde_gamma_table_vs_factorization", r3, 1e-8, "max relative difference, |x-1| > 1e-2"));
  c.push_back({"u_positive", umin > 0.0, false, umin, 0.0, "min u over random (a, x)"});

  const auto pos = verify_a2_positivity();
  c.push_back({"a2_positivity", pos.passed(), false, pos.min_combined, 0.0,
               std::to_string(pos.combined_failures + pos.bound_failures) + " failing nodes of " +
                   std::to_string(pos.nodes)});

  double rel = 0.0, umax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= opt.random_points; ++i) {
    const double x = 10.0 * static_cast<double>(i) / static_cast<double>(opt.random_points);
    const double sp = u_prime_a2(x);
    const double gen = u_prime(2.0, x);
    rel = std::max(rel, std::abs(sp - gen) / std::abs(gen));
    umax = std::max(umax, sp);
  }
  c.push_back(at_most("a2_u_prime_forms_agree", rel, 1e-9, "specialized vs general u' on (0, 10]"));
  c.push_back({"a2_u_prime_negative", umax < 0.0, false, umax, 0.0, "max u'(x; 2) on (0, 10]"});

  const auto& ac = critical_shape();
  c.push_back({"critical_shape", ac.value >= 0.654 && ac.value <= 0.674 && ac.width <= 1e-3, false, ac.value, 0.664,
               "bisection width " + std::to_string(ac.width)});
  const auto inside = sup_u_prime(1.0);
  c.push_back({"u_prime_negative_at_a1", inside.value < 0.0, false, inside.value, 0.0, "sup u'(x; 1) on (0, 5]"});
  const auto outside = sup_u_prime(opt.demo_shape);
  c.push_back({"expected_failure_u_prime_at_a" + std::to_string(opt.demo_shape).substr(0, 3), outside.value > 0.0,
               true, outside.value, 0.0, "u' > 0 somewhere: shape lies outside the region a > a_c"});

  const auto grid = make_grid(opt.x_max, opt.intervals_per_panel);
  for (int tb = 1; tb <= 3; ++tb) {
    for (const auto& row : reference_table(tb)) {
      const PotentialParams p(row.g, row.a);
      const auto orc = oracle_ground_state(p);
      SolveOptions so;
      so.max_iter = 20;
      so.tol = 1e-9;
      so.checks.reference = ReferenceEnergy{orc.energy, orc.error_estimate};
      so.checks.max_order = 5;
      const auto rep = solve(p, grid, row.bc, so);
      const std::string tag = std::string(row.table) + "_" + std::string(row.label);
      c.push_back({"hierarchy_" + tag, rep.violations.empty(), false, static_cast<double>(rep.violations.size()), 0.0,
                   "violated hierarchy inequalities"});
      c.push_back(at_most("oracle_" + tag, std::abs(rep.final_energy() - orc.energy), 5e-4,
                          "|E_converged - E_oracle|"));
    }
  }
  return out;
}

}  // namespace dwell
