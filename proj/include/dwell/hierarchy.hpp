#pragma once

// Iteration for the ground state of -1/2 psi'' + V psi = E psi.
//
// Writing psi = phi f and calE = g e0 - E, the iteration is
//
//   calE_n = int w phi^2 f_{n-1} / int phi^2 f_{n-1}
//   -1/2 (phi^2 f_n')' = (w - calE_n) phi^2 f_{n-1}
//
// normalized either by f_n(inf) = 1 or by f_n(0) = 1, starting from f_0 = 1.
// With w > 0 and w' < 0 the first normalization gives energies decreasing
// to E from above; the second gives odd iterates above E and even iterates
// below it. check_hierarchy() verifies these orderings on a finished run.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dwell/error.hpp"
#include "dwell/grid.hpp"
#include "dwell/params.hpp"
#include "dwell/quadrature.hpp"
#include "dwell/region.hpp"
#include "dwell/trial.hpp"

namespace dwell {

enum class BoundaryCondition {
  unit_at_infinity,   ///< "I":  f_n(inf) = 1, upper bounds
  unit_at_origin,     ///< "II": f_n(0) = 1, alternating bounds
};

[[nodiscard]] inline std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::unit_at_infinity ? "I" : "II";
}

[[nodiscard]] inline BoundaryCondition parse_boundary_condition(const std::string& s) {
  if (s == "I" || s == "i" || s == "1") return BoundaryCondition::unit_at_infinity;
  if (s == "II" || s == "ii" || s == "2") return BoundaryCondition::unit_at_origin;
  throw ParameterError("boundary condition must be I or II, got '" + s + "'");
}

/// One completed step of the iteration.
struct IterationState {
  std::size_t n = 0;
  std::vector<double> f;
  double curly_e = 0.0;   ///< calE_n (energy defect)
  double energy = 0.0;    ///< E_n = g e0 - calE_n
};

/// Everything check_hierarchy needs: the energy defects and every iterate.
struct HierarchyLedger {
  BoundaryCondition bc = BoundaryCondition::unit_at_origin;
  double leading_energy = 0.0;                 ///< g e0
  std::vector<double> nodes;
  std::vector<double> curly_e;                 ///< calE_1 .. calE_n
  std::vector<std::vector<double>> f;          ///< f_0 .. f_n
};

struct Violation {
  std::string check;
  std::size_t n = 0;       ///< iteration index the inequality refers to
  double slack = 0.0;      ///< signed margin; negative beyond tolerance = violated
  std::string detail;
};

struct ReferenceEnergy {
  double value = 0.0;
  double uncertainty = 0.0;
};

struct HierarchyCheckOptions {
  /// Inequalities count as violated only below -tolerance.
  double tolerance = 1e-9;
  /// Exact energy to bracket against, if known.
  std::optional<ReferenceEnergy> reference;
  /// Only iterates n <= max_order enter the bracketing checks.
  std::size_t max_order = std::numeric_limits<std::size_t>::max();
};

/// Summary of one family of inequalities.
struct CheckRecord {
  std::string check;
  std::size_t evaluated = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  [[nodiscard]] bool passed(double tolerance) const noexcept { return worst_slack >= -tolerance; }
};

struct HierarchyCheckResult {
  std::vector<CheckRecord> records;
  std::vector<Violation> violations;
};

namespace hierarchy_detail {

class Recorder {
 public:
  explicit Recorder(double tol) : tol_(tol) {}

  void add(const std::string& check, std::size_t n, double slack, const std::string& detail = {}) {
    auto it = std::find_if(out_.records.begin(), out_.records.end(), [&](const CheckRecord& r) { return r.check == check; });
    if (it == out_.records.end()) {
      out_.records.push_back({check, 0, std::numeric_limits<double>::infinity()});
      it = std::prev(out_.records.end());
    }
    ++it->evaluated;
    it->worst_slack = std::min(it->worst_slack, slack);
    if (slack < -tol_) out_.violations.push_back({check, n, slack, detail});
  }

  HierarchyCheckResult take() { return std::move(out_); }

 private:
  double tol_;
  HierarchyCheckResult out_;
};

/// min over nodes of sign * d/dx (f_{n+1}/f_n); >= 0 when the ratio moves
/// in the expected direction.
inline double ratio_slope_slack(std::span<const double> x, std::span<const double> num, std::span<const double> den,
                                double sign) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double r0 = num[i] / den[i];
    const double r1 = num[i + 1] / den[i + 1];
    worst = std::min(worst, sign * (r1 - r0) / (x[i + 1] - x[i]));
  }
  return worst;
}

}  // namespace hierarchy_detail

/// Evaluates every ordering the iteration is expected to satisfy.
[[nodiscard]] inline HierarchyCheckResult check_hierarchy_detailed(const HierarchyLedger& ledger,
                                                                   const HierarchyCheckOptions& opt = {}) {
  hierarchy_detail::Recorder rec(opt.tolerance);
  const auto& ce = ledger.curly_e;   // ce[k] = calE_{k+1}
  const std::size_t count = ce.size();
  auto curly = [&](std::size_t n) { return ce[n - 1]; };

  if (ledger.bc == BoundaryCondition::unit_at_infinity) {
    for (std::size_t n = 1; n < count; ++n) {
      rec.add("energy_increasing", n, curly(n + 1) - curly(n), "calE_{n+1} > calE_n");
    }
    for (std::size_t n = 1; n < ledger.f.size(); ++n) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < ledger.nodes.size(); ++i) worst = std::min(worst, ledger.f[n][i] - ledger.f[n - 1][i]);
      rec.add("iterate_increasing", n, worst, "f_n > f_{n-1} nodewise");
    }
    for (std::size_t n = 0; n + 1 < ledger.f.size(); ++n) {
      rec.add("ratio_decreasing", n,
              hierarchy_detail::ratio_slope_slack(ledger.nodes, ledger.f[n + 1], ledger.f[n], -1.0),
              "d/dx (f_{n+1}/f_n) < 0");
    }
  } else {
    for (std::size_t n = 1; n + 2 <= count; n += 2) {
      rec.add("odd_energy_increasing", n, curly(n + 2) - curly(n), "calE_{n+2} > calE_n, n odd");
    }
    for (std::size_t n = 2; n + 2 <= count; n += 2) {
      rec.add("even_energy_decreasing", n, curly(n) - curly(n + 2), "calE_n > calE_{n+2}, n even");
    }
    for (std::size_t m = 2; m <= count; m += 2) {
      for (std::size_t l = 1; l <= count; l += 2) {
        rec.add("even_above_odd", m, curly(m) - curly(l), "calE_even > calE_odd (odd index " + std::to_string(l) + ")");
      }
    }
    for (std::size_t n = 0; n + 1 < ledger.f.size(); ++n) {
      const bool even = n % 2 == 0;
      rec.add(even ? "ratio_decreasing_even" : "ratio_increasing_odd", n,
              hierarchy_detail::ratio_slope_slack(ledger.nodes, ledger.f[n + 1], ledger.f[n], even ? -1.0 : 1.0),
              even ? "d/dx (f_{n+1}/f_n) < 0, n even" : "d/dx (f_{n+1}/f_n) > 0, n odd");
    }
  }

  if (opt.reference) {
    const double ref_curly = ledger.leading_energy - opt.reference->value;
    const double band = opt.reference->uncertainty;
    for (std::size_t n = 1; n <= count && n <= opt.max_order; ++n) {
      const bool upper = ledger.bc == BoundaryCondition::unit_at_infinity || n % 2 == 1;
      // upper: E_n > E  <=>  calE_n < calE_ref
      const double slack = (upper ? ref_curly - curly(n) : curly(n) - ref_curly) + band;
      rec.add(upper ? "energy_upper_bound" : "energy_lower_bound", n, slack,
              upper ? "E_n > E" : "E_n < E");
    }
  }
  return rec.take();
}

[[nodiscard]] inline std::vector<Violation> check_hierarchy(const HierarchyLedger& ledger,
                                                            const HierarchyCheckOptions& opt = {}) {
  return check_hierarchy_detailed(ledger, opt).violations;
}

namespace hierarchy_detail {

inline std::vector<double> phi_squared(const TrialFunction& t) {
  const auto L = t.phi().log_mag();
  std::vector<double> p(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) p[i] = std::exp(2.0 * L[i]);
  return p;
}

}  // namespace hierarchy_detail

/// calE_n = int w phi^2 f_prev / int phi^2 f_prev.
[[nodiscard]] inline double energy_step(const TrialFunction& t, const QuadratureRule& rule, const GridSamples& w,
                                        std::span<const double> f_prev) {
  const Grid& g = rule.grid();
  if (!same_grid(t.grid(), g)) throw GridMismatchError("energy_step: trial and rule use different grids");
  detail::require_on_grid(rule, f_prev.size(), "energy_step");
  detail::require_on_grid(rule, w.values.size(), "energy_step");
  const auto p2 = hierarchy_detail::phi_squared(t);
  GridSamples num;
  num.values.resize(g.size());
  std::vector<double> den(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    den[i] = p2[i] * f_prev[i];
    num.values[i] = w.values[i] * den[i];
  }
  num.knee_left = w.knee_left * den[g.knee()];
  const double d = integrate(rule, den);
  if (!(d > 0.0)) {
    throw DegenerateDenominatorError("energy_step: int phi^2 f_{n-1} = " + std::to_string(d) + " is not positive");
  }
  return integrate(rule, num) / d;
}

struct StepOptions {
  /// Continue the integrals past x_max with the trial function's asymptotics.
  bool asymptotic_tail = true;
  /// Largest accepted truncation_ratio of the nested integral.
  double truncation_limit = 1e-10;
};

/// f_n = 1 - 2 F, F the nested integral of h = (w - calE_n) f_{n-1} anchored
/// at infinity (I) or at the origin (II).
[[nodiscard]] inline std::vector<double> f_step(const TrialFunction& t, const QuadratureRule& rule,
                                                const GridSamples& w, double curly_e, std::span<const double> f_prev,
                                                BoundaryCondition bc, const StepOptions& opt = {}) {
  const Grid& g = rule.grid();
  detail::require_on_grid(rule, f_prev.size(), "f_step");
  GridSamples h;
  h.values.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) h.values[i] = (w.values[i] - curly_e) * f_prev[i];
  h.knee_left = (w.knee_left - curly_e) * f_prev[g.knee()];

  NestedOptions nopt;
  nopt.balanced = true;
  if (opt.asymptotic_tail) nopt.tail = t.tail_model();
  const auto F = bc == BoundaryCondition::unit_at_infinity ? nested_tail(t.phi(), rule, h, nopt)
                                                           : nested_origin(t.phi(), rule, h, nopt);
  if (F.truncation_ratio > opt.truncation_limit) {
    throw TruncationError("f_step: neglected tail beyond x_max is " + std::to_string(F.truncation_ratio) +
                          " of the inner integral at the peak; increase x_max");
  }
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = 1.0 - 2.0 * F.values[i];
    if (!(f[i] > 0.0)) {
      throw PositivityLossError("f_step: iterate is " + std::to_string(f[i]) + " at x = " + std::to_string(g[i]) +
                                "; the iteration left its domain of validity");
    }
  }
  return f;
}

struct SolveOptions {
  std::size_t max_iter = 20;
  /// Stop once |E_n - E_{n-1}| < tol. tol = 0 runs exactly max_iter steps.
  double tol = 1e-6;
  StepOptions step{};
  HierarchyCheckOptions checks{};
};

struct SolveReport {
  PotentialParams params;
  BoundaryCondition bc;
  GridPtr grid;
  std::vector<double> energies;      ///< E_0 = g e0, E_1, ..., E_n
  std::vector<double> curly_e;       ///< calE_1 .. calE_n
  std::vector<double> psi0;          ///< trial wavefunction, psi0(0) = 1
  HierarchyLedger ledger;            ///< every f_n
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<CheckRecord> checks;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  [[nodiscard]] const std::vector<double>& f(std::size_t n) const { return ledger.f.at(n); }
  [[nodiscard]] const std::vector<double>& f_final() const { return ledger.f.back(); }
  /// psi_n = psi0 f_n.
  [[nodiscard]] std::vector<double> psi(std::size_t n) const {
    const auto& fn = ledger.f.at(n);
    std::vector<double> out(fn.size());
    for (std::size_t i = 0; i < fn.size(); ++i) out[i] = psi0[i] * fn[i];
    return out;
  }
  [[nodiscard]] std::vector<double> psi_final() const { return psi(iterations); }
  [[nodiscard]] double final_energy() const { return energies.back(); }
};

/// Runs the iteration from f_0 = 1.
[[nodiscard]] inline SolveReport solve(const PotentialParams& p, const GridPtr& grid, BoundaryCondition bc,
                                       const SolveOptions& opt = {}) {
  p.require_positive_gamma();
  if (opt.max_iter == 0) throw ParameterError("solve: max_iter must be >= 1");
  const auto trial = build_trial(p, grid);
  const QuadratureRule rule(grid);
  const auto w = sample_w(trial);
  const Grid& g = *grid;

  SolveReport rep{p, bc, grid, {}, {}, trial.psi0().values(), {}, false, 0, {}, {}, {}};
  rep.ledger.bc = bc;
  rep.ledger.leading_energy = p.leading_energy();
  rep.ledger.nodes.assign(g.nodes().begin(), g.nodes().end());
  rep.ledger.f.emplace_back(g.size(), 1.0);
  rep.energies.push_back(p.leading_energy());

  const auto& ac = critical_shape();
  if (p.a() <= ac.hi) {
    rep.warnings.push_back("a = " + std::to_string(p.a()) + " is not above the critical shape a_c = " +
                           std::to_string(ac.value) + "; u' < 0 is not guaranteed and monotone convergence may fail");
  }

  for (std::size_t n = 1; n <= opt.max_iter; ++n) {
    const auto& prev = rep.ledger.f.back();
    const double ce = energy_step(trial, rule, w, prev);
    auto next = f_step(trial, rule, w, ce, prev, bc, opt.step);
    rep.curly_e.push_back(ce);
    rep.ledger.curly_e.push_back(ce);
    rep.energies.push_back(p.leading_energy() - ce);
    rep.ledger.f.push_back(std::move(next));
    rep.iterations = n;
    const double change = std::abs(rep.energies[n] - rep.energies[n - 1]);
    if (change < opt.tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged && opt.tol > 0.0) {
    rep.warnings.push_back("no convergence to tol " + std::to_string(opt.tol) + " within " +
                           std::to_string(opt.max_iter) + " iterations");
  }
  auto checked = check_hierarchy_detailed(rep.ledger, opt.checks);
  rep.checks = std::move(checked.records);
  rep.violations = std::move(checked.violations);
  return rep;
}

}  // namespace dwell
