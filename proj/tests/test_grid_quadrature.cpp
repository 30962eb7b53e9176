#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dwell/hierarchy.hpp"
#include "dwell/quadrature.hpp"
#include "dwell/trial.hpp"
#include "test_support.hpp"

using namespace dwell;
using dwell::testing::rel_diff;

namespace {

std::vector<double> sample(const Grid& g, double (*f)(double)) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
  return v;
}

LogGridFunction constant_phi(const GridPtr& g) { return LogGridFunction::positive(g, std::vector<double>(g->size(), 0.0)); }

GridSamples constant_h(const Grid& g, double c) { return GridSamples::continuous(std::vector<double>(g.size(), c), g); }

}  // namespace

TEST(Grid, Layout) {
  const Grid g(4.0, 100, 60);
  EXPECT_EQ(g.size(), 161u);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[g.knee()], 1.0);
  EXPECT_EQ(g[g.size() - 1], 4.0);
  for (std::size_t i = 1; i < g.knee(); ++i) EXPECT_NEAR(g[i] - g[i - 1], 0.01, 1e-15);
  for (std::size_t i = g.knee() + 1; i < g.size(); ++i) EXPECT_NEAR(g[i] - g[i - 1], 0.05, 1e-14);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(Grid, RejectsBadConfiguration) {
  EXPECT_THROW(Grid(1.0, 10), GridError);
  EXPECT_THROW(Grid(0.5, 10), GridError);
  EXPECT_THROW(Grid(4.0, 11), GridError);
  EXPECT_THROW(Grid(4.0, 0), GridError);
  EXPECT_THROW(Grid(INFINITY, 10), GridError);
}

TEST(LogGridFunction, RatioUsesOneExponential) {
  const auto g = make_grid(4.0, 10);
  std::vector<double> L(g->size());
  for (std::size_t i = 0; i < L.size(); ++i) L[i] = -800.0 * (*g)[i];
  const auto f = LogGridFunction::positive(g, L);
  // both values underflow, their ratio does not
  EXPECT_EQ(f.value(g->size() - 1), 0.0);
  EXPECT_NEAR(f.ratio(g->size() - 1, g->size() - 2), std::exp(-800.0 * 0.3), 1e-110);
  EXPECT_TRUE(f.all_positive());
  EXPECT_THROW(LogGridFunction::positive(g, std::vector<double>(3, 0.0)), GridMismatchError);
}

TEST(Quadrature, WeightsSumToPanelLength) {
  for (auto kind : {RuleKind::simpson, RuleKind::trapezoid}) {
    const QuadratureRule r(std::make_shared<const Grid>(4.0, 40, 18), kind);
    double si = 0, so = 0;
    for (double w : r.inner_weights()) si += w;
    for (double w : r.outer_weights()) so += w;
    EXPECT_NEAR(si, 1.0, 1e-14);
    EXPECT_NEAR(so, 3.0, 1e-14);
  }
}

TEST(Quadrature, SimpsonExactOnCubics) {
  const auto g = make_grid(2.0, 8);
  const QuadratureRule r(g);
  // x^3 on [0, 1], zero beyond: the jump sits on the knee
  GridSamples f;
  f.values.assign(g->size(), 0.0);
  for (std::size_t i = 0; i < g->knee(); ++i) f.values[i] = std::pow((*g)[i], 3);
  f.knee_left = 1.0;
  EXPECT_NEAR(integrate(r, f), 0.25, 1e-15);
  const auto cubic = sample(*g, [](double x) { return 2 * x * x * x - x + 3; });
  EXPECT_NEAR(integrate(r, cubic), 8.0 - 2.0 + 6.0, 1e-13);
}

TEST(Quadrature, Constant) {
  const auto g = make_grid(4.0, 50);
  EXPECT_NEAR(integrate(QuadratureRule(g), std::vector<double>(g->size(), 1.0)), 4.0, 1e-14);
  EXPECT_NEAR(integrate(QuadratureRule(g, RuleKind::trapezoid), std::vector<double>(g->size(), 1.0)), 4.0, 1e-14);
}

TEST(Quadrature, Gaussian) {
  const auto g = make_grid(4.0, 2000);
  const double got = integrate(QuadratureRule(g), sample(*g, [](double x) { return std::exp(-x * x); }));
  // int_0^4 e^{-x^2} = sqrt(pi)/2 erf(4)
  EXPECT_NEAR(got, std::sqrt(std::numbers::pi) / 2 * std::erf(4.0), 1e-12);
  EXPECT_NEAR(got, std::sqrt(std::numbers::pi) / 2, 2e-8);
}

TEST(Quadrature, TrapezoidExactOnLinear) {
  const auto g = make_grid(3.0, 6);
  EXPECT_NEAR(integrate(QuadratureRule(g, RuleKind::trapezoid), sample(*g, [](double x) { return 5 * x - 1; })),
              22.5 - 3.0, 1e-13);
}

TEST(Quadrature, SizeMismatch) {
  const auto g = make_grid(4.0, 10);
  const QuadratureRule r(g);
  EXPECT_THROW((void)integrate(r, std::vector<double>(5, 1.0)), GridMismatchError);
  EXPECT_THROW((void)cumulative(r, std::vector<double>(5, 1.0)), GridMismatchError);
  const auto other = make_grid(5.0, 10);
  EXPECT_THROW((void)nested_origin(constant_phi(other), r, constant_h(*g, 1.0)), GridMismatchError);
}

TEST(Quadrature, CumulativeEndsAgreeWithTotal) {
  const auto g = make_grid(4.0, 100);
  const QuadratureRule r(g);
  const auto f = sample(*g, [](double x) { return std::sin(x) + x * x; });
  const auto pre = cumulative(r, f, true);
  const auto suf = cumulative(r, f, false);
  const double total = integrate(r, f);
  EXPECT_NEAR(pre.back(), total, 1e-13);
  EXPECT_NEAR(suf.front(), total, 1e-13);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(pre[i] + suf[i], total, 1e-13);
}

TEST(Nested, ZeroIntegrand) {
  const auto g = make_grid(4.0, 20);
  const QuadratureRule r(g);
  for (const auto& F : {nested_tail(constant_phi(g), r, constant_h(*g, 0.0)),
                        nested_origin(constant_phi(g), r, constant_h(*g, 0.0))}) {
    for (double v : F.values) EXPECT_EQ(v, 0.0);
  }
}

TEST(Nested, ConstantIntegrandWithUnitPhi) {
  const auto g = make_grid(4.0, 20);
  const QuadratureRule r(g);
  const double c = 1.7;
  const auto tail = nested_tail(constant_phi(g), r, constant_h(*g, c));
  const auto origin = nested_origin(constant_phi(g), r, constant_h(*g, c));
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = (*g)[i];
    EXPECT_NEAR(tail.values[i], c * (4.0 - x) * (4.0 - x) / 2, 1e-13);
    EXPECT_NEAR(origin.values[i], c * x * x / 2, 1e-13);
  }
  EXPECT_EQ(origin.values[0], 0.0);
  EXPECT_EQ(tail.values.back(), 0.0);
}

TEST(Nested, AgreesWithNaiveDoubleLoop) {
  const auto g = std::make_shared<const Grid>(2.5, 100, 98);   // 199 nodes
  ASSERT_LT(g->size(), 201u);
  const QuadratureRule r(g);
  const auto t = build_trial(PotentialParams(1.0, 2.0), g);
  const auto& phi = t.phi();
  const auto h = GridSamples::continuous(sample(*g, [](double x) { return std::cos(3 * x) + 0.2; }), *g);
  const std::size_t n = g->size();

  // inner(y_j) by summing every cell of [y_j, x_max] afresh, then the outer integral.
  std::vector<double> J_tail(n, 0.0), J_origin(n, 0.0);
  for (std::size_t y = 0; y < n; ++y) {
    double s_tail = 0.0, s_origin = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const auto st = r.cell(j);
      for (std::size_t k = 0; k < st.count; ++k) {
        const std::size_t z = st.node[k];
        const double hz = detail::panel_value(h, z, st.inner_panel, *g);
        const double term = st.weight[k] * hz * std::exp(phi.log_mag()[z] * 2 - phi.log_mag()[y] * 2);
        (j >= y ? s_tail : s_origin) += term;
      }
    }
    J_tail[y] = s_tail;
    J_origin[y] = s_origin;
  }
  const auto naive_tail = cumulative(r, J_tail, false);
  const auto naive_origin = cumulative(r, J_origin, true);
  const auto tail = nested_tail(phi, r, h);
  const auto origin = nested_origin(phi, r, h);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_LE(rel_diff(tail.values[i], naive_tail[i]), 1e-12) << "node " << i;
    EXPECT_LE(rel_diff(origin.values[i], naive_origin[i]), 1e-12) << "node " << i;
    EXPECT_LE(rel_diff(tail.inner_scaled[i], J_tail[i]), 1e-12) << "node " << i;
  }
}

TEST(Nested, OverflowGuard) {
  const auto g = make_grid(4.0, 100);
  std::vector<double> L(g->size());
  for (std::size_t i = 0; i < L.size(); ++i) L[i] = -20.0 * (*g)[i] * (*g)[i];
  const auto phi = LogGridFunction::positive(g, L);
  EXPECT_THROW((void)nested_origin(phi, QuadratureRule(g), constant_h(*g, 1.0)), OverflowGuardError);
}

TEST(Nested, BalanceIsChecked) {
  const auto g = make_grid(4.0, 100);
  NestedOptions opt;
  opt.balanced = true;
  EXPECT_THROW((void)nested_origin(constant_phi(g), QuadratureRule(g), constant_h(*g, 1.0), opt), NumericalError);
}

TEST(Nested, TailModelContinuesExponentialDecay) {
  // phi = e^{-x}: int_y^inf e^{-2z} dz / e^{-2y} = 1/2 for every y
  const auto g = make_grid(4.0, 2000);
  std::vector<double> L(g->size());
  for (std::size_t i = 0; i < L.size(); ++i) L[i] = -(*g)[i];
  NestedOptions opt;
  opt.tail = TailModel{1.0, 0.0};
  const auto F = nested_tail(LogGridFunction::positive(g, L), QuadratureRule(g), constant_h(*g, 1.0), opt);
  for (std::size_t i = 0; i < g->size(); ++i) {
    EXPECT_NEAR(F.inner_scaled[i], 0.5, 1e-11);
    EXPECT_NEAR(F.values[i], 0.5 * (4.0 - (*g)[i]), 1e-11);
  }
  opt.tail = TailModel{1.0, 0.25};
  const auto G = nested_tail(LogGridFunction::positive(g, L), QuadratureRule(g), constant_h(*g, 1.0), opt);
  EXPECT_NEAR(G.values.back(), 0.5 * 0.25, 1e-12);
}

namespace {

struct ReferenceIntegrand {
  GridPtr grid;
  TrialFunction trial;
  GridSamples h;
};

ReferenceIntegrand reference_integrand(std::size_t intervals) {
  const auto g = make_grid(4.0, intervals);
  auto t = build_trial(PotentialParams(1.0, 2.0), g);
  const QuadratureRule r(g);
  const auto w = sample_w(t);
  const double ce = energy_step(t, r, w, std::vector<double>(g->size(), 1.0));
  GridSamples h = w;
  for (auto& v : h.values) v -= ce;
  h.knee_left -= ce;
  return {g, std::move(t), std::move(h)};
}

}  // namespace

TEST(Nested, GridConvergenceOnReferenceRun) {
  // three grids; fourth-order convergence shows up as a gap ratio near 16
  std::vector<ReferenceIntegrand> refs;
  std::vector<NestedIntegral> F;
  for (std::size_t n : {1000u, 2000u, 4000u}) {
    refs.push_back(reference_integrand(n));
    NestedOptions opt;
    opt.balanced = true;
    opt.tail = refs.back().trial.tail_model();
    F.push_back(nested_origin(refs.back().trial.phi(), QuadratureRule(refs.back().grid), refs.back().h, opt));
  }
  auto gap = [&](std::size_t c) {
    const Grid& gc = *refs[c].grid;
    const Grid& gf = *refs[c + 1].grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < gc.size(); ++i) {
      const std::size_t j = i <= gc.knee() ? 2 * i : gf.knee() + 2 * (i - gc.knee());
      EXPECT_EQ(gc[i], gf[j]);
      worst = std::max(worst, std::abs(F[c].values[i] - F[c + 1].values[j]));
    }
    return worst;
  };
  double scale = 0.0;
  for (double v : F.back().values) scale = std::max(scale, std::abs(v));
  const double g1 = gap(0), g2 = gap(1);
  EXPECT_LE(g2, 1e-6 * scale);
  EXPECT_GT(g1 / g2, 12.0);
  EXPECT_LT(g1 / g2, 20.0);
}

TEST(Nested, FoldedExponentsStaySmallOnReferenceRun) {
  const auto ref = reference_integrand(2000);
  NestedOptions opt;
  opt.balanced = true;
  for (const auto& F : {nested_origin(ref.trial.phi(), QuadratureRule(ref.grid), ref.h, opt),
                        nested_tail(ref.trial.phi(), QuadratureRule(ref.grid), ref.h, opt)}) {
    // exponents only span one cell: bounded by |d log phi^2/dx| * h at x_max
    const double bound = -2.0 * ref.trial.outer_log_derivative(4.0) * ref.grid->outer_step();
    EXPECT_LE(F.max_folded_exponent, bound);
    EXPECT_LE(F.max_folded_exponent_beyond_peak, bound);
    EXPECT_LT(F.truncation_ratio, 1e-10);
  }
}
