#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dwell/hierarchy.hpp"
#include "dwell/oracle.hpp"
#include "test_support.hpp"

using namespace dwell;

namespace {

const GridPtr& default_grid() {
  static const GridPtr g = make_grid(4.0, 2000);
  return g;
}

SolveReport table_run(double g, double a, BoundaryCondition bc) {
  SolveOptions o;
  o.max_iter = 5;
  o.tol = 0.0;
  return solve(PotentialParams(g, a), default_grid(), bc, o);
}

constexpr auto I = BoundaryCondition::unit_at_infinity;
constexpr auto II = BoundaryCondition::unit_at_origin;

}  // namespace

TEST(BoundaryCondition, ParseAndPrint) {
  EXPECT_EQ(parse_boundary_condition("I"), I);
  EXPECT_EQ(parse_boundary_condition("II"), II);
  EXPECT_EQ(to_string(I), "I");
  EXPECT_EQ(to_string(II), "II");
  EXPECT_THROW((void)parse_boundary_condition("III"), ParameterError);
}

TEST(EnergyStep, ConstantResidualPotential) {
  const auto t = build_trial(PotentialParams(1.0, 2.0), default_grid());
  const QuadratureRule r(default_grid());
  const auto w = GridSamples::continuous(std::vector<double>(default_grid()->size(), 0.375), *default_grid());
  EXPECT_NEAR(energy_step(t, r, w, std::vector<double>(default_grid()->size(), 1.0)), 0.375, 1e-14);
}

TEST(EnergyStep, FirstIterate) {
  for (auto [a, e1] : {std::pair{2.0, 1.0163}, std::pair{3.0, 1.2974}}) {
    const PotentialParams p(1.0, a);
    const auto t = build_trial(p, default_grid());
    const double ce = energy_step(t, QuadratureRule(default_grid()), sample_w(t),
                                  std::vector<double>(default_grid()->size(), 1.0));
    EXPECT_GT(ce, 0.0);
    EXPECT_LT(ce, p.leading_energy());
    EXPECT_NEAR(p.leading_energy() - ce, e1, 5e-5) << "a=" << a;
  }
}

TEST(EnergyStep, DegenerateDenominator) {
  const auto t = build_trial(PotentialParams(1.0, 2.0), default_grid());
  EXPECT_THROW((void)energy_step(t, QuadratureRule(default_grid()), sample_w(t),
                                 std::vector<double>(default_grid()->size(), 0.0)),
               DegenerateDenominatorError);
}

TEST(FStep, BoundaryValuesAreExact) {
  const PotentialParams p(1.0, 2.0);
  const auto t = build_trial(p, default_grid());
  const QuadratureRule r(default_grid());
  const auto w = sample_w(t);
  std::vector<double> f(default_grid()->size(), 1.0);
  StepOptions truncated;
  truncated.asymptotic_tail = false;
  for (int n = 0; n < 4; ++n) {
    const double ce = energy_step(t, r, w, f);
    const auto f2 = f_step(t, r, w, ce, f, II);
    EXPECT_EQ(f2.front(), 1.0);
    const auto f1 = f_step(t, r, w, ce, f, I, truncated);
    EXPECT_EQ(f1.back(), 1.0);
    const auto f1t = f_step(t, r, w, ce, f, I);
    // the continued tail leaves f slightly above its limit 1 at x_max
    EXPECT_GT(f1t.back(), 1.0);
    EXPECT_LT(f1t.back(), 1.05);
    f = f2;
  }
}

TEST(FStep, PositivityLoss) {
  const auto t = build_trial(PotentialParams(1.0, 2.0), default_grid());
  const QuadratureRule r(default_grid());
  auto w = sample_w(t);
  for (auto& v : w.values) v *= 200.0;
  w.knee_left *= 200.0;
  const std::vector<double> f(default_grid()->size(), 1.0);
  const double ce = energy_step(t, r, w, f);
  EXPECT_THROW((void)f_step(t, r, w, ce, f, II), PositivityLossError);
}

TEST(FStep, UnbalancedEnergyRejected) {
  const auto t = build_trial(PotentialParams(1.0, 2.0), default_grid());
  const QuadratureRule r(default_grid());
  const auto w = sample_w(t);
  const std::vector<double> f(default_grid()->size(), 1.0);
  EXPECT_THROW((void)f_step(t, r, w, energy_step(t, r, w, f) + 0.01, f, II), NumericalError);
}

TEST(Solve, TableOneBothConditions) {
  const double bc1[] = {1.7321, 1.0163, 1.0031, 1.0005, 1.0001, 1.0000};
  const double bc2[] = {1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000};
  const auto r1 = table_run(1.0, 2.0, I);
  const auto r2 = table_run(1.0, 2.0, II);
  ASSERT_EQ(r1.energies.size(), 6u);
  ASSERT_EQ(r2.energies.size(), 6u);
  for (int n = 0; n < 6; ++n) {
    EXPECT_NEAR(r1.energies[n], bc1[n], 5e-4) << "I, n=" << n;
    EXPECT_NEAR(r2.energies[n], bc2[n], 5e-4) << "II, n=" << n;
  }
  EXPECT_TRUE(r1.violations.empty());
  EXPECT_TRUE(r2.violations.empty());
}

TEST(Solve, SecondIterateUnderConditionI) {
  EXPECT_NEAR(table_run(1.0, 2.0, I).energies[2], 1.0031, 5e-4);
}

TEST(Solve, SmallCoupling) { EXPECT_NEAR(table_run(0.88, 2.0, II).energies[5], 0.8527, 5e-4); }

TEST(Solve, ShapeBelowTwoAgreesWithReference) {
  // the iteration converges to the finite-difference ground state
  const auto rep = table_run(1.0, 1.8, II);
  const auto ref = oracle_ground_state(PotentialParams(1.0, 1.8));
  EXPECT_NEAR(rep.energies[5], ref.energy, 5e-5);
}

TEST(Solve, EnergyListLengthAndLeadingEntry) {
  const auto rep = solve(PotentialParams(2.0, 2.0), default_grid(), II);
  EXPECT_EQ(rep.energies.size(), rep.iterations + 1);
  EXPECT_EQ(rep.ledger.f.size(), rep.iterations + 1);
  EXPECT_EQ(rep.energies[0], PotentialParams(2.0, 2.0).leading_energy());
  EXPECT_TRUE(rep.converged);
  EXPECT_LT(std::abs(rep.energies.back() - rep.energies[rep.energies.size() - 2]), 1e-6);
}

TEST(Solve, Deterministic) {
  const auto a = solve(PotentialParams(1.0, 3.0), default_grid(), II);
  const auto b = solve(PotentialParams(1.0, 3.0), default_grid(), II);
  EXPECT_EQ(a.energies, b.energies);
  EXPECT_EQ(a.f_final(), b.f_final());
}

TEST(Solve, NonConvergenceWarning) {
  SolveOptions o;
  o.max_iter = 2;
  o.tol = 1e-12;
  const auto rep = solve(PotentialParams(1.0, 2.0), default_grid(), II, o);
  EXPECT_FALSE(rep.converged);
  ASSERT_FALSE(rep.warnings.empty());
  EXPECT_NE(rep.warnings.back().find("no convergence"), std::string::npos);
}

TEST(Solve, WarnsBelowCriticalShape) {
  SolveOptions o;
  o.max_iter = 3;
  o.tol = 0.0;
  const auto rep = solve(PotentialParams(3.0, 0.6), default_grid(), II, o);
  ASSERT_FALSE(rep.warnings.empty());
  EXPECT_NE(rep.warnings.front().find("critical shape"), std::string::npos);
  EXPECT_TRUE(table_run(1.0, 2.0, II).warnings.empty());
}

TEST(Solve, RejectsNegativeGamma) {
  EXPECT_THROW((void)solve(PotentialParams(1.0, 1.0), default_grid(), II), ConvergenceDomainError);
}

TEST(Iterates, ShapeUnderConditionII) {
  const auto rep = table_run(1.0, 2.0, II);
  for (std::size_t n = 1; n < rep.ledger.f.size(); ++n) {
    const auto& f = rep.f(n);
    EXPECT_EQ(f.front(), 1.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
      EXPECT_LE(f[i], f[i - 1] + 1e-12) << "n=" << n << " i=" << i;
      EXPECT_GT(f[i], 0.0);
    }
    EXPECT_EQ(rep.psi(n).front(), 1.0);
  }
}

TEST(Iterates, ShapeUnderConditionI) {
  const auto rep = table_run(1.0, 2.0, I);
  for (std::size_t n = 1; n < rep.ledger.f.size(); ++n) {
    const auto& f = rep.f(n);
    // limit 1 is reached at infinity, not at x_max
    EXPECT_GT(f.back(), 1.0);
    EXPECT_LT(f.back(), 1.05);
    for (std::size_t i = 1; i < f.size(); ++i) {
      EXPECT_LE(f[i], f[i - 1] + 1e-12) << "n=" << n << " i=" << i;
      EXPECT_GE(f[i], 1.0 - 1e-12);
    }
  }
}

TEST(Iterates, ConvergedWavefunctionIsExactQuartic) {
  const auto rep = table_run(1.0, 2.0, II);
  const auto psi = rep.psi(4);
  double worst = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = rep.ledger.nodes[i];
    worst = std::max(worst, std::abs(psi[i] - std::exp(-x * x * x * x / 4)));
  }
  EXPECT_LE(worst, 2e-3);
}

TEST(CheckHierarchy, TableRunsSatisfyTheorem) {
  for (double a : {1.8, 2.0, 3.0}) {
    const PotentialParams p(1.0, a);
    const auto ref = oracle_ground_state(p);
    for (auto bc : {I, II}) {
      SolveOptions o;
      o.max_iter = 5;
      o.tol = 0.0;
      o.checks.reference = ReferenceEnergy{ref.energy, 0.0};
      const auto rep = solve(p, default_grid(), bc, o);
      EXPECT_TRUE(rep.violations.empty()) << "a=" << a << " bc=" << to_string(bc) << " first: "
                                          << (rep.violations.empty() ? "" : rep.violations[0].check);
      for (const auto& c : rep.checks) EXPECT_GT(c.evaluated, 0u) << c.check;
    }
  }
}

TEST(CheckHierarchy, ConditionIDecreasingEnergies) {
  const auto rep = table_run(1.0, 2.0, I);
  for (std::size_t n = 2; n < rep.energies.size(); ++n) EXPECT_LT(rep.energies[n], rep.energies[n - 1]);
}

TEST(CheckHierarchy, ConditionIIBrackets) {
  const auto rep = table_run(1.0, 2.0, II);
  EXPECT_LT(rep.energies[2], 1.0);
  EXPECT_GT(rep.energies[3], 1.0);
  EXPECT_LT(rep.energies[2], rep.energies[4]);
  EXPECT_LT(rep.energies[3], rep.energies[1]);
}

TEST(CheckHierarchy, TiesWithinToleranceAreNotViolations) {
  HierarchyLedger l;
  l.bc = I;
  l.leading_energy = 2.0;
  l.nodes = {0.0, 1.0, 2.0};
  l.curly_e = {0.5, 0.5 - 1e-12, 0.6};
  l.f = {{1, 1, 1}, {1.5, 1.2, 1.0}, {1.7, 1.3, 1.0}, {1.8, 1.35, 1.0}};
  EXPECT_TRUE(check_hierarchy(l).empty());
  l.curly_e[1] = 0.4;
  const auto v = check_hierarchy(l);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].check, "energy_increasing");
  EXPECT_EQ(v[0].n, 1u);
}

TEST(CheckHierarchy, ConditionIIOrderings) {
  HierarchyLedger l;
  l.bc = II;
  l.leading_energy = 2.0;
  l.nodes = {0.0, 1.0};
  l.curly_e = {0.70, 0.76, 0.72, 0.74, 0.73};
  l.f = {{1, 1}, {1, 0.5}, {1, 0.6}, {1, 0.55}, {1, 0.58}, {1, 0.57}};
  auto detailed = check_hierarchy_detailed(l);
  EXPECT_TRUE(detailed.violations.empty());
  l.curly_e = {0.70, 0.76, 0.77, 0.74, 0.73};   // calE_3 above calE_2 and calE_4
  detailed = check_hierarchy_detailed(l);
  ASSERT_FALSE(detailed.violations.empty());
  bool found = false;
  for (const auto& v : detailed.violations) found = found || v.check == "even_above_odd";
  EXPECT_TRUE(found);
}

TEST(CheckHierarchy, ReferenceBracketing) {
  HierarchyLedger l;
  l.bc = II;
  l.leading_energy = 2.0;
  l.nodes = {0.0, 1.0};
  l.curly_e = {0.9, 1.1, 0.95, 1.05};   // E = 1.1, 0.9, 1.05, 0.95
  l.f = {{1, 1}, {1, 0.5}, {1, 0.6}, {1, 0.55}, {1, 0.58}};
  HierarchyCheckOptions opt;
  opt.reference = ReferenceEnergy{1.0, 0.0};
  EXPECT_TRUE(check_hierarchy(l, opt).empty());
  opt.reference = ReferenceEnergy{1.06, 0.0};
  const auto v = check_hierarchy(l, opt);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].check, "energy_upper_bound");
  EXPECT_EQ(v[0].n, 3u);
  opt.max_order = 2;
  EXPECT_TRUE(check_hierarchy(l, opt).empty());
}
