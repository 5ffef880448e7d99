#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "blorc/baselines.hpp"
#include "blorc/errors.hpp"
#include "blorc/train.hpp"

using namespace blorc;

TEST(FiniteDifference, SmallCaseAndProperties) {
  Matrix e(2, 3);
  e << -1, 1, 0, 0, -1, 1;
  EXPECT_EQ(finite_difference_matrix(3), e);
  const Matrix d = finite_difference_matrix(10);
  EXPECT_EQ((d * Vector::Constant(10, 0.7)).cwiseAbs().maxCoeff(), 0.0);
  Vector step = Vector::Zero(10);
  step.tail(4).setConstant(0.3);
  const Vector ds = d * step;
  EXPECT_EQ((ds.array() != 0.0).count(), 1);
  EXPECT_DOUBLE_EQ(ds(5), 0.3);
  EXPECT_THROW(finite_difference_matrix(1), InvalidInput);
}

TEST(Dct, OrthonormalWithConstantFirstRow) {
  for (const Eigen::Index n : {1, 2, 7, 32}) {
    const Matrix c = dct_matrix(n);
    EXPECT_LE((c * c.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((c.row(0).array() - 1.0 / std::sqrt(static_cast<double>(n))).abs().maxCoeff(), 1e-15);
  }
  EXPECT_THROW(dct_matrix(0), InvalidInput);
}

TEST(Dct, PureHarmonicHasOneDominantCoefficient) {
  const Eigen::Index n = 16;
  Vector x(n);
  for (Eigen::Index j = 0; j < n; ++j) x(j) = std::cos(std::numbers::pi * (j + 0.5) * 5 / n);
  const Vector c = dct_matrix(n) * x;
  Eigen::Index arg = 0;
  c.cwiseAbs().maxCoeff(&arg);
  EXPECT_EQ(arg, 5);
  EXPECT_LE(c.cwiseAbs().sum() - std::abs(c(5)), 1e-12);
}

TEST(GoldenSection, Parabola) {
  GoldenSectionSpec spec{0.0, 5.0, 1e-6, 200};
  int calls = 0;
  const auto r = golden_section_minimize([&](double x) { ++calls; return (x - 2) * (x - 2); }, spec);
  EXPECT_NEAR(r.x, 2.0, 1e-6);
  EXPECT_EQ(r.evals, calls);
  EXPECT_LE(r.bracket_hi - r.bracket_lo, 1e-6);
}

TEST(GoldenSection, LowEndOptimal) {
  GoldenSectionSpec spec{1.0, 3.0, 1e-5, 200};
  const auto r = golden_section_minimize([](double x) { return x; }, spec);
  EXPECT_NEAR(r.x, 1.0, 1e-5);
}

TEST(GoldenSection, RespectsBudgetAndShrinksByGoldenRatio) {
  GoldenSectionSpec spec{0.0, 1.0, 1e-12, 10};
  std::vector<double> xs;
  const auto r = golden_section_minimize([&](double x) { xs.push_back(x); return std::cos(6 * x); }, spec);
  EXPECT_LE(r.evals, 10);
  EXPECT_EQ(static_cast<int>(xs.size()), r.evals);
  // two evaluations precede the first shrink, then one per shrink
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  EXPECT_NEAR(r.bracket_hi - r.bracket_lo, std::pow(invphi, 8), 1e-12);
}

TEST(GoldenSection, ReturnsBestSeenOnMultimodal) {
  GoldenSectionSpec spec{0.0, 10.0, 1e-4, 60};
  std::vector<std::pair<double, double>> seen;
  auto f = [&](double x) {
    const double v = std::sin(3 * x) + 0.1 * x;
    seen.emplace_back(x, v);
    return v;
  };
  const auto r = golden_section_minimize(f, spec);
  double best = 1e300;
  for (const auto& [x, v] : seen) best = std::min(best, v);
  EXPECT_EQ(r.fx, best);
}

TEST(GoldenSection, InvalidSpec) {
  EXPECT_THROW(golden_section_minimize([](double) { return 0.0; }, GoldenSectionSpec{2.0, 1.0}), InvalidInput);
  EXPECT_THROW(golden_section_minimize([](double) { return 0.0; }, GoldenSectionSpec{0.0, 1.0, 0.0}), InvalidInput);
}

TEST(GoldenSectionLambda, TotalVariationInteriorOptimum) {
  SignalSpec spec{SignalKind::kPiecewise, 24};
  const auto val = make_pairs(spec, 12, 3);
  const Matrix d = finite_difference_matrix(24);
  GoldenSectionSpec gs;
  const auto r = golden_section_lambda(d, val, gs, AdmmParams{});
  EXPECT_LE(r.evals, gs.max_evals);
  EXPECT_LT(r.fx, evaluate_loss(gs.lo * d, val, AdmmParams{}));
  EXPECT_LT(r.fx, evaluate_loss(gs.hi * d, val, AdmmParams{}));
  EXPECT_NEAR(r.fx, evaluate_loss(r.x * d, val, AdmmParams{}), 1e-12);
}

TEST(Unsupervised, OrthogonalAndObjectiveDecreasesOnPiecewise) {
  const auto pairs = make_pairs(SignalSpec{SignalKind::kPiecewise, 16}, 60, 2);
  std::vector<Vector> clean;
  for (const auto& p : pairs) clean.push_back(p.x_clean);
  UnsupervisedParams params;
  params.iters = 200;
  const UnsupervisedResult r = unsupervised_orthogonal_learn(clean, params);
  EXPECT_LE((r.w * r.w.transpose() - Matrix::Identity(16, 16)).norm(), 1e-8);
  ASSERT_EQ(r.objective.size(), 201u);
  EXPECT_LE(r.objective.back(), r.objective.front());
  Matrix x(16, 60);
  for (int j = 0; j < 60; ++j) x.col(j) = clean[static_cast<std::size_t>(j)];
  EXPECT_DOUBLE_EQ(r.objective.front(), x.cwiseAbs().sum());
  EXPECT_NEAR(r.objective.back(), sparsity_objective(r.w, x), 1e-9);
}

TEST(Unsupervised, DegenerateConstantSignals) {
  const std::vector<Vector> clean(5, Vector::Constant(8, 1.0));
  UnsupervisedParams params;
  params.iters = 50;
  const UnsupervisedResult r = unsupervised_orthogonal_learn(clean, params);
  EXPECT_LE((r.w * r.w.transpose() - Matrix::Identity(8, 8)).norm(), 1e-8);
  EXPECT_LE(r.objective.back(), r.objective.front());
}

TEST(Unsupervised, RandomInitIsSeededAndOrthogonal) {
  const auto pairs = make_pairs(SignalSpec{SignalKind::kDct, 8}, 10, 4);
  std::vector<Vector> clean;
  for (const auto& p : pairs) clean.push_back(p.x_clean);
  UnsupervisedParams params;
  params.iters = 0;
  params.random_init = true;
  const Matrix a = unsupervised_orthogonal_learn(clean, params, 1).w;
  EXPECT_EQ(a, unsupervised_orthogonal_learn(clean, params, 1).w);
  EXPECT_LE((a * a.transpose() - Matrix::Identity(8, 8)).norm(), 1e-12);
  EXPECT_THROW(unsupervised_orthogonal_learn({}, params), InvalidInput);
}
