#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "wqa/error.hpp"
#include "wqa/fusion.hpp"
#include "wqa/optimizers.hpp"
#include "wqa/random.hpp"

using namespace wqa;
using namespace wqa::opt;

namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rosenbrock(std::span<const double> x) {
  return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
}

OptimizerConfig wide(double lo, double hi) {
  OptimizerConfig c;
  c.bounds = {{lo, hi}};
  return c;
}

std::shared_ptr<const ScoreMatrix> synthetic(std::uint64_t seed, std::size_t n, std::size_t m,
                                             std::vector<Label>& labels) {
  Rng rng(seed);
  labels.clear();
  std::vector<std::string> names, ids;
  for (std::size_t j = 0; j < m; ++j) {
    labels.push_back(rng.uniform() < 0.5 ? Label::Relevant : Label::Irrelevant);
    ids.push_back("s" + std::to_string(j));
  }
  std::vector<double> v(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("m" + std::to_string(i));
    const double q = rng.uniform(0.05, 0.3);
    for (std::size_t j = 0; j < m; ++j) {
      const double base = labels[j] == Label::Relevant ? 0.5 + q : 0.5 - q;
      v[i * m + j] = std::clamp(base + rng.uniform(-0.45, 0.45), 0.0, 1.0);
    }
  }
  return std::make_shared<const ScoreMatrix>(names, ids, v);
}

}  // namespace

TEST(Pso, SphereThreeDims) {
  auto cfg = wide(-5, 5);
  cfg.seed = 4;
  auto r = optimize_pso(Objective(sphere), 3, cfg);
  EXPECT_LT(r.best_error, 1e-3);
  EXPECT_EQ(r.trace.size(), r.iterations + 1);
}

TEST(Pso, SameSeedSameResult) {
  auto cfg = wide(-5, 5);
  cfg.seed = 99;
  auto a = optimize_pso(Objective(sphere), 3, cfg);
  auto b = optimize_pso(Objective(sphere), 3, cfg);
  EXPECT_EQ(a.best_weights, b.best_weights);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Pso, ThreadedMatchesSequential) {
  auto cfg = wide(-5, 5);
  cfg.seed = 3;
  auto a = optimize_pso(Objective(sphere), 4, cfg);
  cfg.pso.threads = 4;
  auto b = optimize_pso(Objective(sphere), 4, cfg);
  EXPECT_EQ(a.best_weights, b.best_weights);
}

TEST(Pso, TraceNonIncreasing) {
  auto r = optimize_pso(Objective(rosenbrock), 2, wide(-2, 2));
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
}

TEST(NelderMead, Rosenbrock) {
  std::vector<double> x0{-1.2, 1.0};
  auto r = optimize_nelder_mead(Objective(rosenbrock), x0, wide(-5, 5));
  EXPECT_NEAR(r.best_weights[0], 1.0, 1e-4);
  EXPECT_NEAR(r.best_weights[1], 1.0, 1e-4);
}

TEST(NelderMead, ShiftedParabola) {
  std::vector<double> x0{0.0};
  auto cfg = wide(-10, 10);
  cfg.tolerance = 1e-10;
  auto r = optimize_nelder_mead(Objective([](std::span<const double> x) { return (x[0] - 3) * (x[0] - 3); }), x0, cfg);
  EXPECT_NEAR(r.best_weights[0], 3.0, 1e-6);
}

TEST(NelderMead, FusionNoWorseThanAveraging) {
  std::vector<Label> labels;
  auto s = synthetic(31, 2, 60, labels);
  auto f = fusion_objective(s, labels, 0.5);
  auto x0 = uniform_weights(2);
  auto r = optimize_nelder_mead(f, x0, {});
  const double avg = evaluate(decide(simple_average(*s)), labels).error;
  EXPECT_LE(r.best_error, avg);
  EXPECT_EQ(f(r.best_weights), r.best_error);
}

TEST(Lbfgs, CenteredQuadratic) {
  std::vector<double> x0{0.9, 0.1};
  auto cfg = wide(0, 1);
  cfg.lbfgs.fd_step = 1e-6;
  auto r = optimize_lbfgs(
      Objective([](std::span<const double> x) { return (x[0] - 0.3) * (x[0] - 0.3) + (x[1] - 0.7) * (x[1] - 0.7); }),
      x0, cfg);
  EXPECT_NEAR(r.best_weights[0], 0.3, 1e-6);
  EXPECT_NEAR(r.best_weights[1], 0.7, 1e-6);
}

TEST(Lbfgs, Rosenbrock) {
  std::vector<double> x0{-1.2, 1.0};
  auto cfg = wide(-5, 5);
  cfg.lbfgs.fd_step = 1e-6;
  auto r = optimize_lbfgs(Objective(rosenbrock), x0, cfg);
  EXPECT_LE(r.iterations, 200u);
  EXPECT_NEAR(r.best_weights[0], 1.0, 1e-4);
  EXPECT_NEAR(r.best_weights[1], 1.0, 1e-4);
}

TEST(Lbfgs, PiecewiseConstantNeverWorse) {
  std::vector<Label> labels;
  auto s = synthetic(12, 3, 70, labels);
  auto f = fusion_objective(s, labels, 0.5);
  auto x0 = uniform_weights(3);
  auto r = optimize_lbfgs(f, x0, {});
  EXPECT_LE(f(r.best_weights), f(x0));
  EXPECT_EQ(f(r.best_weights), r.best_error);
}

TEST(Powell, CoupledQuadratic) {
  std::vector<double> x0{1.5, -2.0};
  auto r = optimize_powell(Objective([](std::span<const double> x) {
                             return 2 * x[0] * x[0] + 2 * x[0] * x[1] + 2 * x[1] * x[1];
                           }),
                           x0, wide(-5, 5));
  EXPECT_NEAR(r.best_weights[0], 0.0, 1e-6);
  EXPECT_NEAR(r.best_weights[1], 0.0, 1e-6);
}

TEST(Powell, ShiftedQuadratic) {
  std::vector<double> x0{0.5, 0.5};
  auto r = optimize_powell(Objective([](std::span<const double> x) {
                             return (x[0] - 0.25) * (x[0] - 0.25) + (x[1] - 0.75) * (x[1] - 0.75);
                           }),
                           x0, {});
  EXPECT_NEAR(r.best_weights[0], 0.25, 1e-6);
  EXPECT_NEAR(r.best_weights[1], 0.75, 1e-6);
}

TEST(Powell, StaysInsideBounds) {
  std::vector<double> x0{0.5, 0.5};
  auto r = optimize_powell(Objective([](std::span<const double> x) { return -x[0] - 2 * x[1]; }), x0, {});
  EXPECT_NEAR(r.best_weights[0], 1.0, 1e-6);
  EXPECT_NEAR(r.best_weights[1], 1.0, 1e-6);
  EXPECT_LE(r.best_weights[0], 1.0);
}

TEST(Optimize, DispatchAndNames) {
  for (auto m : {Method::Pso, Method::NelderMead, Method::Lbfgs, Method::Powell}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_FALSE(parse_method("adam").has_value());
}

TEST(Optimize, BadBoundsRejected) {
  auto cfg = wide(1, 0);
  std::vector<double> x0{0.5};
  EXPECT_THROW(optimize_nelder_mead(Objective(sphere), x0, cfg), Error);
}

TEST(GridOracle, SingleModel) {
  auto r = grid_search_oracle(Objective(sphere), 1, 0.1);
  EXPECT_EQ(r.best_weights, (std::vector<double>{1.0}));
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(GridOracle, TwoModelsHalfStep) {
  std::vector<std::vector<double>> seen;
  Objective f([&](std::span<const double> x) {
    seen.emplace_back(x.begin(), x.end());
    return std::abs(x[0] - 0.5);
  });
  auto r = grid_search_oracle(f, 2, 0.5);
  ASSERT_EQ(seen.size(), 3u);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen[0], (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(seen[1], (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(seen[2], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(r.best_weights, (std::vector<double>{0.5, 0.5}));
}

TEST(GridOracle, LatticeSize) {
  // compositions of K=50 into 3 parts: C(52, 2)
  auto r = grid_search_oracle(Objective(sphere), 3, 0.02);
  EXPECT_EQ(r.evaluations, 1326u);
}

TEST(GridOracle, BelowEveryOptimizerOnLatticeOptimum) {
  // minimum at (0.25, 0.75), which lies on the 0.05 lattice
  Objective f([](std::span<const double> x) {
    const double s = x[0] + x[1];
    if (s <= 0) return 10.0;
    const double a = x[0] / s - 0.25;
    return a * a;
  });
  auto g = grid_search_oracle(f, 2, 0.05);
  for (auto m : {Method::Pso, Method::NelderMead, Method::Lbfgs, Method::Powell}) {
    auto r = optimize(m, f, uniform_weights(2), {});
    EXPECT_LE(g.best_error, r.best_error + 0.0) << to_string(m);
  }
}

TEST(Surrogate, ApproachesRawErrorAtHighTemperature) {
  std::vector<Label> labels;
  auto s = synthetic(5, 2, 80, labels);
  auto raw = fusion_objective(s, labels, 0.5);
  auto hot = surrogate_objective(s, labels, 0.5, 1e6);
  std::vector<double> w{0.3, 0.7};
  EXPECT_NEAR(hot(w), raw(w), 0.02);
}

TEST(HaltonSimplex, OnSimplex) {
  for (std::size_t i = 1; i < 50; ++i) {
    auto p = halton_simplex_point(i, 3);
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_NE(halton_simplex_point(1, 3), halton_simplex_point(2, 3));
}

TEST(OptimizeFusion, BestIsRawErrorOfReturnedWeights) {
  std::vector<Label> labels;
  auto s = synthetic(77, 3, 90, labels);
  auto raw = fusion_objective(s, labels, 0.5);
  for (auto m : {Method::Pso, Method::NelderMead, Method::Lbfgs, Method::Powell}) {
    OptimizerConfig cfg;
    cfg.seed = 1;
    auto r = optimize_fusion(m, s, labels, 0.5, cfg);
    EXPECT_EQ(raw(r.best_weights), r.best_error) << to_string(m);
    EXPECT_LE(r.best_error, raw(uniform_weights(3))) << to_string(m);
  }
}

TEST(OptimizeFusion, Deterministic) {
  std::vector<Label> labels;
  auto s = synthetic(8, 2, 50, labels);
  for (auto m : {Method::Pso, Method::NelderMead, Method::Lbfgs, Method::Powell}) {
    auto a = optimize_fusion(m, s, labels, 0.5, {});
    auto b = optimize_fusion(m, s, labels, 0.5, {});
    EXPECT_EQ(a.best_weights, b.best_weights) << to_string(m);
  }
}

TEST(OptimizeFusion, ExtraSwarmsNeverHurt) {
  std::vector<Label> labels;
  auto s = synthetic(31, 3, 70, labels);
  OptimizerConfig cfg;
  cfg.seed = 5;
  FusionSearch one;
  one.pso_swarms = 1;
  FusionSearch three;
  three.pso_swarms = 3;
  auto a = optimize_fusion(Method::Pso, s, labels, 0.5, cfg, one);
  auto b = optimize_fusion(Method::Pso, s, labels, 0.5, cfg, three);
  auto plain = optimize_pso(fusion_objective(s, labels, 0.5), 3, cfg);
  EXPECT_EQ(a.best_weights, plain.best_weights);
  EXPECT_LE(b.best_error, a.best_error);
  EXPECT_EQ(b.evaluations, 3 * a.evaluations);
  EXPECT_EQ(b.trace.size(), 3 * a.trace.size());
  one.pso_swarms = 0;
  EXPECT_THROW(optimize_fusion(Method::Pso, s, labels, 0.5, cfg, one), Error);
}

TEST(ToJson, HasMethodAndWeights) {
  auto r = optimize_pso(Objective(sphere), 2, wide(-1, 1));
  auto j = to_json(r);
  EXPECT_NE(j.find("\"method\""), std::string::npos);
  EXPECT_NE(j.find("\"best_weights\""), std::string::npos);
}
