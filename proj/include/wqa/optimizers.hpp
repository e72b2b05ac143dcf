#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wqa/corpus.hpp"

namespace wqa {
class ScoreMatrix;
}

namespace wqa::opt {

using ObjectiveFn = std::function<double(std::span<const double>)>;

// A pure function of the weight vector plus an evaluation counter. Calls may
// come from several threads at once, so the wrapped function must not mutate
// shared state.
class Objective {
 public:
  explicit Objective(ObjectiveFn fn) : fn_(std::move(fn)), count_(std::make_shared<std::atomic<std::size_t>>(0)) {}

  double operator()(std::span<const double> x) const {
    count_->fetch_add(1, std::memory_order_relaxed);
    return fn_(x);
  }

  std::size_t evaluations() const { return count_->load(std::memory_order_relaxed); }

 private:
  ObjectiveFn fn_;
  std::shared_ptr<std::atomic<std::size_t>> count_;
};

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct PsoParams {
  std::size_t swarm_size = 30;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  // Worker threads for swarm evaluation; 0 or 1 evaluates sequentially.
  std::size_t threads = 1;
};

struct NelderMeadParams {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double nonzero_delta = 0.05;
  double zero_delta = 0.00025;
};

struct LbfgsParams {
  std::size_t memory = 10;
  double fd_step = 1e-3;
  double armijo = 1e-4;
  std::size_t max_backtracks = 50;
};

struct PowellParams {
  double line_tolerance = 1e-6;
  std::size_t max_line_iterations = 500;
};

enum class Method { Pso, NelderMead, Lbfgs, Powell };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct OptimizerConfig {
  // Unset means the method default: PSO 100, Nelder-Mead 200*n, L-BFGS 200,
  // Powell 100.
  std::optional<std::size_t> max_iterations;
  std::uint64_t seed = 0;
  // Empty means [0, 1] in every dimension; a single entry is broadcast.
  std::vector<Bounds> bounds;
  double tolerance = 1e-6;
  PsoParams pso;
  NelderMeadParams nelder_mead;
  LbfgsParams lbfgs;
  PowellParams powell;
};

struct OptimizationResult {
  std::string method;
  std::vector<double> best_weights;
  double best_error = 0.0;
  // Best-so-far objective value after initialization and after each iteration.
  std::vector<double> trace;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Global-best PSO with inertia; positions are clamped into the bounds.
OptimizationResult optimize_pso(const Objective& f, std::size_t n, const OptimizerConfig& cfg);

// Every method below evaluates only points inside the bounds: trial points are
// projected onto the box before evaluation.
OptimizationResult optimize_nelder_mead(const Objective& f, std::span<const double> x0, const OptimizerConfig& cfg);
OptimizationResult optimize_lbfgs(const Objective& f, std::span<const double> x0, const OptimizerConfig& cfg);
OptimizationResult optimize_powell(const Objective& f, std::span<const double> x0, const OptimizerConfig& cfg);

// PSO uses only x0.size().
OptimizationResult optimize(Method m, const Objective& f, std::span<const double> x0, const OptimizerConfig& cfg);

// Exhaustive search over the simplex lattice {k / K : sum k = K}, K = round(1/step).
// The first minimum in enumeration order wins.
OptimizationResult grid_search_oracle(const Objective& f, std::size_t n, double step);

std::vector<double> uniform_weights(std::size_t n);

// Raw 0/1 fusion error. Weight vectors without a positive entry (or with a
// negative one) score 1.0 so optimizers can roam the full box.
Objective fusion_objective(std::shared_ptr<const ScoreMatrix> scores, std::vector<Label> labels, double threshold);

// Mean over samples of sigmoid(temperature * signed distance to the wrong
// side of the threshold): a smooth stand-in for the 0/1 error.
Objective surrogate_objective(std::shared_ptr<const ScoreMatrix> scores, std::vector<Label> labels, double threshold,
                              double temperature = 20.0);

// How fusion weights are searched. PSO always works on the raw error. The
// local methods run a chain of smoothed stages with rising temperature, then a
// final pass on the raw error, from each start point; every point they
// evaluate is also scored on the raw error and the best one is returned.
struct FusionSearch {
  std::vector<double> temperatures{5.0, 20.0, 80.0, 320.0, 1280.0};
  // Extra starts after the uniform weights, taken from a Halton sequence
  // mapped onto the simplex.
  std::size_t restarts = 10;
  // PSO ignores the starts above; it runs this many seeded swarms instead.
  std::size_t pso_swarms = 3;
};

OptimizationResult optimize_fusion(Method m, std::shared_ptr<const ScoreMatrix> scores, std::vector<Label> labels,
                                   double threshold, const OptimizerConfig& cfg, const FusionSearch& search = {});

// Points spread over the probability simplex: the radical inverse of `index`
// in successive prime bases, pushed through -log(1 - u) and normalized.
std::vector<double> halton_simplex_point(std::size_t index, std::size_t n);

std::string to_json(const OptimizationResult& r);

}  // namespace wqa::opt
