#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dsgdm/problems.hpp"
#include "dsgdm/rng.hpp"

namespace dsgdm {

enum class NoiseLaw { Laplace, Gaussian };

// Manipulation of a gradient estimate: m = a * g + b * xi with xi zero-mean,
// unit-variance per coordinate. a >= 1; (1, 0) is the truthful identity.
struct Action {
  double a = 1.0;
  double b = 0.0;
  NoiseLaw noise_law = NoiseLaw::Laplace;

  static Action truthful() { return {}; }
  bool is_truthful() const { return a == 1.0 && b == 0.0; }
  void validate() const;
};

// Applies the action to a gradient. With b == 0 this is deterministic and
// draws nothing from the stream, so truthful runs consume no action noise.
Vector apply_action(const Action& act, const Vector& g, RngStream& rng);

// Monte-Carlo estimate of E||alpha(g) - g|| over the provided gradient
// samples with fresh noise per sample. Zero exactly for the truthful action.
double truthfulness_deviation(const Action& act, const std::vector<Vector>& g_samples,
                              RngStream& rng, int noise_draws_per_sample = 32);

struct BestResponseGrid {
  std::vector<double> a_values;
  std::vector<double> b_values;
  NoiseLaw noise_law = NoiseLaw::Laplace;
};

struct BestResponseResult {
  Action action;
  double mean_net_utility = 0.0;
};

// Evaluates every (a, b) grid point with the supplied simulation-backed
// utility evaluator, once per seed, and returns the point with the highest
// mean net utility. Ties break toward smaller a, then smaller |b| (the more
// truthful action). Deterministic given (grid, seeds).
BestResponseResult best_response_search(
    const BestResponseGrid& grid,
    const std::function<double(const Action&, std::uint64_t seed)>& evaluate,
    const std::vector<std::uint64_t>& seeds);

// Per-agent strategy. BestResponse policies are resolved to a fixed action by
// the experiment layer before a run starts.
struct StrategyPolicy {
  enum class Kind { Truthful, Fixed, Schedule, BestResponse };

  Kind kind = Kind::Truthful;
  Action fixed;
  std::vector<Action> schedule;  // one action per iteration
  BestResponseGrid grid;

  static StrategyPolicy truthful() { return {}; }
  static StrategyPolicy fixed_action(Action a);
  static StrategyPolicy per_iteration(std::vector<Action> schedule);
  static StrategyPolicy best_response(BestResponseGrid grid);

  bool is_resolved() const { return kind != Kind::BestResponse; }
  // Action taken at iteration t; requires a resolved policy.
  const Action& action_at(long t) const;
  void validate(long horizon) const;
};

}  // namespace dsgdm
