#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsgdm/engine.hpp"
#include "dsgdm/mechanism.hpp"
#include "dsgdm/metrics.hpp"
#include "dsgdm/problems.hpp"
#include "dsgdm/strategy.hpp"
#include "dsgdm/topology.hpp"

namespace dsgdm {

struct TopologySpec {
  enum class Kind { Ring, Edges };
  Kind kind = Kind::Ring;
  int n = 5;
  double ring_w = 0.3;
  std::vector<std::pair<int, int>> edges;
  WeightRule rule = WeightRule::Metropolis;
  double uniform_w = 0.0;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::LeastSquares;
  int dim = 10;
  // synthetic data generation
  std::uint64_t generator_seed = 7;
  double spread = 1.0;
  double offset = 0.5;
  enum class QuadShape { Identity, RankOne };
  QuadShape quad_shape = QuadShape::Identity;
  // explicit per-agent targets override the generator when nonempty
  std::vector<Vector> targets;
  // noise: mean estimation sigma^2 / quadratic per-coordinate noise std /
  // least squares label noise variance
  double sigma = 1.0;
  double label_noise_var = 0.0;
  int batch = 1;
};

struct PaymentSpec {
  enum class Mode { Off, Constant, Preset, Theoretical };
  Mode mode = Mode::Off;
  double constant_c = 0.0;
  double preset_c0 = 1e-6;
  bool per_edge_degree = false;
};

// A named, reproducible experiment definition. Exactly the agents listed in
// `deviators` (group A) run `deviator_policy`; everyone else is truthful.
struct Scenario {
  std::string name = "unnamed";
  TopologySpec topology;
  ProblemSpec problem;
  ScheduleParams schedule;
  PaymentSpec payment;
  RewardFunction::Kind reward = RewardFunction::Kind::Linear;
  InitSpec::Kind init_kind = InitSpec::Kind::Gaussian;
  double init_scale = 1.0;
  std::vector<int> deviators;
  StrategyPolicy deviator_policy;
  bool exact_gradients = false;
  int seeds = 10;
  std::uint64_t master_seed = 42;
};

ProblemInstance build_problem(const ProblemSpec& spec);
CouplingMatrix build_topology(const TopologySpec& spec);

struct ResolvedScenario {
  Scenario scenario;
  CouplingMatrix coupling;
  ProblemInstance problem;
  Vector optimum;
  RewardFunction reward;

  // Payment coefficient schedule for a given horizon (the theoretical mode is
  // horizon-dependent). Off-mode returns constant 0.
  PaymentCoefficientSchedule payment_schedule(long horizon) const;
  // Policies per agent: scenario deviators get `deviator_policy` (must be
  // resolved), everyone else truthful.
  std::vector<StrategyPolicy> policies() const;
  SimConfig sim_config() const;
};

ResolvedScenario resolve(const Scenario& s);

struct ScenarioRunResult {
  RunMetrics metrics;
  PaymentLedger ledger;
  std::vector<std::vector<double>> deltas;  // [t][agent]
  std::vector<Vector> final_theta;
};

// One full run: engine + payment settlement + metrics assembly.
ScenarioRunResult run_scenario(const ResolvedScenario& rs, std::uint64_t seed,
                               bool record_ledger = true);

// Same, but with agent `agent` running `policy_override` (nullptr = truthful)
// instead of its scenario policy; every other agent truthful. Used by paired
// deviation comparisons.
ScenarioRunResult run_scenario_with_policy(const ResolvedScenario& rs, int agent,
                                           const StrategyPolicy* policy_override,
                                           std::uint64_t seed, bool record_ledger = true);

// Net utility of one agent from a finished run.
double agent_net_utility(const ResolvedScenario& rs, const ScenarioRunResult& result,
                         int agent);

// Utility of `agent` truncated to horizon h <= run horizon: terminal reward at
// f_i(theta_{i,h+1}) minus payments for t <= h re-settled under the
// horizon-h coefficient schedule from the recorded second differences.
double utility_at_horizon(const ResolvedScenario& rs, const ScenarioRunResult& result,
                          int agent, long h);

// Convenience wrapper for paired comparisons: utility of `deviator` when it
// runs `deviation` (nullptr = truthful) and everyone else is truthful.
double deviator_utility(const ResolvedScenario& rs, int deviator,
                        const StrategyPolicy* deviation, std::uint64_t seed);

}  // namespace dsgdm
