#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsgdm/problems.hpp"
#include "dsgdm/schedule.hpp"
#include "dsgdm/strategy.hpp"
#include "dsgdm/topology.hpp"

namespace dsgdm {

struct InitSpec {
  enum class Kind { Gaussian, Zeros, Explicit };
  Kind kind = Kind::Gaussian;
  double scale = 1.0;
  std::vector<Vector> values;  // Explicit only

  static InitSpec gaussian(double scale = 1.0) { return {Kind::Gaussian, scale, {}}; }
  static InitSpec zeros() { return {Kind::Zeros, 0.0, {}}; }
  static InitSpec explicit_values(std::vector<Vector> v) {
    return {Kind::Explicit, 0.0, std::move(v)};
  }
};

// Everything needed for one synchronous run. Policies must be resolved
// (no pending best-response searches).
struct SimConfig {
  CouplingMatrix coupling;
  ProblemInstance problem;
  std::vector<StrategyPolicy> policies;
  ScheduleParams schedule;
  InitSpec init;
  bool exact_gradients = false;

  long horizon() const { return schedule.horizon; }
  void validate() const;
};

// One completed round, exposed to consumers before the window shifts. All
// references point at engine-owned state valid only during the callback.
struct RoundView {
  long t;
  double lambda;
  const std::vector<Vector>& theta_prev;             // theta_{t-1}
  const std::vector<Vector>& theta_curr;             // theta_t
  const std::vector<Vector>& theta_next;             // theta_{t+1}
  const std::vector<Vector>& true_gradients;         // g_{i,t}
  const std::vector<Vector>& manipulated_gradients;  // m_{i,t}
  const std::vector<Action>& actions;
};

class RoundObserver {
 public:
  virtual ~RoundObserver() = default;
  virtual void on_round(const RoundView& view) = 0;
  virtual void on_finish(const std::vector<Vector>& theta_final) { (void)theta_final; }
};

// lambda_t is declared in schedule.hpp; re-exported here because the update
// rule owns it conceptually.
using dsgdm::stepsize;

// One synchronous update for all agents; reads only theta_curr, so agent
// iteration order cannot matter. next_i = sum_j w_ij theta_j - lambda m_i.
std::vector<Vector> dsgd_round(const std::vector<Vector>& theta_curr,
                               const CouplingMatrix& coupling,
                               const std::vector<Vector>& manipulated_gradients,
                               double lambda);

struct RunOutput {
  std::vector<Vector> final_theta;  // theta_{i,T+1}
  long rounds = 0;
};

// Runs rounds t = 0..T from theta_{i,0} (drawn or given per `init`), with
// theta_{i,-1} = 0. Deterministic given the master seed. Observers see every
// round in order. Aborts with DivergenceError if parameters blow up.
RunOutput run(const SimConfig& cfg, std::uint64_t master_seed,
              std::span<RoundObserver* const> observers = {});

// Captures full round data; for small horizons, dumps, and property tests.
class TrajectoryRecorder : public RoundObserver {
 public:
  struct Round {
    long t;
    double lambda;
    std::vector<Vector> theta_next;
    std::vector<Vector> true_gradients;
    std::vector<Vector> manipulated_gradients;
    std::vector<Action> actions;
  };

  void on_round(const RoundView& view) override;
  void on_finish(const std::vector<Vector>& theta_final) override;

  const std::vector<Round>& rounds() const { return rounds_; }
  const std::vector<Vector>& initial_theta() const { return initial_; }
  // theta_{i,t} for t = 0..T+1
  const Vector& theta_at(long t, int agent) const;

 private:
  std::vector<Round> rounds_;
  std::vector<Vector> initial_;
  bool saw_first_ = false;
};

// ---------------------------------------------------------------------------
// Parameter-manipulation equivalence.
//
// A deviator that shares alpha_hat(theta) instead of theta induces the same
// observable trajectories as a gradient manipulation in the unmodified
// update rule. The induced manipulated gradient at round t is
//
//   m_t = g_t - (pert_{t+1} - w_dd * pert_t) / lambda_t,
//   pert_t = alpha_hat(theta_{d,t}) - theta_{d,t},
//
// i.e. the shared-parameter perturbation converted into gradient units.
// ---------------------------------------------------------------------------

struct AffineMap {
  double scale = 1.0;
  Vector offset;  // empty = zero offset

  Vector operator()(const Vector& x) const {
    if (offset.size() == 0) return scale * x;
    return scale * x + offset;
  }
  bool is_identity() const { return scale == 1.0 && offset.size() == 0; }
};

struct ParameterManipulationRun {
  int deviator = 0;
  AffineMap manipulation;
  // Observable (shared) trajectories, [t][agent], t = 0..T+1. The deviator's
  // entries are the manipulated values its neighbors actually received.
  std::vector<std::vector<Vector>> observed;
  // The deviator's private true states theta_{d,t}, t = 0..T+1.
  std::vector<Vector> deviator_true;
  // The deviator's true gradient draws g_d(theta_{d,t}), t = 0..T.
  std::vector<Vector> deviator_gradients;
};

// Runs Algorithm-style rounds where `deviator` keeps its true state but sends
// alpha_hat(state) to its neighbors; everyone's gradient use is truthful.
// All policies in cfg must be truthful.
ParameterManipulationRun run_with_parameter_manipulation(const SimConfig& cfg,
                                                         int deviator,
                                                         const AffineMap& manipulation,
                                                         std::uint64_t master_seed);

struct EquivalenceReport {
  double max_coordinate_error = 0.0;
  std::vector<std::vector<Vector>> replayed;  // [t][agent], t = 0..T+1
};

// Constructs the induced gradient manipulation from the recorded run, replays
// the unmodified update rule under it (same master seed), and reports the
// largest per-coordinate deviation from the observed trajectories.
EquivalenceReport manipulate_parameters_equivalent(const ParameterManipulationRun& rec,
                                                   const SimConfig& cfg,
                                                   std::uint64_t master_seed);

}  // namespace dsgdm
