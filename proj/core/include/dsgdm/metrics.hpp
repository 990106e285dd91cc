#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dsgdm/engine.hpp"
#include "dsgdm/mechanism.hpp"
#include "dsgdm/problems.hpp"

namespace dsgdm {

// Terminal reward as a function of the final objective value.
//   linear:       R(f) = -f                     (Lipschitz 1, normalized)
//   sigmoid_like: R(f) = (1 + exp(-1/f))^(-1)   (defined for f > 0)
// The sigmoid-like formula is implemented exactly as defined; note that it is
// increasing in f, so the linear reward is the default everywhere.
struct RewardFunction {
  enum class Kind { Linear, SigmoidLike };
  Kind kind = Kind::Linear;

  double operator()(double f) const;
  // Bound on |dR/df| used by the theoretical payment coefficient.
  double lipschitz_bound() const;
};

// U_i = R_i(f_i(theta_{i,T+1})) - sum_t P_{i,t}.
double net_utility(const RewardFunction& reward, double f_final,
                   const std::vector<double>& payments);

// Least-squares slope of log(value_t) against log(t+1) over t in
// [t_lo, t_hi]. Requires positive values in the window and t_hi/t_lo >= 10.
double convergence_slope(const std::vector<double>& values, long t_lo, long t_hi);

// Per-run time series and terminal quantities.
struct RunMetrics {
  long horizon = 0;
  int n_agents = 0;
  // [t][agent], t = 0..T: squared distance ||theta_{i,t} - target||^2
  std::vector<std::vector<double>> dist2;
  // [t][agent]: F(theta_{i,t}) - F(theta*)
  std::vector<std::vector<double>> objective_gap;
  // [t]: sum_i ||theta_{i,t} - mean_t||^2
  std::vector<double> consensus;
  // [t][agent]: f_i(theta_{i,t}), t = 0..T+1 (includes the terminal round)
  std::vector<std::vector<double>> f_values;
  // [t][agent]: P_{i,t} (zeros when no payments were settled)
  std::vector<std::vector<double>> payments;
  std::vector<double> f_final;        // f_i(theta_{i,T+1})
  std::vector<double> rewards;        // R_i(f_final_i)
  std::vector<double> net_utilities;  // rewards - cumulative payments

  double mean_dist2_at(long t) const;
  double mean_objective_gap_at(long t) const;
};

// Distance / gap / f-value collection. The distance target is usually the
// global optimum; deviated scenarios may point it at the deviated optimum.
class MetricsCollector : public RoundObserver {
 public:
  MetricsCollector(const ProblemInstance& problem, Vector distance_target,
                   RewardFunction reward);

  void on_round(const RoundView& view) override;
  void on_finish(const std::vector<Vector>& theta_final) override;

  // Fills rewards/net_utilities from the collected payments and returns the
  // finished metrics. Call after the run.
  RunMetrics take();
  // Attach per-round per-agent payments (same layout as deltas).
  void set_payments(std::vector<std::vector<double>> payments);

 private:
  const ProblemInstance* problem_;
  Vector target_;
  RewardFunction reward_;
  double objective_at_target_;
  RunMetrics data_;
  bool finished_ = false;
};

// Settles the payment mechanism round by round: records second differences,
// per-agent totals, and (optionally) the full pairwise ledger.
class PaymentCollector : public RoundObserver {
 public:
  PaymentCollector(Graph graph, PaymentCoefficientSchedule schedule,
                   bool per_edge_degree = false, bool record_ledger = true);

  void on_round(const RoundView& view) override;

  const PaymentLedger& ledger() const { return ledger_; }
  PaymentLedger take_ledger() { return std::move(ledger_); }
  const std::vector<std::vector<double>>& per_round_totals() const { return totals_; }
  const std::vector<std::vector<double>>& deltas() const { return deltas_; }
  std::vector<double> cumulative_totals() const;

 private:
  Graph graph_;
  PaymentCoefficientSchedule schedule_;
  bool per_edge_degree_;
  bool record_ledger_;
  PaymentLedger ledger_;
  std::vector<std::vector<double>> totals_;  // [t][agent]
  std::vector<std::vector<double>> deltas_;  // [t][agent]
};

// Realized manipulation magnitude ||m_{i,t} - g_{i,t}|| per round for one
// agent; comparable against the kappa_t * delta envelope.
class ManipulationTraceCollector : public RoundObserver {
 public:
  explicit ManipulationTraceCollector(int agent) : agent_(agent) {}
  void on_round(const RoundView& view) override;
  const std::vector<double>& trace() const { return trace_; }

 private:
  int agent_;
  std::vector<double> trace_;
};

// ---------------------------------------------------------------------------
// Scenario-level comparisons (implemented with the scenario runner).
// ---------------------------------------------------------------------------

struct Scenario;

// Mean over paired seeds of U(deviation) - U(truthful) for `deviator`, all
// other agents truthful. Positive values lower-bound the empirical epsilon.
double ic_gap(const Scenario& scenario, int deviator, const StrategyPolicy& deviation,
              const std::vector<std::uint64_t>& seeds);

// ic_gap evaluated at increasing horizons over a shared trajectory prefix
// (payments re-settled per horizon, which matters for the horizon-dependent
// theoretical coefficient).
std::vector<std::pair<long, double>> cumulative_gain_curve(
    const Scenario& scenario, int deviator, const StrategyPolicy& deviation,
    const std::vector<long>& horizons, const std::vector<std::uint64_t>& seeds);

}  // namespace dsgdm
