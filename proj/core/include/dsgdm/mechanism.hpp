#pragma once

#include <iosfwd>
#include <vector>

#include "dsgdm/problems.hpp"
#include "dsgdm/schedule.hpp"
#include "dsgdm/topology.hpp"

namespace dsgdm {

// Three-entry parameter window of one agent at iteration t.
struct Window {
  Vector prev;  // theta_{t-1}
  Vector curr;  // theta_t
  Vector next;  // theta_{t+1}
};

// ||next - 2 curr + prev||^2, the squared model-parameter increment compared
// pairwise by the payment rule.
double second_difference(const Vector& next, const Vector& curr, const Vector& prev);

// Transfer from i to j: C * (delta_i - delta_j). Positive means i pays j.
double pairwise_payment(double delta_i, double delta_j, double c);

// Iteration-dependent payment scale C_t.
//   theoretical: 4 L_R sqrt(6 d_{t+1 -> T+1}) / (deg * lambda_t * kappa_t * delta)
//   preset:      c0 * kappa_t^2 / (delta^2 * (t+1)^(-2v))
//   constant:    C
// The theoretical form needs the horizon up front and emits C_T = 0 at the
// final round (the carry-over factor vanishes there).
class PaymentCoefficientSchedule {
 public:
  enum class Mode { Theoretical, Preset, Constant };

  static PaymentCoefficientSchedule theoretical(double reward_lipschitz,
                                                double smoothness, double rho,
                                                int degree, ScheduleParams p);
  static PaymentCoefficientSchedule preset(double c0, ScheduleParams p);
  static PaymentCoefficientSchedule constant(double c);

  double coefficient(long t) const;
  // Same formula with the degree constant replaced; used by the per-edge
  // degree variant. Theoretical mode only.
  double coefficient_for_degree(long t, int degree) const;
  Mode mode() const { return mode_; }
  long horizon() const { return params_.horizon; }

 private:
  PaymentCoefficientSchedule() = default;
  Mode mode_ = Mode::Constant;
  double reward_lipschitz_ = 1.0;
  double smoothness_ = 0.0;
  double rho_ = 0.0;
  int degree_ = 1;
  double c0_ = 0.0;
  double constant_ = 0.0;
  ScheduleParams params_;
};

struct LedgerEntry {
  long t;
  int from;  // i of the stored direction
  int to;    // j
  double transfer;  // positive: `from` pays `to`
  double coefficient;
  double delta_from;
  double delta_to;
};

// Per-iteration pairwise transfer records. Each undirected edge is stored
// once; the counterparty's view is the exact negation, which is what makes
// budget balance exact rather than approximate.
class PaymentLedger {
 public:
  void record(LedgerEntry e);
  const std::vector<LedgerEntry>& entries() const { return entries_; }

  // P_{i,t}: total paid by agent i at iteration t (negative = received).
  double agent_total(long t, int agent) const;
  // Per-agent totals for one iteration.
  std::vector<double> agent_totals(long t, int n_agents) const;
  // Per-agent totals summed over all iterations.
  std::vector<double> cumulative_totals(int n_agents) const;
  // Sum over all transfers at iteration t, accumulated edge by edge as
  // transfer + (-transfer); exactly zero by construction.
  double iteration_sum(long t) const;
  long max_t() const;

  // CSV columns: t,i,j,transfer,C_t,delta_i,delta_j
  void write_csv(std::ostream& out) const;

 private:
  std::vector<LedgerEntry> entries_;  // append-only, grouped by t
};

// Settles one iteration: computes each edge's transfer from the two second
// differences, appends to the ledger (if given), and returns per-agent totals.
// `coefficient` must already be the scalar C_t; the per-edge degree variant
// passes a schedule instead via settle_round.
std::vector<double> settle_deltas(const std::vector<double>& deltas, const Graph& g,
                                  double coefficient, long t, PaymentLedger* ledger);

// Full settlement from parameter windows. If per_edge_degree is set the
// theoretical coefficient is evaluated with min(deg(i), deg(j)) per edge,
// which keeps transfers antisymmetric on irregular graphs.
std::vector<double> settle_round(const std::vector<Window>& windows, const Graph& g,
                                 const PaymentCoefficientSchedule& schedule, long t,
                                 PaymentLedger* ledger, bool per_edge_degree = false);

// Both agents recompute the transfer from their own copies of the shared
// windows; true iff the two values agree bit-exactly.
struct PairWindows {
  Window of_i;
  Window of_j;
};
bool cross_verify(const PairWindows& view_of_i, const PairWindows& view_of_j,
                  double coefficient);

}  // namespace dsgdm
