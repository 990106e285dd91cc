#include "dsgdm/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dsgdm/errors.hpp"

namespace dsgdm {

double second_difference(const Vector& next, const Vector& curr, const Vector& prev) {
  if (next.size() != curr.size() || curr.size() != prev.size())
    throw ConfigError("window dimensions mismatch");
  return (next - 2.0 * curr + prev).squaredNorm();
}

double pairwise_payment(double delta_i, double delta_j, double c) {
  if (delta_i < 0.0 || delta_j < 0.0) throw ConfigError("second differences must be >= 0");
  if (c < 0.0) throw ConfigError("payment coefficient must be >= 0");
  return c * (delta_i - delta_j);
}

PaymentCoefficientSchedule PaymentCoefficientSchedule::theoretical(
    double reward_lipschitz, double smoothness, double rho, int degree,
    ScheduleParams p) {
  p.validate_decay_window();
  if (!(reward_lipschitz > 0.0)) throw ConfigError("reward Lipschitz constant must be positive");
  if (!(smoothness > 0.0)) throw ConfigError("smoothness constant must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must lie in [0, 1)");
  if (degree < 1) throw ConfigError("degree must be >= 1");
  if (p.horizon < 0) throw ConfigError("theoretical coefficient needs the horizon");
  PaymentCoefficientSchedule s;
  s.mode_ = Mode::Theoretical;
  s.reward_lipschitz_ = reward_lipschitz;
  s.smoothness_ = smoothness;
  s.rho_ = rho;
  s.degree_ = degree;
  s.params_ = p;
  return s;
}

PaymentCoefficientSchedule PaymentCoefficientSchedule::preset(double c0,
                                                              ScheduleParams p) {
  p.validate_basic();
  if (!(c0 >= 0.0)) throw ConfigError("preset scale must be >= 0");
  PaymentCoefficientSchedule s;
  s.mode_ = Mode::Preset;
  s.c0_ = c0;
  s.params_ = p;
  return s;
}

PaymentCoefficientSchedule PaymentCoefficientSchedule::constant(double c) {
  if (!(c >= 0.0)) throw ConfigError("constant coefficient must be >= 0");
  PaymentCoefficientSchedule s;
  s.mode_ = Mode::Constant;
  s.constant_ = c;
  return s;
}

double PaymentCoefficientSchedule::coefficient(long t) const {
  return coefficient_for_degree(t, degree_);
}

double PaymentCoefficientSchedule::coefficient_for_degree(long t, int degree) const {
  if (t < 0) throw ConfigError("iteration must be >= 0");
  switch (mode_) {
    case Mode::Constant:
      return constant_;
    case Mode::Preset: {
      const double k = kappa(params_, t);
      const double growth = std::pow(static_cast<double>(t + 1), -2.0 * params_.v);
      return c0_ * k * k / (params_.delta * params_.delta * growth);
    }
    case Mode::Theoretical: {
      // Beyond the declared horizon the carry-over factor is zero; the final
      // round itself also gets C_T = 0.
      const long T = params_.horizon;
      if (t >= T) return 0.0;
      const double d = sensitivity_factor(params_, smoothness_, rho_, t + 1, T + 1);
      return 4.0 * reward_lipschitz_ * std::sqrt(6.0 * d) /
             (degree * stepsize(params_, t) * kappa(params_, t) * params_.delta);
    }
  }
  throw ConfigError("unreachable coefficient mode");
}

void PaymentLedger::record(LedgerEntry e) {
  if (e.transfer != pairwise_payment(e.delta_from, e.delta_to, e.coefficient))
    throw ConfigError("ledger entry inconsistent with its deltas");
  entries_.push_back(e);
}

double PaymentLedger::agent_total(long t, int agent) const {
  double total = 0.0;
  for (const auto& e : entries_) {
    if (e.t != t) continue;
    if (e.from == agent) total += e.transfer;
    if (e.to == agent) total -= e.transfer;
  }
  return total;
}

std::vector<double> PaymentLedger::agent_totals(long t, int n_agents) const {
  std::vector<double> totals(n_agents, 0.0);
  for (const auto& e : entries_) {
    if (e.t != t) continue;
    totals[e.from] += e.transfer;
    totals[e.to] -= e.transfer;
  }
  return totals;
}

std::vector<double> PaymentLedger::cumulative_totals(int n_agents) const {
  std::vector<double> totals(n_agents, 0.0);
  for (const auto& e : entries_) {
    totals[e.from] += e.transfer;
    totals[e.to] -= e.transfer;
  }
  return totals;
}

double PaymentLedger::iteration_sum(long t) const {
  double sum = 0.0;
  for (const auto& e : entries_)
    if (e.t == t) sum += e.transfer + (-e.transfer);
  return sum;
}

long PaymentLedger::max_t() const {
  long m = -1;
  for (const auto& e : entries_) m = std::max(m, e.t);
  return m;
}

void PaymentLedger::write_csv(std::ostream& out) const {
  out << "t,i,j,transfer,C_t,delta_i,delta_j\n";
  char buf[128];
  for (const auto& e : entries_) {
    out << e.t << ',' << e.from << ',' << e.to;
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g", e.transfer,
                  e.coefficient, e.delta_from, e.delta_to);
    out << buf << '\n';
  }
}

std::vector<double> settle_deltas(const std::vector<double>& deltas, const Graph& g,
                                  double coefficient, long t, PaymentLedger* ledger) {
  if (static_cast<int>(deltas.size()) != g.n_agents())
    throw ConfigError("one second difference per agent required");
  std::vector<double> totals(deltas.size(), 0.0);
  for (const auto& [i, j] : g.edges()) {
    const double transfer = pairwise_payment(deltas[i], deltas[j], coefficient);
    totals[i] += transfer;
    totals[j] -= transfer;
    if (ledger) ledger->record({t, i, j, transfer, coefficient, deltas[i], deltas[j]});
  }
  return totals;
}

std::vector<double> settle_round(const std::vector<Window>& windows, const Graph& g,
                                 const PaymentCoefficientSchedule& schedule, long t,
                                 PaymentLedger* ledger, bool per_edge_degree) {
  if (static_cast<int>(windows.size()) != g.n_agents())
    throw ConfigError("one window per agent required");
  std::vector<double> deltas(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i)
    deltas[i] = second_difference(windows[i].next, windows[i].curr, windows[i].prev);

  if (!per_edge_degree || schedule.mode() != PaymentCoefficientSchedule::Mode::Theoretical)
    return settle_deltas(deltas, g, schedule.coefficient(t), t, ledger);

  const auto& deg = g.degrees();
  std::vector<double> totals(windows.size(), 0.0);
  for (const auto& [i, j] : g.edges()) {
    const double c = schedule.coefficient_for_degree(t, std::min(deg[i], deg[j]));
    const double transfer = pairwise_payment(deltas[i], deltas[j], c);
    totals[i] += transfer;
    totals[j] -= transfer;
    if (ledger) ledger->record({t, i, j, transfer, c, deltas[i], deltas[j]});
  }
  return totals;
}

bool cross_verify(const PairWindows& view_of_i, const PairWindows& view_of_j,
                  double coefficient) {
  const double di_i = second_difference(view_of_i.of_i.next, view_of_i.of_i.curr,
                                        view_of_i.of_i.prev);
  const double dj_i = second_difference(view_of_i.of_j.next, view_of_i.of_j.curr,
                                        view_of_i.of_j.prev);
  const double di_j = second_difference(view_of_j.of_i.next, view_of_j.of_i.curr,
                                        view_of_j.of_i.prev);
  const double dj_j = second_difference(view_of_j.of_j.next, view_of_j.of_j.curr,
                                        view_of_j.of_j.prev);
  const double from_i = pairwise_payment(di_i, dj_i, coefficient);
  const double from_j = pairwise_payment(di_j, dj_j, coefficient);
  return from_i == from_j;  // bit-exact agreement required
}

}  // namespace dsgdm
