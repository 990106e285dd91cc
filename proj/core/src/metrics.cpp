#include "dsgdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsgdm/errors.hpp"
#include "dsgdm/scenario.hpp"

namespace dsgdm {

double RewardFunction::operator()(double f) const {
  switch (kind) {
    case Kind::Linear:
      return -f;
    case Kind::SigmoidLike:
      if (!(f > 0.0))
        throw ConfigError("sigmoid-like reward needs f > 0; got " + std::to_string(f));
      return 1.0 / (1.0 + std::exp(-1.0 / f));
  }
  throw ConfigError("unreachable reward kind");
}

double RewardFunction::lipschitz_bound() const {
  if (kind == Kind::Linear) return 1.0;
  // max over f > 0 of |dR/df| = u^2 e^-u / (1 + e^-u)^2 with u = 1/f;
  // single interior maximum, found by scan + refinement.
  auto g = [](double u) {
    const double e = std::exp(-u);
    return u * u * e / ((1.0 + e) * (1.0 + e));
  };
  double best_u = 1.0, best = g(1.0);
  for (double u = 0.05; u < 20.0; u += 0.05) {
    const double v = g(u);
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  double lo = best_u - 0.05, hi = best_u + 0.05;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (g(m1) < g(m2))
      lo = m1;
    else
      hi = m2;
  }
  return g(0.5 * (lo + hi));
}

double net_utility(const RewardFunction& reward, double f_final,
                   const std::vector<double>& payments) {
  double sum = 0.0;
  for (double p : payments) sum += p;
  return reward(f_final) - sum;
}

double convergence_slope(const std::vector<double>& values, long t_lo, long t_hi) {
  if (t_lo < 0 || t_hi >= static_cast<long>(values.size()) || t_lo >= t_hi)
    throw ConfigError("slope window out of range");
  if (t_lo > 0 && static_cast<double>(t_hi) / t_lo < 10.0)
    throw ConfigError("slope window must span at least a decade");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long count = 0;
  for (long t = t_lo; t <= t_hi; ++t) {
    const double v = values[t];
    if (!(v > 0.0))
      throw ConfigError("nonpositive value in slope window at t=" + std::to_string(t));
    const double x = std::log(static_cast<double>(t + 1));
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double n = static_cast<double>(count);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double RunMetrics::mean_dist2_at(long t) const {
  const auto& row = dist2.at(t);
  double s = 0;
  for (double v : row) s += v;
  return s / row.size();
}

double RunMetrics::mean_objective_gap_at(long t) const {
  const auto& row = objective_gap.at(t);
  double s = 0;
  for (double v : row) s += v;
  return s / row.size();
}

MetricsCollector::MetricsCollector(const ProblemInstance& problem, Vector distance_target,
                                   RewardFunction reward)
    : problem_(&problem),
      target_(std::move(distance_target)),
      reward_(reward),
      objective_at_target_(problem.objective(problem.global_optimum())) {
  data_.n_agents = problem.n_agents();
}

void MetricsCollector::on_round(const RoundView& view) {
  const int n = data_.n_agents;
  std::vector<double> d2(n), gap(n), fv(n);
  Vector mean = Vector::Zero(view.theta_curr.front().size());
  for (int i = 0; i < n; ++i) mean += view.theta_curr[i];
  mean /= n;
  double cons = 0.0;
  for (int i = 0; i < n; ++i) {
    d2[i] = (view.theta_curr[i] - target_).squaredNorm();
    gap[i] = problem_->objective(view.theta_curr[i]) - objective_at_target_;
    fv[i] = problem_->f(i, view.theta_curr[i]);
    cons += (view.theta_curr[i] - mean).squaredNorm();
  }
  data_.dist2.push_back(std::move(d2));
  data_.objective_gap.push_back(std::move(gap));
  data_.f_values.push_back(std::move(fv));
  data_.consensus.push_back(cons);
  data_.horizon = view.t;
}

void MetricsCollector::on_finish(const std::vector<Vector>& theta_final) {
  const int n = data_.n_agents;
  std::vector<double> fv(n);
  data_.f_final.resize(n);
  data_.rewards.resize(n);
  for (int i = 0; i < n; ++i) {
    fv[i] = problem_->f(i, theta_final[i]);
    data_.f_final[i] = fv[i];
    data_.rewards[i] = reward_(fv[i]);
  }
  data_.f_values.push_back(std::move(fv));
  finished_ = true;
}

void MetricsCollector::set_payments(std::vector<std::vector<double>> payments) {
  data_.payments = std::move(payments);
}

RunMetrics MetricsCollector::take() {
  if (!finished_) throw ConfigError("metrics requested before the run finished");
  const int n = data_.n_agents;
  data_.net_utilities.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double paid = 0.0;
    for (const auto& row : data_.payments) paid += row[i];
    data_.net_utilities[i] = data_.rewards[i] - paid;
  }
  return std::move(data_);
}

PaymentCollector::PaymentCollector(Graph graph, PaymentCoefficientSchedule schedule,
                                   bool per_edge_degree, bool record_ledger)
    : graph_(std::move(graph)),
      schedule_(std::move(schedule)),
      per_edge_degree_(per_edge_degree),
      record_ledger_(record_ledger) {}

void PaymentCollector::on_round(const RoundView& view) {
  const int n = graph_.n_agents();
  std::vector<double> deltas(n);
  for (int i = 0; i < n; ++i)
    deltas[i] =
        second_difference(view.theta_next[i], view.theta_curr[i], view.theta_prev[i]);

  std::vector<double> totals;
  if (per_edge_degree_ &&
      schedule_.mode() == PaymentCoefficientSchedule::Mode::Theoretical) {
    totals.assign(n, 0.0);
    const auto& deg = graph_.degrees();
    for (const auto& [i, j] : graph_.edges()) {
      const double c = schedule_.coefficient_for_degree(view.t, std::min(deg[i], deg[j]));
      const double transfer = pairwise_payment(deltas[i], deltas[j], c);
      totals[i] += transfer;
      totals[j] -= transfer;
      if (record_ledger_)
        ledger_.record({view.t, i, j, transfer, c, deltas[i], deltas[j]});
    }
  } else {
    totals = settle_deltas(deltas, graph_, schedule_.coefficient(view.t), view.t,
                           record_ledger_ ? &ledger_ : nullptr);
  }
  totals_.push_back(std::move(totals));
  deltas_.push_back(std::move(deltas));
}

std::vector<double> PaymentCollector::cumulative_totals() const {
  std::vector<double> out(graph_.n_agents(), 0.0);
  for (const auto& row : totals_)
    for (std::size_t i = 0; i < row.size(); ++i) out[i] += row[i];
  return out;
}

void ManipulationTraceCollector::on_round(const RoundView& view) {
  trace_.push_back(
      (view.manipulated_gradients[agent_] - view.true_gradients[agent_]).norm());
}

double ic_gap(const Scenario& scenario, int deviator, const StrategyPolicy& deviation,
              const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("ic_gap needs at least one seed");
  ResolvedScenario rs = resolve(scenario);
  double sum = 0.0;
  for (auto seed : seeds) {
    const double u_dev = deviator_utility(rs, deviator, &deviation, seed);
    const double u_truth = deviator_utility(rs, deviator, nullptr, seed);
    sum += u_dev - u_truth;
  }
  return sum / seeds.size();
}

std::vector<std::pair<long, double>> cumulative_gain_curve(
    const Scenario& scenario, int deviator, const StrategyPolicy& deviation,
    const std::vector<long>& horizons, const std::vector<std::uint64_t>& seeds) {
  if (horizons.empty()) throw ConfigError("gain curve needs horizons");
  for (std::size_t k = 1; k < horizons.size(); ++k)
    if (horizons[k] <= horizons[k - 1]) throw ConfigError("horizons must increase");
  if (seeds.empty()) throw ConfigError("gain curve needs seeds");

  Scenario widest = scenario;
  widest.schedule.horizon = horizons.back();
  ResolvedScenario rs = resolve(widest);

  std::vector<double> gains(horizons.size(), 0.0);
  for (auto seed : seeds) {
    ScenarioRunResult dev = run_scenario_with_policy(rs, deviator, &deviation, seed,
                                                     /*record_ledger=*/false);
    ScenarioRunResult truth = run_scenario_with_policy(rs, deviator, nullptr, seed,
                                                       /*record_ledger=*/false);
    for (std::size_t k = 0; k < horizons.size(); ++k) {
      const long h = horizons[k];
      const double u_dev = utility_at_horizon(rs, dev, deviator, h);
      const double u_truth = utility_at_horizon(rs, truth, deviator, h);
      gains[k] += u_dev - u_truth;
    }
  }
  std::vector<std::pair<long, double>> out;
  for (std::size_t k = 0; k < horizons.size(); ++k)
    out.emplace_back(horizons[k], gains[k] / seeds.size());
  return out;
}

}  // namespace dsgdm
