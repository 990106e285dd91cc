#include "dsgdm/engine.hpp"

#include <cmath>
#include <string>

#include "dsgdm/errors.hpp"

namespace dsgdm {

namespace {

constexpr double kDivergenceBound = 1e12;

void check_trajectory_sane(const std::vector<Vector>& thetas, long t) {
  for (const auto& th : thetas) {
    if (!th.allFinite())
      throw DivergenceError("non-finite parameter at iteration " + std::to_string(t));
    if (th.cwiseAbs().maxCoeff() > kDivergenceBound)
      throw DivergenceError("parameter norm exceeded " +
                            std::to_string(kDivergenceBound) + " at iteration " +
                            std::to_string(t));
  }
}

std::vector<Vector> draw_initial(const SimConfig& cfg, std::uint64_t master_seed) {
  const int n = cfg.problem.n_agents();
  const int d = cfg.problem.dim();
  std::vector<Vector> theta0;
  theta0.reserve(n);
  switch (cfg.init.kind) {
    case InitSpec::Kind::Zeros:
      for (int i = 0; i < n; ++i) theta0.push_back(Vector::Zero(d));
      break;
    case InitSpec::Kind::Gaussian:
      for (int i = 0; i < n; ++i) {
        RngStream s(derive_stream_key(master_seed, i, StreamPurpose::Init));
        theta0.push_back(cfg.init.scale * s.normal_vector(d));
      }
      break;
    case InitSpec::Kind::Explicit:
      if (static_cast<int>(cfg.init.values.size()) != n)
        throw ConfigError("explicit initialization needs one vector per agent");
      for (const auto& v : cfg.init.values) {
        if (v.size() != d) throw ConfigError("explicit initialization dimension mismatch");
        theta0.push_back(v);
      }
      break;
  }
  return theta0;
}

}  // namespace

void SimConfig::validate() const {
  schedule.validate_basic();
  if (coupling.size() != problem.n_agents())
    throw ConfigError("coupling matrix size does not match the problem");
  if (static_cast<int>(policies.size()) != problem.n_agents())
    throw ConfigError("one policy per agent required");
  for (const auto& p : policies) {
    if (!p.is_resolved())
      throw ConfigError("best response policy must be resolved before the run");
    p.validate(schedule.horizon);
  }
}

std::vector<Vector> dsgd_round(const std::vector<Vector>& theta_curr,
                               const CouplingMatrix& coupling,
                               const std::vector<Vector>& manipulated_gradients,
                               double lambda) {
  const int n = static_cast<int>(theta_curr.size());
  const auto& w = coupling.weights();
  std::vector<Vector> next(n);
  for (int i = 0; i < n; ++i) {
    Vector acc = Vector::Zero(theta_curr[i].size());
    for (int j = 0; j < n; ++j) acc += w(i, j) * theta_curr[j];
    acc -= lambda * manipulated_gradients[i];
    next[i] = std::move(acc);
  }
  return next;
}

RunOutput run(const SimConfig& cfg, std::uint64_t master_seed,
              std::span<RoundObserver* const> observers) {
  cfg.validate();
  const int n = cfg.problem.n_agents();
  const long horizon = cfg.schedule.horizon;

  std::vector<RngStream> gradient_streams;
  std::vector<RngStream> action_streams;
  gradient_streams.reserve(n);
  action_streams.reserve(n);
  for (int i = 0; i < n; ++i) {
    gradient_streams.emplace_back(derive_stream_key(master_seed, i, StreamPurpose::Gradient));
    action_streams.emplace_back(derive_stream_key(master_seed, i, StreamPurpose::ActionNoise));
  }

  std::vector<Vector> prev(n, Vector::Zero(cfg.problem.dim()));  // theta_{-1} = 0
  std::vector<Vector> curr = draw_initial(cfg, master_seed);
  std::vector<Vector> next(n);
  std::vector<Vector> grads(n);
  std::vector<Vector> manips(n);
  std::vector<Action> actions(n);

  for (long t = 0; t <= horizon; ++t) {
    const double lambda = stepsize(cfg.schedule, t);
    for (int i = 0; i < n; ++i) {
      grads[i] = cfg.exact_gradients
                     ? cfg.problem.exact_gradient(i, curr[i])
                     : cfg.problem.stochastic_gradient(i, curr[i], gradient_streams[i]).value;
      actions[i] = cfg.policies[i].action_at(t);
      manips[i] = apply_action(actions[i], grads[i], action_streams[i]);
    }
    next = dsgd_round(curr, cfg.coupling, manips, lambda);
    check_trajectory_sane(next, t);

    RoundView view{t, lambda, prev, curr, next, grads, manips, actions};
    for (auto* obs : observers) obs->on_round(view);

    // window shift: (prev, curr) <- (curr, next)
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  for (auto* obs : observers) obs->on_finish(curr);
  return {curr, horizon + 1};
}

void TrajectoryRecorder::on_round(const RoundView& view) {
  if (!saw_first_) {
    initial_ = view.theta_curr;
    saw_first_ = true;
  }
  rounds_.push_back({view.t, view.lambda, view.theta_next, view.true_gradients,
                     view.manipulated_gradients, view.actions});
}

void TrajectoryRecorder::on_finish(const std::vector<Vector>&) {}

const Vector& TrajectoryRecorder::theta_at(long t, int agent) const {
  if (t == 0) return initial_.at(agent);
  return rounds_.at(static_cast<std::size_t>(t - 1)).theta_next.at(agent);
}

ParameterManipulationRun run_with_parameter_manipulation(const SimConfig& cfg,
                                                         int deviator,
                                                         const AffineMap& manipulation,
                                                         std::uint64_t master_seed) {
  cfg.validate();
  const int n = cfg.problem.n_agents();
  if (deviator < 0 || deviator >= n) throw ConfigError("deviator index out of range");
  for (const auto& p : cfg.policies)
    if (p.kind != StrategyPolicy::Kind::Truthful)
      throw ConfigError("parameter manipulation runs require truthful gradient policies");
  if (manipulation.offset.size() != 0 && manipulation.offset.size() != cfg.problem.dim())
    throw ConfigError("manipulation offset dimension mismatch");

  std::vector<RngStream> gradient_streams;
  gradient_streams.reserve(n);
  for (int i = 0; i < n; ++i)
    gradient_streams.emplace_back(derive_stream_key(master_seed, i, StreamPurpose::Gradient));

  std::vector<Vector> curr = draw_initial(cfg, master_seed);
  const auto& w = cfg.coupling.weights();
  const long horizon = cfg.schedule.horizon;

  ParameterManipulationRun rec;
  rec.deviator = deviator;
  rec.manipulation = manipulation;
  rec.deviator_true.push_back(curr[deviator]);

  auto observe = [&](const std::vector<Vector>& state) {
    std::vector<Vector> obs = state;
    obs[deviator] = manipulation(state[deviator]);
    rec.observed.push_back(std::move(obs));
  };
  observe(curr);

  std::vector<Vector> grads(n);
  for (long t = 0; t <= horizon; ++t) {
    const double lambda = stepsize(cfg.schedule, t);
    for (int i = 0; i < n; ++i) {
      grads[i] = cfg.exact_gradients
                     ? cfg.problem.exact_gradient(i, curr[i])
                     : cfg.problem.stochastic_gradient(i, curr[i], gradient_streams[i]).value;
    }
    rec.deviator_gradients.push_back(grads[deviator]);

    const Vector shared_dev = manipulation(curr[deviator]);
    std::vector<Vector> next(n);
    for (int i = 0; i < n; ++i) {
      Vector acc = Vector::Zero(cfg.problem.dim());
      for (int j = 0; j < n; ++j) {
        const Vector& src = (j == deviator && i != deviator) ? shared_dev : curr[j];
        acc += w(i, j) * src;
      }
      acc -= lambda * grads[i];
      next[i] = std::move(acc);
    }
    check_trajectory_sane(next, t);
    curr = std::move(next);
    rec.deviator_true.push_back(curr[deviator]);
    observe(curr);
  }
  return rec;
}

EquivalenceReport manipulate_parameters_equivalent(const ParameterManipulationRun& rec,
                                                   const SimConfig& cfg,
                                                   std::uint64_t master_seed) {
  cfg.validate();
  const int n = cfg.problem.n_agents();
  const int dev = rec.deviator;
  const long horizon = cfg.schedule.horizon;
  if (static_cast<long>(rec.deviator_gradients.size()) != horizon + 1)
    throw ConfigError("recorded run does not match the configured horizon");

  std::vector<RngStream> gradient_streams;
  gradient_streams.reserve(n);
  for (int i = 0; i < n; ++i)
    gradient_streams.emplace_back(derive_stream_key(master_seed, i, StreamPurpose::Gradient));

  const auto& w = cfg.coupling.weights();
  const double w_dd = w(dev, dev);

  std::vector<Vector> curr = draw_initial(cfg, master_seed);
  curr[dev] = rec.manipulation(curr[dev]);

  EquivalenceReport report;
  report.replayed.push_back(curr);

  auto track_error = [&](const std::vector<Vector>& replayed, std::size_t t_index) {
    const auto& obs = rec.observed.at(t_index);
    for (int i = 0; i < n; ++i) {
      const double err = (replayed[i] - obs[i]).cwiseAbs().maxCoeff();
      if (err > report.max_coordinate_error) report.max_coordinate_error = err;
    }
  };
  track_error(curr, 0);

  std::vector<Vector> manips(n);
  for (long t = 0; t <= horizon; ++t) {
    const double lambda = stepsize(cfg.schedule, t);
    for (int i = 0; i < n; ++i) {
      if (i == dev) continue;
      manips[i] = cfg.exact_gradients
                      ? cfg.problem.exact_gradient(i, curr[i])
                      : cfg.problem.stochastic_gradient(i, curr[i], gradient_streams[i]).value;
    }
    // Induced manipulation from the recorded true trajectory.
    const Vector pert_next =
        rec.manipulation(rec.deviator_true[t + 1]) - rec.deviator_true[t + 1];
    const Vector pert_curr = rec.manipulation(rec.deviator_true[t]) - rec.deviator_true[t];
    manips[dev] = rec.deviator_gradients[t] - (pert_next - w_dd * pert_curr) / lambda;

    curr = dsgd_round(curr, cfg.coupling, manips, lambda);
    report.replayed.push_back(curr);
    track_error(curr, static_cast<std::size_t>(t + 1));
  }
  return report;
}

}  // namespace dsgdm
