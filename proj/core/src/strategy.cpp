#include "dsgdm/strategy.hpp"

#include <cmath>
#include <string>

#include "dsgdm/errors.hpp"

namespace dsgdm {

void Action::validate() const {
  if (!(a >= 1.0)) throw ConfigError("action scaling factor must be >= 1");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw ConfigError("action parameters must be finite");
}

Vector apply_action(const Action& act, const Vector& g, RngStream& rng) {
  act.validate();
  if (!g.allFinite()) throw DivergenceError("non-finite gradient passed to action");
  if (act.b == 0.0) {
    if (act.a == 1.0) return g;
    return act.a * g;
  }
  Vector xi = act.noise_law == NoiseLaw::Laplace ? rng.laplace_unit_vector(g.size())
                                                 : rng.normal_vector(g.size());
  return act.a * g + act.b * xi;
}

double truthfulness_deviation(const Action& act, const std::vector<Vector>& g_samples,
                              RngStream& rng, int noise_draws_per_sample) {
  act.validate();
  if (g_samples.empty()) throw ConfigError("truthfulness deviation needs gradient samples");
  if (act.is_truthful()) return 0.0;
  if (act.b == 0.0) {
    double sum = 0.0;
    for (const auto& g : g_samples) sum += (act.a - 1.0) * g.norm();
    return sum / g_samples.size();
  }
  double sum = 0.0;
  long count = 0;
  for (const auto& g : g_samples) {
    for (int k = 0; k < noise_draws_per_sample; ++k) {
      Vector xi = act.noise_law == NoiseLaw::Laplace
                      ? rng.laplace_unit_vector(g.size())
                      : rng.normal_vector(g.size());
      sum += ((act.a - 1.0) * g + act.b * xi).norm();
      ++count;
    }
  }
  return sum / count;
}

BestResponseResult best_response_search(
    const BestResponseGrid& grid,
    const std::function<double(const Action&, std::uint64_t seed)>& evaluate,
    const std::vector<std::uint64_t>& seeds) {
  if (grid.a_values.empty() || grid.b_values.empty())
    throw ConfigError("best response grid is empty");
  if (seeds.empty()) throw ConfigError("best response needs at least one seed");

  bool have = false;
  BestResponseResult best;
  for (double a : grid.a_values) {
    for (double b : grid.b_values) {
      Action act{a, b, grid.noise_law};
      act.validate();
      double sum = 0.0;
      for (auto s : seeds) sum += evaluate(act, s);
      const double mean = sum / seeds.size();
      const bool better =
          !have || mean > best.mean_net_utility ||
          (mean == best.mean_net_utility &&
           (act.a < best.action.a ||
            (act.a == best.action.a && std::abs(act.b) < std::abs(best.action.b))));
      if (better) {
        best = {act, mean};
        have = true;
      }
    }
  }
  return best;
}

StrategyPolicy StrategyPolicy::fixed_action(Action a) {
  a.validate();
  StrategyPolicy p;
  p.kind = Kind::Fixed;
  p.fixed = a;
  return p;
}

StrategyPolicy StrategyPolicy::per_iteration(std::vector<Action> schedule) {
  if (schedule.empty()) throw ConfigError("action schedule is empty");
  for (const auto& a : schedule) a.validate();
  StrategyPolicy p;
  p.kind = Kind::Schedule;
  p.schedule = std::move(schedule);
  return p;
}

StrategyPolicy StrategyPolicy::best_response(BestResponseGrid grid) {
  if (grid.a_values.empty() || grid.b_values.empty())
    throw ConfigError("best response grid is empty");
  for (double a : grid.a_values)
    if (!(a >= 1.0)) throw ConfigError("best response grid a-values must be >= 1");
  StrategyPolicy p;
  p.kind = Kind::BestResponse;
  p.grid = std::move(grid);
  return p;
}

const Action& StrategyPolicy::action_at(long t) const {
  static const Action kTruthful{};
  switch (kind) {
    case Kind::Truthful:
      return kTruthful;
    case Kind::Fixed:
      return fixed;
    case Kind::Schedule:
      if (t < 0 || static_cast<std::size_t>(t) >= schedule.size())
        throw ConfigError("action schedule shorter than horizon");
      return schedule[static_cast<std::size_t>(t)];
    case Kind::BestResponse:
      break;
  }
  throw ConfigError("best response policy must be resolved before the run");
}

void StrategyPolicy::validate(long horizon) const {
  switch (kind) {
    case Kind::Truthful:
      return;
    case Kind::Fixed:
      fixed.validate();
      return;
    case Kind::Schedule:
      if (static_cast<long>(schedule.size()) < horizon + 1)
        throw ConfigError("action schedule shorter than horizon " +
                          std::to_string(horizon));
      return;
    case Kind::BestResponse:
      return;  // validated at construction; resolved later
  }
}

}  // namespace dsgdm
