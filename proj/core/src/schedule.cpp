#include "dsgdm/schedule.hpp"

#include <cmath>
#include <string>

#include "dsgdm/errors.hpp"

namespace dsgdm {

void ScheduleParams::validate_basic() const {
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
  if (!(v > 0.0 && v < 1.0)) throw ConfigError("stepsize exponent v must lie in (0, 1)");
  if (!(r > 0.0)) throw ConfigError("truthfulness exponent r must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (horizon < 0) throw ConfigError("horizon must be >= 0");
}

void ScheduleParams::validate_decay_window() const {
  validate_basic();
  if (!(v > 0.5 && v < 2.0 / 3.0))
    throw ConfigError("v must lie in (1/2, 2/3); got " + std::to_string(v));
  if (!(r > 1.0 - v && r < v))
    throw ConfigError("r must lie in (1-v, v); got " + std::to_string(r));
}

double stepsize(const ScheduleParams& p, long t) {
  return p.lambda0 * std::pow(static_cast<double>(t + 1), -p.v);
}

double kappa(const ScheduleParams& p, long t) {
  return std::pow(static_cast<double>(t + 1), -p.r);
}

double sensitivity_factor(const ScheduleParams& p, double smoothness, double rho,
                          long from_t, long to_t) {
  if (from_t < 1 || from_t > to_t)
    throw ConfigError("sensitivity factor requires 1 <= t <= T");
  const double prefactor = std::exp(20.0 * smoothness * smoothness * p.lambda0 *
                                    p.lambda0 / ((1.0 - rho) * (2.0 * p.v - 1.0)));
  const double e = 1.0 - 2.0 * p.v;  // negative, so the difference is >= 0
  const double d = prefactor * (std::pow(static_cast<double>(from_t), e) -
                                std::pow(static_cast<double>(to_t), e));
  return d < 0.0 ? 0.0 : d;
}

}  // namespace dsgdm
