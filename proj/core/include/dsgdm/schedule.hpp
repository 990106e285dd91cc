#pragma once

namespace dsgdm {

// Decay schedules shared by the update rule and the payment coefficient:
//   stepsize      lambda_t = lambda0 / (t+1)^v
//   truthfulness  kappa_t  = 1 / (t+1)^r
// The (v, r) window below is required whenever the theoretical payment
// coefficient is in use; other modes only need basic sanity.
struct ScheduleParams {
  double lambda0 = 0.1;
  double v = 0.55;
  double r = 0.51;
  double delta = 1e-4;
  long horizon = 0;  // T; rounds run t = 0..T

  void validate_basic() const;
  // v in (1/2, 2/3), r in (1-v, v), delta > 0.
  void validate_decay_window() const;
};

double stepsize(const ScheduleParams& p, long t);
double kappa(const ScheduleParams& p, long t);

// Sensitivity carry-over factor d_{t -> T} =
//   exp(20 H^2 lambda0^2 / ((1-rho)(2v-1))) * (t^(1-2v) - T^(1-2v)),
// the horizon-dependent amplification bound that enters the theoretical
// payment coefficient. Requires 1 <= t <= T.
double sensitivity_factor(const ScheduleParams& p, double smoothness, double rho,
                          long from_t, long to_t);

}  // namespace dsgdm
