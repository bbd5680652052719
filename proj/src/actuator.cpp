#include "demobot/actuator.hpp"

#include <algorithm>
#include <cmath>

namespace demobot {

double torque_upper_limit(const ActuatorParams& p, double omega) {
  double hi = p.tau_stall / (1.0 - p.nu) * (1.0 - std::abs(omega) / p.omega_max);
  if (p.mode == SaturationMode::StallClamp && std::abs(omega) < p.nu * p.omega_max)
    hi = std::min(hi, p.tau_stall);
  return hi;
}

double torque_lower_limit(const ActuatorParams& p, double omega) {
  double lo = p.tau_stall / (1.0 - p.nu) * (-1.0 - std::abs(omega) / p.omega_max);
  if (p.mode == SaturationMode::StallClamp && std::abs(omega) < p.nu * p.omega_max)
    lo = std::max(lo, -p.tau_stall);
  return lo;
}

double compute_joint_torque(const ActuatorParams& p, double q_des, double q, double qd,
                            double qd_des) {
  const double tau_des =
      p.alpha_p * p.k_p * (q_des - (q + p.bias)) + p.alpha_d * p.k_d * (qd_des - qd);
  const double lo = torque_lower_limit(p, qd);
  const double hi = torque_upper_limit(p, qd);
  return p.gamma * std::clamp(tau_des, std::min(lo, hi), std::max(lo, hi));
}

ActuatorParams sample_actuator_params(const ActuatorParams& base, Rng& rng) {
  ActuatorParams out = base;
  out.alpha_p = rng.uniform(0.9, 1.1);
  out.alpha_d = rng.uniform(0.9, 1.1);
  out.bias = rng.uniform(-0.1, 0.1);
  out.nu = rng.uniform(1.0 / 3.0, 2.0 / 3.0);
  out.gamma = rng.uniform(0.9, 1.1);
  return out;
}

}  // namespace demobot
