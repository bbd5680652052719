#pragma once

#include "demobot/rng.hpp"

namespace demobot {

enum class SaturationMode {
  // The torque-speed envelope exactly as printed: tau_max can exceed
  // tau_stall at low speed and tau_min is asymmetric in |omega|.
  Literal,
  // Additionally bounds |tau| by tau_stall while |omega| < nu * omega_max
  // (the "saturation begins at nu" reading).
  StallClamp,
};

// Joint-level actuation model: randomized PD gains, position-measurement
// bias, and velocity-dependent torque saturation.
struct ActuatorParams {
  double k_p = 10.0;       // N*m/rad
  double k_d = 1.0;        // N*m*s/rad
  double alpha_p = 1.0;    // gain multiplier, U(0.9, 1.1)
  double alpha_d = 1.0;    // gain multiplier, U(0.9, 1.1)
  double bias = 0.0;       // rad, U(-0.1, 0.1)
  double nu = 0.5;         // saturation onset fraction, U(1/3, 2/3)
  double gamma = 1.0;      // strength multiplier, U(0.9, 1.1)
  double tau_stall = 10.0; // N*m
  double omega_max = 10.0; // rad/s
  SaturationMode mode = SaturationMode::Literal;
};

// tau_des = alpha_p*K_p*(q_des - (q + b)) + alpha_d*K_d*(qd_des - qd)
// tau_applied = gamma * clip(tau_des, tau_min(omega), tau_max(omega))
// with tau_max = tau_stall/(1-nu) * (1 - |omega|/omega_max) and
// tau_min = tau_stall/(1-nu) * (-1 - |omega|/omega_max).
double compute_joint_torque(const ActuatorParams& p, double q_des, double q, double qd,
                            double qd_des);

double torque_upper_limit(const ActuatorParams& p, double omega);
double torque_lower_limit(const ActuatorParams& p, double omega);

// Draws alpha_p, alpha_d, bias, nu, gamma i.i.d. uniform over their ranges;
// the remaining fields are copied from the template.
ActuatorParams sample_actuator_params(const ActuatorParams& base, Rng& rng);

}  // namespace demobot
