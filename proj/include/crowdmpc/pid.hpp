#pragma once

#include <utility>

namespace crowdmpc {

/// Discrete PID controller state and gains for longitudinal speed tracking.
struct PidState {
  double integral = 0.0;  // accumulated u_i term, N
  double e_prev = 0.0;    // previous speed error, m/s
  double kp = 300.0;
  double ki = 10.0;
  double kd = 100.0;
  double dt = 0.05;
};

/// Gap-dependent reference speed: 0 at or below d_safe, v_r at or beyond
/// d_safe + d_buffer, linear ramp in between.
double reference_speed(double gap, double v_r, double d_safe, double d_buffer);

struct PidOutput {
  double u = 0.0;  // N, clamped to [-u_max, u_max]
  PidState state;
};

/// One PID update on the speed error e = v - v_ref. The output is
/// u = u_ff - (u_p + u_i + u_d) clamped to +-u_max; the integral term is
/// frozen while the output saturates. `u_ff` is an optional feedforward
/// (e.g. the drag-balancing input at the reference speed) applied before
/// the clamp.
PidOutput pid_step(const PidState& state, double v, double v_ref, double u_max,
                   double u_ff = 0.0);

}  // namespace crowdmpc
