#include "crowdmpc/pid.hpp"

#include <algorithm>
#include <cmath>

namespace crowdmpc {

double reference_speed(double gap, double v_r, double d_safe, double d_buffer) {
  if (gap <= d_safe) return 0.0;
  if (gap >= d_safe + d_buffer) return v_r;
  return v_r * (gap - d_safe) / d_buffer;
}

PidOutput pid_step(const PidState& state, double v, double v_ref, double u_max,
                   double u_ff) {
  const double e = v - v_ref;
  const double u_p = state.kp * e;
  const double u_d = state.kd * (e - state.e_prev) / state.dt;
  double u_i = state.integral + state.ki * e * state.dt;

  double u = u_ff - (u_p + u_i + u_d);
  if (std::abs(u) > u_max) {
    u_i = state.integral;  // anti-windup: hold the integral while saturated
    u = std::clamp(u_ff - (u_p + u_i + u_d), -u_max, u_max);
  }

  PidOutput out;
  out.u = u;
  out.state = state;
  out.state.integral = u_i;
  out.state.e_prev = e;
  return out;
}

}  // namespace crowdmpc
