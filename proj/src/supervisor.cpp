#include "crowdmpc/supervisor.hpp"

#include <algorithm>

namespace crowdmpc {

Supervisor::Supervisor(const RunConfig& cfg)
    : cfg_(cfg),
      model_(discretize(cfg.vehicle, cfg.dt)),
      mats_(build_prediction(model_, cfg.horizon)),
      q_weight_(Eigen::MatrixXd::Identity(cfg.horizon, cfg.horizon)) {
  cfg_.pid.dt = cfg_.dt;
}

ControlDecision Supervisor::control_step(const VehicleState& veh_state,
                                         const std::vector<PedestrianState>& crowd,
                                         double u_prev, PidState& pid_state) {
  VehicleFootprint fp;
  fp.center = Vec2(veh_state.s, 0.0);
  fp.heading = Vec2::UnitX();
  fp.length = cfg_.vehicle.length;
  fp.width = cfg_.vehicle.width;
  fp.longitudinal_speed = std::max(0.0, veh_state.v);

  const CrowdPrediction pred = predict(crowd, fp, cfg_.horizon, cfg_.dt, cfg_.crowd);
  const FrontGapSequence x_p =
      front_gap_sequence(pred, veh_state, cfg_.vehicle, cfg_.corridor_margin);
  last_qp_ = assemble_qp(mats_, veh_state, u_prev, x_p, cfg_.vehicle, cfg_.d_safe,
                         cfg_.v_ref, q_weight_, step_index_);
  ++step_index_;

  const double front_pos =
      current_front_position(crowd, veh_state, cfg_.vehicle, cfg_.corridor_margin);

  ControlDecision decision;
  decision.front_gap = front_pos - veh_state.s;

  const QpSolution sol = solver_.solve(last_qp_);
  decision.qp_iterations = sol.iterations;
  if (sol.status == QpStatus::optimal) {
    decision.source = ControlDecision::Source::mpc;
    decision.feasible = true;
    decision.u = sol.u(0);
    return decision;
  }

  // Any non-optimal outcome routes to PID.
  decision.source = ControlDecision::Source::pid;
  decision.feasible = false;
  const double v_ref_pid =
      reference_speed(decision.front_gap, cfg_.v_ref, cfg_.d_safe, cfg_.d_buffer);
  const PidOutput out = pid_step(pid_state, veh_state.v, v_ref_pid, cfg_.vehicle.u_max,
                                 cfg_.vehicle.friction * v_ref_pid);
  pid_state = out.state;
  decision.u = out.u;
  return decision;
}

}  // namespace crowdmpc
