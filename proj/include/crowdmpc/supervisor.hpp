#pragma once

#include "crowdmpc/config.hpp"
#include "crowdmpc/mpc_synth.hpp"
#include "crowdmpc/pid.hpp"
#include "crowdmpc/predictor.hpp"
#include "crowdmpc/qp_solver.hpp"

namespace crowdmpc {

struct ControlDecision {
  enum class Source { mpc, pid };
  double u = 0.0;
  Source source = Source::mpc;
  int qp_iterations = 0;
  double front_gap = 0.0;  // current x_p - s, or kNoPedestrianAhead-sized when clear
  bool feasible = true;
};

/// Per-step controller: predict the crowd, assemble and solve the MPC QP,
/// apply U*(1); when the QP is infeasible (or hits the iteration limit)
/// fall back to PID tracking of the gap-dependent reference speed.
/// One supervisor per episode; it owns the QP warm start and nothing else.
class Supervisor {
 public:
  explicit Supervisor(const RunConfig& cfg);

  ControlDecision control_step(const VehicleState& veh_state,
                               const std::vector<PedestrianState>& crowd,
                               double u_prev, PidState& pid_state);

  const QpProblem& last_qp() const { return last_qp_; }

 private:
  RunConfig cfg_;
  DiscreteModel model_;
  PredictionMatrices mats_;
  Eigen::MatrixXd q_weight_;
  QpSolver solver_;
  QpProblem last_qp_;
  int step_index_ = 0;
};

}  // namespace crowdmpc
