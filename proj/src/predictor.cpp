#include "crowdmpc/predictor.hpp"

#include <stdexcept>

namespace crowdmpc {

CrowdPrediction predict(const std::vector<PedestrianState>& crowd,
                        const VehicleFootprint& veh, int horizon, double dt,
                        const CrowdParams& params) {
  if (horizon < 1) throw std::invalid_argument("prediction horizon must be >= 1");
  CrowdPrediction pred;
  pred.horizon = horizon;
  pred.assumed_vehicle_speed = veh.longitudinal_speed;
  pred.trajectories.assign(crowd.size(), {});
  for (auto& traj : pred.trajectories) traj.reserve(horizon);

  std::vector<PedestrianState> state = crowd;
  VehicleFootprint fp = veh;
  for (int step = 0; step < horizon; ++step) {
    state = step_crowd(state, &fp, dt, params);
    for (std::size_t i = 0; i < state.size(); ++i)
      pred.trajectories[i].push_back(state[i].position);
    fp.center += fp.heading * (fp.longitudinal_speed * dt);
  }
  return pred;
}

namespace {

double closest_ahead(const std::vector<Vec2>& positions, double veh_s, double half_width) {
  double best = kNoPedestrianAhead;
  for (const Vec2& p : positions) {
    if (p.x() > veh_s && std::abs(p.y()) <= half_width && p.x() < best) best = p.x();
  }
  return best;
}

}  // namespace

FrontGapSequence front_gap_sequence(const CrowdPrediction& pred,
                                    const VehicleState& veh_state,
                                    const VehicleParams& veh_params,
                                    double corridor_margin) {
  const double half_width = 0.5 * veh_params.width + corridor_margin;
  FrontGapSequence seq;
  seq.x_p.assign(pred.horizon, kNoPedestrianAhead);
  std::vector<Vec2> at_step(pred.trajectories.size());
  for (int step = 0; step < pred.horizon; ++step) {
    for (std::size_t i = 0; i < pred.trajectories.size(); ++i)
      at_step[i] = pred.trajectories[i][step];
    seq.x_p[step] = closest_ahead(at_step, veh_state.s, half_width);
  }
  return seq;
}

double current_front_position(const std::vector<PedestrianState>& crowd,
                              const VehicleState& veh_state,
                              const VehicleParams& veh_params,
                              double corridor_margin) {
  const double half_width = 0.5 * veh_params.width + corridor_margin;
  double best = kNoPedestrianAhead;
  for (const PedestrianState& ped : crowd) {
    if (ped.position.x() > veh_state.s && std::abs(ped.position.y()) <= half_width &&
        ped.position.x() < best)
      best = ped.position.x();
  }
  return best;
}

}  // namespace crowdmpc
