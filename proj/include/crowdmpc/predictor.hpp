#pragma once

#include <vector>

#include "crowdmpc/vci_crowd.hpp"
#include "crowdmpc/vehicle.hpp"

namespace crowdmpc {

/// N future positions per pedestrian under the constant-vehicle-speed
/// assumption (steps k+1 .. k+N).
struct CrowdPrediction {
  int horizon = 0;
  std::vector<std::vector<Vec2>> trajectories;  // [pedestrian][step]
  double assumed_vehicle_speed = 0.0;
};

/// Value used when no pedestrian is ahead in the corridor at a step.
inline constexpr double kNoPedestrianAhead = 1e9;

/// x_p(k+1) .. x_p(k+N): longitudinal position of the closest in-corridor
/// pedestrian ahead of the vehicle, or kNoPedestrianAhead.
struct FrontGapSequence {
  std::vector<double> x_p;
};

/// Rolls the crowd model forward `horizon` steps with the vehicle advancing
/// at its frozen current speed along its heading.
CrowdPrediction predict(const std::vector<PedestrianState>& crowd,
                        const VehicleFootprint& veh, int horizon, double dt,
                        const CrowdParams& params);

/// Corridor filter: ahead means longitudinal position (x) greater than the
/// vehicle center s; in-corridor means |lateral offset| <= width/2 + margin.
/// The world frame is the vehicle's travel frame (x longitudinal, y lateral).
FrontGapSequence front_gap_sequence(const CrowdPrediction& pred,
                                    const VehicleState& veh_state,
                                    const VehicleParams& veh_params,
                                    double corridor_margin = 0.5);

/// Same corridor filter applied to the current crowd (the PID gap input).
double current_front_position(const std::vector<PedestrianState>& crowd,
                              const VehicleState& veh_state,
                              const VehicleParams& veh_params,
                              double corridor_margin = 0.5);

}  // namespace crowdmpc
