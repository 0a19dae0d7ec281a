#pragma once

#include <Eigen/Dense>
#include <vector>

namespace crowdmpc {

using Vec2 = Eigen::Vector2d;

/// One crowd member: planar point mass heading to a fixed destination.
struct PedestrianState {
  int id = 0;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 destination = Vec2::Zero();
  double mass = 70.0;          // kg
  double radius = 0.3;         // m
  double desired_speed = 1.2;  // m/s
};

/// Oriented rectangle emitting the speed-dependent repulsive field.
struct VehicleFootprint {
  Vec2 center = Vec2::Zero();
  Vec2 heading = Vec2::UnitX();  // unit vector
  double length = 5.0;
  double width = 2.0;
  double longitudinal_speed = 0.0;  // >= 0
};

/// Tunables of the crowd force model. All forces in N.
struct CrowdParams {
  double relaxation_time = 0.5;       // s, destination drive
  double a_rep = 300.0;               // interpersonal repulsion strength
  double b_rep = 0.4;                 // m, repulsion range
  double k_body = 2000.0;             // N/m, body compression on overlap
  double a_nav = 100.0;               // tangential evasion strength
  double a_veh = 2000.0;              // vehicle field strength
  double b_veh = 1.5;                 // m, vehicle field range
  double source_lead_time = 1.0;      // s, forward stretch per m/s of speed
  double veh_cutoff = 15.0;           // m, vehicle field cutoff
  double lateral_bias = 2.5;          // sideways push mixed into vehicle field
  double static_speed_threshold = 0.2;  // m/s, below this the vehicle is a static obstacle
  double f_sat = 800.0;               // N, vehicle force that fully suppresses f_d
  double neighbor_radius = 4.0;       // m, Q(i) cutoff
  double max_ped_speed = 2.0;         // m/s
};

/// Per-pedestrian force decomposition for one evaluation.
struct ForceBreakdown {
  Vec2 repulsive = Vec2::Zero();     // sum of f_r over neighbors
  Vec2 collision = Vec2::Zero();     // sum of f_c over neighbors
  Vec2 navigational = Vec2::Zero();  // sum of f_n over neighbors
  Vec2 vehicle = Vec2::Zero();       // f_v
  Vec2 destination = Vec2::Zero();   // f_d (before beta weighting)
  double beta = 1.0;
  Vec2 total = Vec2::Zero();         // repulsive+collision+navigational+vehicle+beta*destination
  bool vehicle_static_regime = false;
};

/// Repulsive field of the vehicle at the pedestrian's position.
/// Zero beyond the cutoff; below the speed threshold the unstretched
/// rectangle is used (static-obstacle regime, reported via the flag).
Vec2 vehicle_influence(const PedestrianState& ped, const VehicleFootprint& veh,
                       const CrowdParams& params, bool* static_regime = nullptr);

/// Total force on `ped` from the given neighbor set (already filtered to
/// Q(i)) and the vehicle. Pass nullptr for no vehicle.
ForceBreakdown total_force(const PedestrianState& ped,
                           const std::vector<const PedestrianState*>& neighbors,
                           const VehicleFootprint* veh, const CrowdParams& params);

/// Semi-implicit Euler step of the whole crowd: forces are evaluated on the
/// pre-step state, then v += dt*F/m (speed clamped), then x += dt*v.
std::vector<PedestrianState> step_crowd(const std::vector<PedestrianState>& crowd,
                                        const VehicleFootprint* veh, double dt,
                                        const CrowdParams& params);

/// Neighbors of crowd[i] within params.neighbor_radius (excluding i).
std::vector<const PedestrianState*> neighbors_of(const std::vector<PedestrianState>& crowd,
                                                 std::size_t i, const CrowdParams& params);

}  // namespace crowdmpc
