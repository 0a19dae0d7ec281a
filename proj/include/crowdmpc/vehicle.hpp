#pragma once

#include <Eigen/Dense>

namespace crowdmpc {

/// Longitudinal vehicle parameters (point mass with linearized friction).
struct VehicleParams {
  double mass = 1000.0;      // kg
  double friction = 100.0;   // N per m/s
  double u_max = 8000.0;     // N
  double du_max = 1000.0;    // N per step
  double v_max = 20.0;       // m/s
  double v_min = 0.0;        // m/s
  double length = 5.0;       // m
  double width = 2.0;        // m

  void validate() const;
};

/// Longitudinal state: position s (vehicle center) and speed v.
struct VehicleState {
  double s = 0.0;
  double v = 0.0;
};

/// Exact ZOH-style discretization x(k+1) = A x(k) + B u(k).
struct DiscreteModel {
  Eigen::Matrix2d a;
  Eigen::Vector2d b;
  double dt = 0.0;
};

/// Throws std::invalid_argument on dt <= 0 or friction*dt/mass >= 1.
DiscreteModel discretize(const VehicleParams& params, double dt);

VehicleState step_vehicle(const DiscreteModel& model, const VehicleState& x, double u);

}  // namespace crowdmpc
