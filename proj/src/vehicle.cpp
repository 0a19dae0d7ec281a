#include "crowdmpc/vehicle.hpp"

#include <stdexcept>

namespace crowdmpc {

void VehicleParams::validate() const {
  if (mass <= 0.0) throw std::invalid_argument("vehicle mass must be positive");
  if (friction < 0.0) throw std::invalid_argument("vehicle friction must be nonnegative");
  if (u_max <= 0.0) throw std::invalid_argument("u_max must be positive");
  if (du_max <= 0.0) throw std::invalid_argument("du_max must be positive");
  if (!(v_max > v_min) || v_min < 0.0)
    throw std::invalid_argument("require v_max > v_min >= 0");
  if (length <= 0.0 || width <= 0.0)
    throw std::invalid_argument("vehicle footprint must be positive");
}

DiscreteModel discretize(const VehicleParams& params, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  const double decay = params.friction * dt / params.mass;
  if (decay >= 1.0) throw std::invalid_argument("unstable discretization: friction*dt/mass >= 1");
  DiscreteModel model;
  model.a << 1.0, dt, 0.0, 1.0 - decay;
  model.b << 0.0, dt / params.mass;
  model.dt = dt;
  return model;
}

VehicleState step_vehicle(const DiscreteModel& model, const VehicleState& x, double u) {
  const Eigen::Vector2d next =
      model.a * Eigen::Vector2d(x.s, x.v) + model.b * u;
  return {next(0), next(1)};
}

}  // namespace crowdmpc
