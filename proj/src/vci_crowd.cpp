#include "crowdmpc/vci_crowd.hpp"

#include <algorithm>
#include <cmath>

namespace crowdmpc {

namespace {

inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

}  // namespace

Vec2 vehicle_influence(const PedestrianState& ped, const VehicleFootprint& veh,
                       const CrowdParams& params, bool* static_regime) {
  const bool is_static = veh.longitudinal_speed < params.static_speed_threshold;
  if (static_regime) *static_regime = is_static;

  // Faster vehicles project a rectangle stretched forward along the heading.
  const double stretch = is_static ? 0.0 : params.source_lead_time * veh.longitudinal_speed;
  const Vec2 eff_center = veh.center + veh.heading * (0.5 * stretch);
  const double half_len = 0.5 * (veh.length + stretch);
  const double half_wid = 0.5 * veh.width;

  const Vec2 rel = ped.position - eff_center;
  const double lon = veh.heading.dot(rel);
  const Vec2 lat_axis = perp(veh.heading);
  const double lat = lat_axis.dot(rel);

  const double clamped_lon = std::clamp(lon, -half_len, half_len);
  const double clamped_lat = std::clamp(lat, -half_wid, half_wid);
  const Vec2 nearest = eff_center + veh.heading * clamped_lon + lat_axis * clamped_lat;
  const Vec2 away = ped.position - nearest;
  const double dist = away.norm();
  if (dist >= params.veh_cutoff) return Vec2::Zero();

  const double lat_sign = lat >= 0.0 ? 1.0 : -1.0;
  Vec2 dir;
  if (dist < 1e-12) {
    // Inside the rectangle: push straight out of the corridor.
    dir = lat_sign * lat_axis;
  } else {
    dir = (away / dist + params.lateral_bias * lat_sign * lat_axis).normalized();
  }
  const double magnitude = params.a_veh * std::exp(-dist / params.b_veh);
  return magnitude * dir;
}

ForceBreakdown total_force(const PedestrianState& ped,
                           const std::vector<const PedestrianState*>& neighbors,
                           const VehicleFootprint* veh, const CrowdParams& params) {
  ForceBreakdown out;

  for (const PedestrianState* other : neighbors) {
    const Vec2 offset = ped.position - other->position;
    const double dist = offset.norm();
    if (dist < 1e-12) continue;  // coincident centers, direction undefined
    const Vec2 n = offset / dist;
    const double overlap = ped.radius + other->radius - dist;

    out.repulsive += params.a_rep * std::exp(overlap / params.b_rep) * n;
    if (overlap > 0.0) out.collision += params.k_body * overlap * n;

    // Tangential evasion around the neighbor; the sign is a function of the
    // relative configuration only, so f_n^{ij} = -f_n^{ji} for equal radii.
    const Vec2 rel_vel = ped.velocity - other->velocity;
    const double side = offset.x() * rel_vel.y() - offset.y() * rel_vel.x();
    const double sign = side >= 0.0 ? 1.0 : -1.0;
    out.navigational += sign * params.a_nav * std::exp(overlap / params.b_rep) * perp(n);
  }

  if (veh) out.vehicle = vehicle_influence(ped, *veh, params, &out.vehicle_static_regime);

  const Vec2 to_dest = ped.destination - ped.position;
  const double dest_dist = to_dest.norm();
  const Vec2 desired_vel =
      dest_dist < 1e-12 ? Vec2::Zero() : Vec2(ped.desired_speed * to_dest / dest_dist);
  out.destination = ped.mass * (desired_vel - ped.velocity) / params.relaxation_time;

  out.beta = std::max(0.0, 1.0 - out.vehicle.norm() / params.f_sat);
  out.total = out.repulsive + out.collision + out.navigational + out.vehicle +
              out.beta * out.destination;
  return out;
}

std::vector<const PedestrianState*> neighbors_of(const std::vector<PedestrianState>& crowd,
                                                 std::size_t i, const CrowdParams& params) {
  std::vector<const PedestrianState*> result;
  for (std::size_t j = 0; j < crowd.size(); ++j) {
    if (j == i) continue;
    if ((crowd[j].position - crowd[i].position).norm() <= params.neighbor_radius)
      result.push_back(&crowd[j]);
  }
  return result;
}

std::vector<PedestrianState> step_crowd(const std::vector<PedestrianState>& crowd,
                                        const VehicleFootprint* veh, double dt,
                                        const CrowdParams& params) {
  std::vector<PedestrianState> next = crowd;
  std::vector<Vec2> forces(crowd.size());
  for (std::size_t i = 0; i < crowd.size(); ++i)
    forces[i] = total_force(crowd[i], neighbors_of(crowd, i, params), veh, params).total;

  for (std::size_t i = 0; i < crowd.size(); ++i) {
    PedestrianState& ped = next[i];
    ped.velocity += dt * forces[i] / ped.mass;
    const double speed = ped.velocity.norm();
    if (speed > params.max_ped_speed) ped.velocity *= params.max_ped_speed / speed;
    ped.position += dt * ped.velocity;
  }
  return next;
}

}  // namespace crowdmpc
