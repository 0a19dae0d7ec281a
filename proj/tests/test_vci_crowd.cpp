#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crowdmpc/vci_crowd.hpp"

using namespace crowdmpc;

namespace {

PedestrianState make_ped(int id, const Vec2& pos, const Vec2& vel, const Vec2& dest) {
  PedestrianState ped;
  ped.id = id;
  ped.position = pos;
  ped.velocity = vel;
  ped.destination = dest;
  return ped;
}

VehicleFootprint make_vehicle(const Vec2& center, double speed) {
  VehicleFootprint veh;
  veh.center = center;
  veh.longitudinal_speed = speed;
  return veh;
}

std::vector<PedestrianState> random_crowd(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> upos(-8.0, 8.0);
  std::uniform_real_distribution<double> uvel(-1.5, 1.5);
  std::vector<PedestrianState> crowd;
  for (int i = 0; i < n; ++i) {
    crowd.push_back(make_ped(i, Vec2(upos(rng), upos(rng)), Vec2(uvel(rng), uvel(rng)),
                             Vec2(upos(rng), upos(rng))));
  }
  return crowd;
}

}  // namespace

TEST_CASE("vehicle influence basics") {
  const CrowdParams params;

  SUBCASE("zero beyond cutoff") {
    const PedestrianState ped = make_ped(0, Vec2(52.5, 0.0), Vec2::Zero(), Vec2(60, 0));
    CHECK(vehicle_influence(ped, make_vehicle(Vec2::Zero(), 0.0), params).norm() == 0.0);
    CHECK(vehicle_influence(ped, make_vehicle(Vec2::Zero(), 10.0), params).norm() == 0.0);
  }

  SUBCASE("static-obstacle regime below the speed threshold") {
    const PedestrianState ped = make_ped(0, Vec2(6.0, 0.0), Vec2::Zero(), Vec2(10, 0));
    bool static_regime = false;
    vehicle_influence(ped, make_vehicle(Vec2::Zero(), 0.1), params, &static_regime);
    CHECK(static_regime);
    vehicle_influence(ped, make_vehicle(Vec2::Zero(), 0.3), params, &static_regime);
    CHECK_FALSE(static_regime);
  }

  SUBCASE("influence expands with speed") {
    // 6 m ahead of the front bumper (bumper at x = 2.5).
    const PedestrianState ped = make_ped(0, Vec2(8.5, 0.0), Vec2::Zero(), Vec2(20, 0));
    const double at_fast = vehicle_influence(ped, make_vehicle(Vec2::Zero(), 4.0), params).norm();
    const double at_slow = vehicle_influence(ped, make_vehicle(Vec2::Zero(), 1.0), params).norm();
    CHECK(at_fast > at_slow);
  }

  SUBCASE("magnitude non-increasing along a ray ahead") {
    for (double speed : {0.0, 1.0, 4.0}) {
      const VehicleFootprint veh = make_vehicle(Vec2::Zero(), speed);
      double prev = 1e18;
      for (double x = 3.0; x < 25.0; x += 0.5) {
        const PedestrianState ped = make_ped(0, Vec2(x, 0.0), Vec2::Zero(), Vec2(30, 0));
        const double mag = vehicle_influence(ped, veh, params).norm();
        CHECK(mag <= prev + 1e-12);
        prev = mag;
      }
    }
  }

  SUBCASE("points away from the body") {
    const PedestrianState ped = make_ped(0, Vec2(0.0, 4.0), Vec2::Zero(), Vec2(0, 10));
    const Vec2 f = vehicle_influence(ped, make_vehicle(Vec2::Zero(), 0.0), params);
    CHECK(f.y() > 0.0);
  }
}

TEST_CASE("total force") {
  const CrowdParams params;

  SUBCASE("relaxation equilibrium") {
    PedestrianState ped = make_ped(0, Vec2::Zero(), Vec2(1.2, 0.0), Vec2(10, 0));
    const ForceBreakdown fb = total_force(ped, {}, nullptr, params);
    CHECK(fb.total.norm() < 1e-9);
  }

  SUBCASE("head-on pair is symmetric") {
    const PedestrianState a = make_ped(0, Vec2(-1.0, 0.0), Vec2(1.0, 0.0), Vec2(5, 0));
    const PedestrianState b = make_ped(1, Vec2(1.0, 0.0), Vec2(-1.0, 0.0), Vec2(-5, 0));
    const ForceBreakdown on_a = total_force(a, {&b}, nullptr, params);
    const ForceBreakdown on_b = total_force(b, {&a}, nullptr, params);
    CHECK((on_a.repulsive + on_b.repulsive).norm() < 1e-12);
    CHECK(on_a.repulsive.x() < 0.0);
    CHECK(on_b.repulsive.x() > 0.0);
  }

  SUBCASE("overlapping bodies push apart") {
    // centers 0.5 m apart, radii 0.3 each: overlap 0.1 m
    const PedestrianState a = make_ped(0, Vec2(0.0, 0.0), Vec2::Zero(), Vec2(5, 0));
    const PedestrianState b = make_ped(1, Vec2(0.5, 0.0), Vec2::Zero(), Vec2(-5, 0));
    const ForceBreakdown on_a = total_force(a, {&b}, nullptr, params);
    CHECK(on_a.collision.norm() == doctest::Approx(2000.0 * 0.1));
    CHECK(on_a.collision.x() < 0.0);
  }
}

TEST_CASE("step_crowd") {
  const CrowdParams params;

  SUBCASE("empty crowd") {
    CHECK(step_crowd({}, nullptr, 0.05, params).empty());
  }

  SUBCASE("at rest at destination stays put") {
    std::vector<PedestrianState> crowd = {
        make_ped(0, Vec2(3.0, 4.0), Vec2::Zero(), Vec2(3.0, 4.0))};
    const auto next = step_crowd(crowd, nullptr, 0.05, params);
    CHECK((next[0].position - crowd[0].position).norm() < 1e-9);
    CHECK(next[0].velocity.norm() < 1e-9);
  }

  SUBCASE("one relaxation step from rest") {
    std::vector<PedestrianState> crowd = {
        make_ped(0, Vec2::Zero(), Vec2::Zero(), Vec2(10.0, 0.0))};
    const auto next = step_crowd(crowd, nullptr, 0.05, params);
    CHECK(next[0].velocity.x() == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(next[0].velocity.y() == doctest::Approx(0.0));
  }
}

TEST_CASE("force model properties") {
  const CrowdParams params;
  std::mt19937_64 rng(1234);

  SUBCASE("summation identity") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto crowd = random_crowd(rng, 6);
      const VehicleFootprint veh = make_vehicle(Vec2(2.0, 1.0), 3.0);
      for (std::size_t i = 0; i < crowd.size(); ++i) {
        const auto fb = total_force(crowd[i], neighbors_of(crowd, i, params), &veh, params);
        const Vec2 recomputed = fb.repulsive + fb.collision + fb.navigational +
                                fb.vehicle + fb.beta * fb.destination;
        CHECK((fb.total - recomputed).norm() <=
              1e-12 * std::max(1.0, fb.total.norm()));
        CHECK(fb.beta >= 0.0);
        CHECK(fb.beta <= 1.0);
      }
    }
  }

  SUBCASE("translation invariance") {
    const auto crowd = random_crowd(rng, 5);
    const VehicleFootprint veh = make_vehicle(Vec2(1.0, -2.0), 2.5);
    const Vec2 shift(137.0, -55.5);
    auto shifted = crowd;
    for (auto& ped : shifted) {
      ped.position += shift;
      ped.destination += shift;
    }
    VehicleFootprint veh_shifted = veh;
    veh_shifted.center += shift;
    for (std::size_t i = 0; i < crowd.size(); ++i) {
      const auto a = total_force(crowd[i], neighbors_of(crowd, i, params), &veh, params);
      const auto b =
          total_force(shifted[i], neighbors_of(shifted, i, params), &veh_shifted, params);
      CHECK((a.total - b.total).norm() < 1e-9);
    }
  }

  SUBCASE("pairwise antisymmetry for identical pedestrians") {
    for (int trial = 0; trial < 50; ++trial) {
      auto crowd = random_crowd(rng, 2);
      const ForceBreakdown on_0 = total_force(crowd[0], {&crowd[1]}, nullptr, params);
      const ForceBreakdown on_1 = total_force(crowd[1], {&crowd[0]}, nullptr, params);
      CHECK((on_0.repulsive + on_1.repulsive).norm() < 1e-9);
      CHECK((on_0.collision + on_1.collision).norm() < 1e-9);
      CHECK((on_0.navigational + on_1.navigational).norm() < 1e-9);
    }
  }

  SUBCASE("speed cap after stepping") {
    auto crowd = random_crowd(rng, 10);
    const VehicleFootprint veh = make_vehicle(Vec2::Zero(), 5.0);
    for (int step = 0; step < 20; ++step) {
      crowd = step_crowd(crowd, &veh, 0.05, params);
      for (const auto& ped : crowd) CHECK(ped.velocity.norm() <= params.max_ped_speed + 1e-12);
    }
  }

  SUBCASE("determinism") {
    const auto crowd = random_crowd(rng, 8);
    const VehicleFootprint veh = make_vehicle(Vec2(0.5, 0.5), 3.3);
    const auto a = step_crowd(crowd, &veh, 0.05, params);
    const auto b = step_crowd(crowd, &veh, 0.05, params);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].position == b[i].position);
      CHECK(a[i].velocity == b[i].velocity);
    }
  }
}
