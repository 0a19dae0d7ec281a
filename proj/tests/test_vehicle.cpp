#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crowdmpc/vehicle.hpp"

using namespace crowdmpc;

namespace {

VehicleParams table_params() { return VehicleParams{}; }  // defaults are the tuned values

}  // namespace

TEST_CASE("discretize with tuned parameters") {
  const DiscreteModel model = discretize(table_params(), 0.05);
  CHECK(model.a(0, 0) == doctest::Approx(1.0));
  CHECK(model.a(0, 1) == doctest::Approx(0.05));
  CHECK(model.a(1, 0) == doctest::Approx(0.0));
  CHECK(model.a(1, 1) == doctest::Approx(0.995));
  CHECK(model.b(0) == doctest::Approx(0.0));
  CHECK(model.b(1) == doctest::Approx(5e-5));
}

TEST_CASE("discretize limits") {
  SUBCASE("dt -> 0 gives identity dynamics") {
    const DiscreteModel model = discretize(table_params(), 1e-9);
    CHECK((model.a - Eigen::Matrix2d::Identity()).norm() < 1e-8);
    CHECK(model.b.norm() < 1e-8);
  }
  SUBCASE("frictionless") {
    VehicleParams params = table_params();
    params.friction = 0.0;
    CHECK(discretize(params, 0.05).a(1, 1) == 1.0);
  }
  SUBCASE("rejects bad dt") {
    CHECK_THROWS_AS(discretize(table_params(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(discretize(table_params(), -1.0), std::invalid_argument);
  }
  SUBCASE("rejects unstable discretization") {
    VehicleParams params = table_params();
    params.friction = 25000.0;  // friction*dt/mass = 1.25
    CHECK_THROWS_AS(discretize(params, 0.05), std::invalid_argument);
  }
}

TEST_CASE("step_vehicle") {
  const DiscreteModel model = discretize(table_params(), 0.05);
  SUBCASE("coast") {
    const VehicleState next = step_vehicle(model, {0.0, 4.0}, 0.0);
    CHECK(next.s == doctest::Approx(0.2));
    CHECK(next.v == doctest::Approx(3.98));
  }
  SUBCASE("full traction") {
    const VehicleState next = step_vehicle(model, {0.0, 4.0}, 8000.0);
    CHECK(next.s == doctest::Approx(0.2));
    CHECK(next.v == doctest::Approx(4.38));
  }
  SUBCASE("rest is a fixed point") {
    const VehicleState next = step_vehicle(model, {0.0, 0.0}, 0.0);
    CHECK(next.s == 0.0);
    CHECK(next.v == 0.0);
  }
  SUBCASE("u = friction*v holds speed") {
    VehicleState x{0.0, 7.0};
    for (int i = 0; i < 50; ++i) x = step_vehicle(model, x, 100.0 * 7.0);
    CHECK(x.v == doctest::Approx(7.0).epsilon(1e-12));
  }
}
