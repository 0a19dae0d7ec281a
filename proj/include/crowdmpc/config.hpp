#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "crowdmpc/vci_crowd.hpp"
#include "crowdmpc/vehicle.hpp"
#include "crowdmpc/pid.hpp"

namespace crowdmpc {

/// Rectangle [x_min, x_max] x [y_min, y_max] where pedestrians spawn.
struct SpawnRect {
  double x_min = 20.0, x_max = 40.0;
  double y_min = -10.0, y_max = 10.0;
};

/// Full run configuration. Shipped defaults are the tuned values the
/// pipeline was developed with; everything is overridable from a flat
/// key-value config file and command-line flags.
struct RunConfig {
  VehicleParams vehicle;
  CrowdParams crowd;

  // Controller
  double dt = 0.05;
  int horizon = 15;
  double v_ref = 4.0;        // m/s desired cruise speed
  double d_safe = 8.0;       // m hard gap constraint
  double d_buffer = 10.0;    // m PID ramp width
  double corridor_margin = 0.5;  // m added to half-width for the "in front" filter
  PidState pid;              // gains + dt

  // Scenario
  int n_pedestrians = 30;
  SpawnRect spawn;
  double vehicle_start_s = 0.0;
  double vehicle_start_v = 4.0;
  double finish_line = 55.0;     // m, front bumper must pass this
  double time_cap = 90.0;        // s
  double ped_mass = 70.0;
  double ped_radius = 0.3;
  double desired_speed_min = 1.0;
  double desired_speed_max = 1.4;
  double crossing_exit_y = 12.0;  // |y| of crossing destinations

  // Stop detection
  double stop_speed_threshold = 0.1;  // m/s
  double stop_min_duration = 0.5;     // s

  // Run control
  std::uint64_t seed = 1;
  int episodes = 200;
  int workers = 0;  // 0 = hardware concurrency
  bool trace = false;
  std::string out_dir = "results";

  void validate() const;  // throws std::invalid_argument
};

/// Flat `section.key = value` file, '#' comments, blank lines ignored.
RunConfig load_config(const std::string& path);
void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value);
void dump_config(const RunConfig& cfg, std::ostream& out);
std::string dump_config_string(const RunConfig& cfg);

}  // namespace crowdmpc
