#include "crowdmpc/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace crowdmpc {

namespace {

// One registry drives load, override and dump so they cannot drift apart.
struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const std::map<std::string, Field>& registry() {
  static const std::map<std::string, Field> fields = [] {
    std::map<std::string, Field> r;
    auto add_double = [&r](const std::string& key, double RunConfig::* member) {
      r[key] = {[member](RunConfig& c, const std::string& v) { c.*member = std::stod(v); },
                [member](const RunConfig& c) { return format_double(c.*member); }};
    };
    auto add_nested = [&r](const std::string& key, auto member, auto inner) {
      r[key] = {[member, inner](RunConfig& c, const std::string& v) {
                  (c.*member).*inner = std::stod(v);
                },
                [member, inner](const RunConfig& c) {
                  return format_double((c.*member).*inner);
                }};
    };

    add_nested("vehicle.mass", &RunConfig::vehicle, &VehicleParams::mass);
    add_nested("vehicle.friction", &RunConfig::vehicle, &VehicleParams::friction);
    add_nested("vehicle.u_max", &RunConfig::vehicle, &VehicleParams::u_max);
    add_nested("vehicle.du_max", &RunConfig::vehicle, &VehicleParams::du_max);
    add_nested("vehicle.v_max", &RunConfig::vehicle, &VehicleParams::v_max);
    add_nested("vehicle.v_min", &RunConfig::vehicle, &VehicleParams::v_min);
    add_nested("vehicle.length", &RunConfig::vehicle, &VehicleParams::length);
    add_nested("vehicle.width", &RunConfig::vehicle, &VehicleParams::width);

    add_nested("crowd.relaxation_time", &RunConfig::crowd, &CrowdParams::relaxation_time);
    add_nested("crowd.a_rep", &RunConfig::crowd, &CrowdParams::a_rep);
    add_nested("crowd.b_rep", &RunConfig::crowd, &CrowdParams::b_rep);
    add_nested("crowd.k_body", &RunConfig::crowd, &CrowdParams::k_body);
    add_nested("crowd.a_nav", &RunConfig::crowd, &CrowdParams::a_nav);
    add_nested("crowd.a_veh", &RunConfig::crowd, &CrowdParams::a_veh);
    add_nested("crowd.b_veh", &RunConfig::crowd, &CrowdParams::b_veh);
    add_nested("crowd.source_lead_time", &RunConfig::crowd, &CrowdParams::source_lead_time);
    add_nested("crowd.veh_cutoff", &RunConfig::crowd, &CrowdParams::veh_cutoff);
    add_nested("crowd.lateral_bias", &RunConfig::crowd, &CrowdParams::lateral_bias);
    add_nested("crowd.static_speed_threshold", &RunConfig::crowd,
               &CrowdParams::static_speed_threshold);
    add_nested("crowd.f_sat", &RunConfig::crowd, &CrowdParams::f_sat);
    add_nested("crowd.neighbor_radius", &RunConfig::crowd, &CrowdParams::neighbor_radius);
    add_nested("crowd.max_ped_speed", &RunConfig::crowd, &CrowdParams::max_ped_speed);

    add_double("controller.dt", &RunConfig::dt);
    r["controller.horizon"] = {
        [](RunConfig& c, const std::string& v) { c.horizon = std::stoi(v); },
        [](const RunConfig& c) { return std::to_string(c.horizon); }};
    add_double("controller.v_ref", &RunConfig::v_ref);
    add_double("controller.d_safe", &RunConfig::d_safe);
    add_double("controller.d_buffer", &RunConfig::d_buffer);
    add_double("controller.corridor_margin", &RunConfig::corridor_margin);
    add_nested("pid.kp", &RunConfig::pid, &PidState::kp);
    add_nested("pid.ki", &RunConfig::pid, &PidState::ki);
    add_nested("pid.kd", &RunConfig::pid, &PidState::kd);

    r["scenario.n_pedestrians"] = {
        [](RunConfig& c, const std::string& v) { c.n_pedestrians = std::stoi(v); },
        [](const RunConfig& c) { return std::to_string(c.n_pedestrians); }};
    add_nested("scenario.spawn_x_min", &RunConfig::spawn, &SpawnRect::x_min);
    add_nested("scenario.spawn_x_max", &RunConfig::spawn, &SpawnRect::x_max);
    add_nested("scenario.spawn_y_min", &RunConfig::spawn, &SpawnRect::y_min);
    add_nested("scenario.spawn_y_max", &RunConfig::spawn, &SpawnRect::y_max);
    add_double("scenario.vehicle_start_s", &RunConfig::vehicle_start_s);
    add_double("scenario.vehicle_start_v", &RunConfig::vehicle_start_v);
    add_double("scenario.finish_line", &RunConfig::finish_line);
    add_double("scenario.time_cap", &RunConfig::time_cap);
    add_double("scenario.ped_mass", &RunConfig::ped_mass);
    add_double("scenario.ped_radius", &RunConfig::ped_radius);
    add_double("scenario.desired_speed_min", &RunConfig::desired_speed_min);
    add_double("scenario.desired_speed_max", &RunConfig::desired_speed_max);
    add_double("scenario.crossing_exit_y", &RunConfig::crossing_exit_y);
    add_double("scenario.stop_speed_threshold", &RunConfig::stop_speed_threshold);
    add_double("scenario.stop_min_duration", &RunConfig::stop_min_duration);

    r["run.seed"] = {
        [](RunConfig& c, const std::string& v) { c.seed = std::stoull(v); },
        [](const RunConfig& c) { return std::to_string(c.seed); }};
    r["run.episodes"] = {
        [](RunConfig& c, const std::string& v) { c.episodes = std::stoi(v); },
        [](const RunConfig& c) { return std::to_string(c.episodes); }};
    r["run.workers"] = {
        [](RunConfig& c, const std::string& v) { c.workers = std::stoi(v); },
        [](const RunConfig& c) { return std::to_string(c.workers); }};
    r["run.trace"] = {
        [](RunConfig& c, const std::string& v) { c.trace = (v == "1" || v == "true"); },
        [](const RunConfig& c) { return c.trace ? std::string("true") : std::string("false"); }};
    r["run.out_dir"] = {
        [](RunConfig& c, const std::string& v) { c.out_dir = v; },
        [](const RunConfig& c) { return c.out_dir; }};
    return r;
  }();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void RunConfig::validate() const {
  vehicle.validate();
  if (dt <= 0.0) throw std::invalid_argument("controller.dt must be positive");
  if (horizon < 1) throw std::invalid_argument("controller.horizon must be >= 1");
  if (d_safe <= 0.0) throw std::invalid_argument("controller.d_safe must be positive");
  if (d_buffer <= 0.0) throw std::invalid_argument("controller.d_buffer must be positive");
  if (pid.kp < 0.0 || pid.ki < 0.0 || pid.kd < 0.0)
    throw std::invalid_argument("pid gains must be nonnegative");
  if (n_pedestrians < 0) throw std::invalid_argument("scenario.n_pedestrians must be >= 0");
  if (spawn.x_max <= spawn.x_min || spawn.y_max <= spawn.y_min)
    throw std::invalid_argument("scenario spawn rectangle is empty");
  if (time_cap <= 0.0) throw std::invalid_argument("scenario.time_cap must be positive");
  if (ped_mass <= 0.0 || ped_radius <= 0.0)
    throw std::invalid_argument("pedestrian mass and radius must be positive");
  if (desired_speed_max < desired_speed_min || desired_speed_min < 0.0)
    throw std::invalid_argument("invalid desired speed range");
  if (episodes < 0) throw std::invalid_argument("run.episodes must be >= 0");
  if (workers < 0) throw std::invalid_argument("run.workers must be >= 0");
}

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = registry().find(key);
  if (it == registry().end())
    throw std::invalid_argument("unknown config key: " + key);
  try {
    it->second.set(cfg, value);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad value for " + key + ": " + value);
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key = value");
    apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void dump_config(const RunConfig& cfg, std::ostream& out) {
  for (const auto& [key, field] : registry())
    out << key << " = " << field.get(cfg) << "\n";
}

std::string dump_config_string(const RunConfig& cfg) {
  std::ostringstream os;
  dump_config(cfg, os);
  return os.str();
}

}  // namespace crowdmpc
