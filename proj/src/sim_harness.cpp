#include "crowdmpc/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace crowdmpc {

namespace {

double rect_distance(const Vec2& p, double s, double half_len, double half_wid,
                     bool* inside) {
  const double dx = std::abs(p.x() - s) - half_len;
  const double dy = std::abs(p.y()) - half_wid;
  *inside = dx < 0.0 && dy < 0.0;
  return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  out += buf;
}

void write_force_trace_row(std::ostream& out, double t, const PedestrianState& ped,
                           const ForceBreakdown& fb) {
  std::string line;
  append_number(line, t);
  line += ',';
  line += std::to_string(ped.id);
  for (const Vec2* f : {&fb.repulsive, &fb.collision, &fb.navigational,
                        &fb.vehicle, &fb.destination}) {
    line += ',';
    append_number(line, f->x());
    line += ',';
    append_number(line, f->y());
  }
  line += ',';
  append_number(line, fb.beta);
  line += '\n';
  out << line;
}

}  // namespace

const char* situation_name(Situation s) {
  switch (s) {
    case Situation::general_only: return "general-only";
    case Situation::stop_and_wait: return "stop-and-wait";
    case Situation::non_stop: return "non-stop";
  }
  return "?";
}

Scenario generate_scenario(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.n_pedestrians < 0)
    throw std::invalid_argument("n_pedestrians must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(cfg.spawn.x_min, cfg.spawn.x_max);
  std::uniform_real_distribution<double> uy(cfg.spawn.y_min, cfg.spawn.y_max);
  std::uniform_real_distribution<double> uspeed(cfg.desired_speed_min, cfg.desired_speed_max);
  std::uniform_int_distribution<int> udir(0, 1);

  Scenario scenario;
  scenario.crowd.reserve(cfg.n_pedestrians);
  for (int i = 0; i < cfg.n_pedestrians; ++i) {
    PedestrianState ped;
    ped.id = i;
    ped.position = Vec2(ux(rng), uy(rng));
    const double dir = udir(rng) == 0 ? 1.0 : -1.0;
    ped.destination = Vec2(ped.position.x(), dir * cfg.crossing_exit_y);
    ped.desired_speed = uspeed(rng);
    ped.mass = cfg.ped_mass;
    ped.radius = cfg.ped_radius;
    const Vec2 to_dest = ped.destination - ped.position;
    const double dist = to_dest.norm();
    ped.velocity = dist > 1e-12 ? Vec2(ped.desired_speed * to_dest / dist) : Vec2::Zero();
    scenario.crowd.push_back(ped);
  }
  scenario.vehicle = {cfg.vehicle_start_s, cfg.vehicle_start_v};
  return scenario;
}

EpisodeRecord run_episode(const RunConfig& cfg, std::uint64_t seed, ControllerKind kind,
                          std::ostream* force_trace) {
  Scenario scenario = generate_scenario(cfg, seed);
  std::vector<PedestrianState> crowd = std::move(scenario.crowd);
  VehicleState veh = scenario.vehicle;

  const DiscreteModel model = discretize(cfg.vehicle, cfg.dt);
  Supervisor supervisor(cfg);
  PidState pid = cfg.pid;
  pid.dt = cfg.dt;

  EpisodeRecord rec;
  rec.controller = kind;
  rec.seed = seed;

  if (force_trace)
    *force_trace << "t,ped_id,fr_x,fr_y,fc_x,fc_y,fn_x,fn_y,fv_x,fv_y,fd_x,fd_y,beta\n";

  const double half_len = 0.5 * cfg.vehicle.length;
  const double half_wid = 0.5 * cfg.vehicle.width;
  const int max_steps = static_cast<int>(std::ceil(cfg.time_cap / cfg.dt));
  double u_prev = 0.0;

  for (int step = 0; step < max_steps; ++step) {
    const double t = step * cfg.dt;

    ControlDecision decision;
    if (kind == ControllerKind::mpc) {
      decision = supervisor.control_step(veh, crowd, u_prev, pid);
    } else {
      const double front = current_front_position(crowd, veh, cfg.vehicle, cfg.corridor_margin);
      decision.front_gap = front - veh.s;
      decision.source = ControlDecision::Source::pid;
      decision.feasible = false;
      const double v_ref =
          reference_speed(decision.front_gap, cfg.v_ref, cfg.d_safe, cfg.d_buffer);
      // Drag-balancing feedforward: at the reference speed the loop holds
      // u = friction * v_ref, so the baseline neither sags at cruise nor
      // keeps creeping when the reference drops to zero.
      const PidOutput out = pid_step(pid, veh.v, v_ref, cfg.vehicle.u_max,
                                     cfg.vehicle.friction * v_ref);
      pid = out.state;
      decision.u = out.u;
    }

    double min_dist = kNoPedestrianAhead;
    for (const PedestrianState& ped : crowd) {
      bool inside = false;
      const double d = rect_distance(ped.position, veh.s, half_len, half_wid, &inside);
      if (inside) rec.collided = true;
      min_dist = std::min(min_dist, d);
    }

    rec.rows.push_back({t, veh.s, veh.v, decision.u, decision.source,
                        decision.front_gap, min_dist});

    VehicleFootprint fp;
    fp.center = Vec2(veh.s, 0.0);
    fp.length = cfg.vehicle.length;
    fp.width = cfg.vehicle.width;
    fp.longitudinal_speed = std::max(0.0, veh.v);

    if (force_trace) {
      for (std::size_t i = 0; i < crowd.size(); ++i) {
        const ForceBreakdown fb =
            total_force(crowd[i], neighbors_of(crowd, i, cfg.crowd), &fp, cfg.crowd);
        write_force_trace_row(*force_trace, t, crowd[i], fb);
      }
    }

    crowd = step_crowd(crowd, &fp, cfg.dt, cfg.crowd);
    veh = step_vehicle(model, veh, decision.u);
    u_prev = decision.u;

    for (const PedestrianState& ped : crowd) {
      bool inside = false;
      rect_distance(ped.position, veh.s, half_len, half_wid, &inside);
      if (inside) rec.collided = true;
    }

    if (veh.s + half_len >= cfg.finish_line) {
      rec.completion_time = (step + 1) * cfg.dt;
      rec.timed_out = false;
      break;
    }
    if (step + 1 >= max_steps) {
      rec.completion_time = cfg.time_cap;
      rec.timed_out = true;
    }
  }

  // Stop windows: contiguous spans with v below threshold lasting at least
  // the configured minimum.
  int window = 0;
  auto flush_window = [&](int length) {
    const double duration = length * cfg.dt;
    if (duration >= cfg.stop_min_duration) {
      rec.stopped = true;
      rec.longest_wait = std::max(rec.longest_wait, duration);
    }
  };
  for (const StepRow& row : rec.rows) {
    if (row.v < cfg.stop_speed_threshold) {
      ++window;
    } else {
      flush_window(window);
      window = 0;
    }
  }
  flush_window(window);
  return rec;
}

PairedResult classify_pair(EpisodeRecord mpc, EpisodeRecord pid) {
  if (mpc.seed != pid.seed)
    throw std::invalid_argument("paired episodes must share a seed");
  PairedResult pair;
  pair.seed = mpc.seed;
  pair.dt_total = mpc.completion_time - pid.completion_time;
  if (mpc.stopped && pid.stopped) {
    pair.situation = Situation::stop_and_wait;
    pair.dt_longest_wait = mpc.longest_wait - pid.longest_wait;
  } else if (!mpc.stopped && !pid.stopped) {
    pair.situation = Situation::non_stop;
  } else {
    pair.situation = Situation::general_only;
  }
  pair.mpc = std::move(mpc);
  pair.pid = std::move(pid);
  return pair;
}

std::vector<PairedResult> run_pairs(const RunConfig& cfg) {
  const int n = cfg.episodes;
  std::vector<PairedResult> results(n);
  int workers = cfg.workers > 0 ? cfg.workers
                                : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, n));

  std::atomic<int> next{0};
  auto work = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
      EpisodeRecord mpc = run_episode(cfg, seed, ControllerKind::mpc);
      EpisodeRecord pid = run_episode(cfg, seed, ControllerKind::pid);
      results[i] = classify_pair(std::move(mpc), std::move(pid));
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return results;
}

namespace {

Histogram make_histogram(const std::vector<double>& values, double bin_width) {
  Histogram hist;
  hist.bin_width = bin_width;
  if (values.empty()) return hist;
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  const long first = static_cast<long>(std::floor(lo / bin_width));
  const long last = static_cast<long>(std::floor(hi / bin_width));
  hist.bins.resize(last - first + 1);
  for (std::size_t b = 0; b < hist.bins.size(); ++b) {
    hist.bins[b].left = (first + static_cast<long>(b)) * bin_width;
    hist.bins[b].right = hist.bins[b].left + bin_width;
  }
  for (double v : values) {
    const long idx = static_cast<long>(std::floor(v / bin_width)) - first;
    ++hist.bins[idx].count;
  }
  return hist;
}

std::optional<double> mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

Summary aggregate(const std::vector<PairedResult>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("aggregate requires at least one pair");
  Summary summary;
  summary.n_pairs = static_cast<int>(pairs.size());
  std::vector<double> all, waits, non_stop;
  for (const PairedResult& pair : pairs) {
    all.push_back(pair.dt_total);
    if (pair.mpc.collided || pair.pid.collided) ++summary.n_collisions;
    if (pair.situation == Situation::stop_and_wait) {
      ++summary.n_stop_and_wait;
      if (pair.dt_longest_wait) waits.push_back(*pair.dt_longest_wait);
    } else if (pair.situation == Situation::non_stop) {
      ++summary.n_non_stop;
      non_stop.push_back(pair.dt_total);
    }
  }
  summary.mean_dt_total = mean_of(all);
  summary.mean_dt_longest_wait = mean_of(waits);
  summary.mean_dt_total_non_stop = mean_of(non_stop);
  summary.hist_general = make_histogram(all, 0.5);
  summary.hist_stop_and_wait = make_histogram(waits, 0.5);
  summary.hist_non_stop = make_histogram(non_stop, 0.5);
  return summary;
}

void write_episode_csv(const EpisodeRecord& rec, std::ostream& out) {
  out << "t,s,v,u,source,front_gap,min_ped_distance\n";
  std::string line;
  for (const StepRow& row : rec.rows) {
    line.clear();
    append_number(line, row.t);
    line += ',';
    append_number(line, row.s);
    line += ',';
    append_number(line, row.v);
    line += ',';
    append_number(line, row.u);
    line += ',';
    line += row.source == ControlDecision::Source::mpc ? "mpc" : "pid";
    line += ',';
    append_number(line, row.front_gap);
    line += ',';
    append_number(line, row.min_ped_distance);
    line += '\n';
    out << line;
  }
}

std::string episode_csv_string(const EpisodeRecord& rec) {
  std::ostringstream os;
  write_episode_csv(rec, os);
  return os.str();
}

void write_histogram_csv(const Histogram& hist, std::ostream& out) {
  out << "bin_left,bin_right,count\n";
  std::string line;
  for (const HistogramBin& bin : hist.bins) {
    line.clear();
    append_number(line, bin.left);
    line += ',';
    append_number(line, bin.right);
    line += ',';
    line += std::to_string(bin.count);
    line += '\n';
    out << line;
  }
}

void write_pairs_csv(const std::vector<PairedResult>& pairs, std::ostream& out) {
  out << "seed,situation,dt_total,dt_longest_wait,mpc_completion,pid_completion,"
         "mpc_stopped,pid_stopped,collided\n";
  std::string line;
  for (const PairedResult& pair : pairs) {
    line.clear();
    line += std::to_string(pair.seed);
    line += ',';
    line += situation_name(pair.situation);
    line += ',';
    append_number(line, pair.dt_total);
    line += ',';
    if (pair.dt_longest_wait)
      append_number(line, *pair.dt_longest_wait);
    else
      line += "NA";
    line += ',';
    append_number(line, pair.mpc.completion_time);
    line += ',';
    append_number(line, pair.pid.completion_time);
    line += ',';
    line += pair.mpc.stopped ? '1' : '0';
    line += ',';
    line += pair.pid.stopped ? '1' : '0';
    line += ',';
    line += (pair.mpc.collided || pair.pid.collided) ? '1' : '0';
    line += '\n';
    out << line;
  }
}

std::vector<PairedResult> read_pairs_csv(std::istream& in) {
  std::vector<PairedResult> pairs;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty pairs CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    PairedResult pair;

    std::getline(ss, field, ',');
    pair.seed = std::stoull(field);
    std::getline(ss, field, ',');
    if (field == "stop-and-wait")
      pair.situation = Situation::stop_and_wait;
    else if (field == "non-stop")
      pair.situation = Situation::non_stop;
    else
      pair.situation = Situation::general_only;
    std::getline(ss, field, ',');
    pair.dt_total = std::stod(field);
    std::getline(ss, field, ',');
    if (field != "NA") pair.dt_longest_wait = std::stod(field);
    std::getline(ss, field, ',');
    pair.mpc.completion_time = std::stod(field);
    std::getline(ss, field, ',');
    pair.pid.completion_time = std::stod(field);
    std::getline(ss, field, ',');
    pair.mpc.stopped = field == "1";
    std::getline(ss, field, ',');
    pair.pid.stopped = field == "1";
    std::getline(ss, field, ',');
    pair.mpc.collided = field == "1";
    pair.mpc.seed = pair.pid.seed = pair.seed;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace crowdmpc
