#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "crowdmpc/sim_harness.hpp"

using namespace crowdmpc;

TEST_CASE("generate_scenario") {
  RunConfig cfg;

  SUBCASE("empty crowd") {
    cfg.n_pedestrians = 0;
    CHECK(generate_scenario(cfg, 42).crowd.empty());
  }

  SUBCASE("same seed, same crowd") {
    cfg.n_pedestrians = 12;
    const Scenario a = generate_scenario(cfg, 42);
    const Scenario b = generate_scenario(cfg, 42);
    REQUIRE(a.crowd.size() == b.crowd.size());
    for (std::size_t i = 0; i < a.crowd.size(); ++i) {
      CHECK(a.crowd[i].position == b.crowd[i].position);
      CHECK(a.crowd[i].velocity == b.crowd[i].velocity);
      CHECK(a.crowd[i].destination == b.crowd[i].destination);
      CHECK(a.crowd[i].desired_speed == b.crowd[i].desired_speed);
    }
  }

  SUBCASE("everyone spawns inside the rectangle, crossing out of it") {
    cfg.n_pedestrians = 30;
    const Scenario s = generate_scenario(cfg, 7);
    REQUIRE(s.crowd.size() == 30);
    for (const PedestrianState& ped : s.crowd) {
      CHECK(ped.position.x() >= cfg.spawn.x_min);
      CHECK(ped.position.x() <= cfg.spawn.x_max);
      CHECK(ped.position.y() >= cfg.spawn.y_min);
      CHECK(ped.position.y() <= cfg.spawn.y_max);
      CHECK(std::abs(ped.destination.y()) == cfg.crossing_exit_y);
      CHECK(ped.desired_speed >= cfg.desired_speed_min);
      CHECK(ped.desired_speed <= cfg.desired_speed_max);
    }
  }

  SUBCASE("different seeds differ") {
    cfg.n_pedestrians = 5;
    const Scenario a = generate_scenario(cfg, 1);
    const Scenario b = generate_scenario(cfg, 2);
    CHECK(a.crowd[0].position != b.crowd[0].position);
  }
}

TEST_CASE("empty-road episode completes at cruise speed") {
  RunConfig cfg;
  cfg.n_pedestrians = 0;
  // front bumper starts 60 m before the finish line
  cfg.vehicle_start_s = cfg.finish_line - 60.0 - 0.5 * cfg.vehicle.length;
  const EpisodeRecord rec = run_episode(cfg, 3, ControllerKind::mpc);
  CHECK_FALSE(rec.timed_out);
  CHECK_FALSE(rec.collided);
  CHECK_FALSE(rec.stopped);
  CHECK(rec.completion_time == doctest::Approx(15.0).epsilon(0.1 / 15.0));
}

TEST_CASE("permanent blockage times out as a stop") {
  RunConfig cfg;
  cfg.n_pedestrians = 0;
  cfg.time_cap = 30.0;
  // Fake a wall by ending the corridor: put the finish line unreachably far
  // and block with a standing pedestrian glued to its spot on the line.
  RunConfig blocked = cfg;
  blocked.n_pedestrians = 1;
  blocked.spawn = {29.999, 30.001, -0.001, 0.001};
  blocked.crossing_exit_y = 0.0;  // destination on the spot: it never moves far
  blocked.crowd.a_veh = 0.0;      // the vehicle cannot push it away
  blocked.desired_speed_min = blocked.desired_speed_max = 0.0;
  const EpisodeRecord rec = run_episode(blocked, 11, ControllerKind::mpc);
  CHECK(rec.timed_out);
  CHECK(rec.stopped);
  CHECK(rec.longest_wait > 5.0);
  CHECK(rec.completion_time == blocked.time_cap);
  CHECK_FALSE(rec.collided);
}

TEST_CASE("classify_pair") {
  EpisodeRecord mpc, pid;
  mpc.seed = pid.seed = 9;
  mpc.completion_time = 14.0;
  pid.completion_time = 15.5;

  SUBCASE("both stopped") {
    mpc.stopped = pid.stopped = true;
    mpc.longest_wait = 2.0;
    pid.longest_wait = 3.0;
    const PairedResult pair = classify_pair(mpc, pid);
    CHECK(pair.situation == Situation::stop_and_wait);
    REQUIRE(pair.dt_longest_wait.has_value());
    CHECK(*pair.dt_longest_wait == doctest::Approx(-1.0));
    CHECK(pair.dt_total == doctest::Approx(-1.5));
  }

  SUBCASE("both non-stop") {
    const PairedResult pair = classify_pair(mpc, pid);
    CHECK(pair.situation == Situation::non_stop);
    CHECK_FALSE(pair.dt_longest_wait.has_value());
  }

  SUBCASE("mixed") {
    mpc.stopped = true;
    mpc.longest_wait = 1.0;
    const PairedResult pair = classify_pair(mpc, pid);
    CHECK(pair.situation == Situation::general_only);
  }

  SUBCASE("mismatched seeds rejected") {
    pid.seed = 10;
    CHECK_THROWS_AS(classify_pair(mpc, pid), std::invalid_argument);
  }
}

TEST_CASE("aggregate") {
  auto make_pair = [](std::uint64_t seed, double dt_total, Situation situation,
                      std::optional<double> wait) {
    PairedResult pair;
    pair.seed = seed;
    pair.dt_total = dt_total;
    pair.situation = situation;
    pair.dt_longest_wait = wait;
    return pair;
  };

  SUBCASE("identical records give zero means") {
    const std::vector<PairedResult> pairs = {
        make_pair(1, 0.0, Situation::non_stop, std::nullopt),
        make_pair(2, 0.0, Situation::non_stop, std::nullopt)};
    const Summary s = aggregate(pairs);
    CHECK(*s.mean_dt_total == 0.0);
    CHECK(*s.mean_dt_total_non_stop == 0.0);
    CHECK_FALSE(s.mean_dt_longest_wait.has_value());  // empty category is absent
  }

  SUBCASE("simple arithmetic") {
    const std::vector<PairedResult> pairs = {
        make_pair(1, -1.0, Situation::general_only, std::nullopt),
        make_pair(2, -2.0, Situation::stop_and_wait, -0.5)};
    const Summary s = aggregate(pairs);
    CHECK(*s.mean_dt_total == doctest::Approx(-1.5));
    CHECK(*s.mean_dt_longest_wait == doctest::Approx(-0.5));
    CHECK(s.n_stop_and_wait == 1);
  }

  SUBCASE("empty input rejected") {
    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
  }

  SUBCASE("histogram bins are half-second wide and cover the data") {
    const std::vector<PairedResult> pairs = {
        make_pair(1, -1.2, Situation::general_only, std::nullopt),
        make_pair(2, 0.7, Situation::general_only, std::nullopt),
        make_pair(3, -1.3, Situation::general_only, std::nullopt)};
    const Summary s = aggregate(pairs);
    int total = 0;
    for (const HistogramBin& bin : s.hist_general.bins) {
      CHECK(bin.right - bin.left == doctest::Approx(0.5));
      total += bin.count;
    }
    CHECK(total == 3);
  }
}

TEST_CASE("paired episodes share the initial crowd and replay bit-exactly") {
  RunConfig cfg;
  cfg.n_pedestrians = 8;
  cfg.time_cap = 40.0;
  const EpisodeRecord mpc_a = run_episode(cfg, 77, ControllerKind::mpc);
  const EpisodeRecord mpc_b = run_episode(cfg, 77, ControllerKind::mpc);
  const EpisodeRecord pid_a = run_episode(cfg, 77, ControllerKind::pid);
  const EpisodeRecord pid_b = run_episode(cfg, 77, ControllerKind::pid);
  CHECK(episode_csv_string(mpc_a) == episode_csv_string(mpc_b));
  CHECK(episode_csv_string(pid_a) == episode_csv_string(pid_b));
  CHECK(episode_csv_string(mpc_a) != episode_csv_string(pid_a));
}

TEST_CASE("run_pairs produces classified, seed-aligned results") {
  RunConfig cfg;
  cfg.n_pedestrians = 6;
  cfg.episodes = 3;
  cfg.seed = 100;
  cfg.time_cap = 40.0;
  cfg.workers = 2;
  const std::vector<PairedResult> pairs = run_pairs(cfg);
  REQUIRE(pairs.size() == 3);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].seed == 100 + i);
    CHECK(pairs[i].mpc.seed == pairs[i].pid.seed);
  }
}

TEST_CASE("pairs CSV round trip preserves the metrics") {
  RunConfig cfg;
  cfg.n_pedestrians = 5;
  cfg.episodes = 2;
  cfg.time_cap = 40.0;
  const std::vector<PairedResult> pairs = run_pairs(cfg);
  std::stringstream ss;
  write_pairs_csv(pairs, ss);
  const std::vector<PairedResult> back = read_pairs_csv(ss);
  REQUIRE(back.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(back[i].seed == pairs[i].seed);
    CHECK(back[i].situation == pairs[i].situation);
    CHECK(back[i].dt_total == doctest::Approx(pairs[i].dt_total));
  }
}

TEST_CASE("force trace has the documented columns") {
  RunConfig cfg;
  cfg.n_pedestrians = 2;
  cfg.time_cap = 1.0;
  std::ostringstream trace;
  run_episode(cfg, 5, ControllerKind::mpc, &trace);
  std::istringstream in(trace.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,ped_id,fr_x,fr_y,fc_x,fc_y,fn_x,fn_y,fv_x,fv_y,fd_x,fd_y,beta");
  std::string row;
  CHECK(std::getline(in, row));
}
