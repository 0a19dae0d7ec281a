#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crowdmpc/config.hpp"
#include "crowdmpc/supervisor.hpp"

namespace crowdmpc {

enum class ControllerKind { mpc, pid };

struct StepRow {
  double t = 0.0;
  double s = 0.0;
  double v = 0.0;
  double u = 0.0;
  ControlDecision::Source source = ControlDecision::Source::mpc;
  double front_gap = 0.0;
  double min_ped_distance = 0.0;
};

struct EpisodeRecord {
  ControllerKind controller = ControllerKind::mpc;
  std::uint64_t seed = 0;
  std::vector<StepRow> rows;
  double completion_time = 0.0;
  bool timed_out = false;
  double longest_wait = 0.0;  // s, longest qualifying stop window
  bool stopped = false;
  bool collided = false;
};

enum class Situation { general_only, stop_and_wait, non_stop };

struct PairedResult {
  std::uint64_t seed = 0;
  EpisodeRecord mpc;
  EpisodeRecord pid;
  Situation situation = Situation::general_only;
  double dt_total = 0.0;  // mpc completion - pid completion
  std::optional<double> dt_longest_wait;  // only for stop-and-wait pairs
};

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  int count = 0;
};

struct Histogram {
  double bin_width = 0.5;
  std::vector<HistogramBin> bins;
};

struct Summary {
  int n_pairs = 0;
  int n_stop_and_wait = 0;
  int n_non_stop = 0;
  int n_collisions = 0;
  std::optional<double> mean_dt_total;             // general situation
  std::optional<double> mean_dt_longest_wait;      // stop-and-wait pairs
  std::optional<double> mean_dt_total_non_stop;    // non-stop pairs
  Histogram hist_general;
  Histogram hist_stop_and_wait;
  Histogram hist_non_stop;
};

struct Scenario {
  std::vector<PedestrianState> crowd;
  VehicleState vehicle;
};

/// Seeded, deterministic placement: uniform positions in the spawn
/// rectangle, crossing direction +-y with mirrored exit destinations,
/// desired speeds uniform in the configured range.
Scenario generate_scenario(const RunConfig& cfg, std::uint64_t seed);

/// Runs one closed-loop episode at the configured time step. The crowd is
/// always advanced by the true interaction model; the controller is either
/// the MPC supervisor (with PID fallback) or the standalone PID baseline.
/// Optional streams receive the per-step force trace and decision log.
EpisodeRecord run_episode(const RunConfig& cfg, std::uint64_t seed, ControllerKind kind,
                          std::ostream* force_trace = nullptr);

/// Throws on mismatched seeds.
PairedResult classify_pair(EpisodeRecord mpc, EpisodeRecord pid);

/// Runs `cfg.episodes` MPC/PID pairs (seeds cfg.seed, cfg.seed+1, ...)
/// on a bounded worker pool. Results are ordered by pair index.
std::vector<PairedResult> run_pairs(const RunConfig& cfg);

Summary aggregate(const std::vector<PairedResult>& pairs);

void write_episode_csv(const EpisodeRecord& rec, std::ostream& out);
std::string episode_csv_string(const EpisodeRecord& rec);
void write_histogram_csv(const Histogram& hist, std::ostream& out);
void write_pairs_csv(const std::vector<PairedResult>& pairs, std::ostream& out);
std::vector<PairedResult> read_pairs_csv(std::istream& in);  // metrics only

const char* situation_name(Situation s);

}  // namespace crowdmpc
