#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crowdmpc/config.hpp"
#include "crowdmpc/sim_harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace crowdmpc;

namespace {

std::string format_mean(const std::optional<double>& mean) {
  if (!mean) return "N.A.";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *mean);
  return buf;
}

void write_density_table(const std::map<int, Summary, std::greater<int>>& by_density,
                         std::ostream& out) {
  out << "# of Ped. | General | Stop-and-Wait | Non-stop\n";
  for (const auto& [density, summary] : by_density) {
    out << density << " | " << format_mean(summary.mean_dt_total) << " | "
        << format_mean(summary.mean_dt_longest_wait) << " | "
        << format_mean(summary.mean_dt_total_non_stop) << "\n";
  }
}

json summary_to_json(int density, const Summary& s) {
  json j;
  j["n_pedestrians"] = density;
  j["pairs"] = s.n_pairs;
  j["stop_and_wait_pairs"] = s.n_stop_and_wait;
  j["non_stop_pairs"] = s.n_non_stop;
  j["collisions"] = s.n_collisions;
  j["mean_dt_total"] = s.mean_dt_total ? json(*s.mean_dt_total) : json();
  j["mean_dt_longest_wait"] =
      s.mean_dt_longest_wait ? json(*s.mean_dt_longest_wait) : json();
  j["mean_dt_total_non_stop"] =
      s.mean_dt_total_non_stop ? json(*s.mean_dt_total_non_stop) : json();
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_histograms(const fs::path& dir, int density, const Summary& summary) {
  const std::pair<const char*, const Histogram*> hists[] = {
      {"general", &summary.hist_general},
      {"stop_and_wait", &summary.hist_stop_and_wait},
      {"non_stop", &summary.hist_non_stop},
  };
  for (const auto& [name, hist] : hists) {
    std::ostringstream os;
    write_histogram_csv(*hist, os);
    write_file(dir / ("hist_" + std::string(name) + "_" + std::to_string(density) + ".csv"),
               os.str());
  }
}

int cmd_run(RunConfig cfg, std::vector<int> densities, const std::string& controller,
            bool full_scale) {
  if (full_scale) cfg.episodes = 2000;
  if (cfg.episodes < 1) {
    std::cerr << "error: run requires at least one episode\n";
    return 2;
  }
  cfg.validate();

  const fs::path out_dir = cfg.out_dir;
  fs::create_directories(out_dir);
  fs::create_directories(out_dir / "episodes");
  {
    std::ofstream cfg_out(out_dir / "config.txt");
    if (!cfg_out) {
      std::cerr << "error: output directory not writable: " << out_dir << "\n";
      return 2;
    }
    dump_config(cfg, cfg_out);
  }

  if (densities.empty()) densities = {cfg.n_pedestrians};

  bool any_collision = false;

  if (controller != "both") {
    const ControllerKind kind =
        controller == "mpc" ? ControllerKind::mpc : ControllerKind::pid;
    cfg.n_pedestrians = densities.front();
    for (int i = 0; i < cfg.episodes; ++i) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
      std::ofstream trace;
      if (cfg.trace) {
        trace.open(out_dir / "episodes" /
                   ("forces_" + std::to_string(seed) + "_" + controller + ".csv"));
      }
      const EpisodeRecord rec =
          run_episode(cfg, seed, kind, cfg.trace ? &trace : nullptr);
      any_collision |= rec.collided;
      write_file(out_dir / "episodes" /
                     ("ep_" + std::to_string(cfg.n_pedestrians) + "_" +
                      std::to_string(seed) + "_" + controller + ".csv"),
                 episode_csv_string(rec));
    }
    if (any_collision) {
      std::cerr << "error: collision detected\n";
      return 3;
    }
    std::cout << "wrote " << cfg.episodes << " " << controller << " episode logs to "
              << (out_dir / "episodes") << "\n";
    return 0;
  }

  std::map<int, Summary, std::greater<int>> by_density;
  json densities_json = json::array();
  for (int density : densities) {
    RunConfig dcfg = cfg;
    dcfg.n_pedestrians = density;
    const std::vector<PairedResult> pairs = run_pairs(dcfg);
    const Summary summary = aggregate(pairs);
    any_collision |= summary.n_collisions > 0;

    for (const PairedResult& pair : pairs) {
      const std::string base = "ep_" + std::to_string(density) + "_" +
                               std::to_string(pair.seed) + "_";
      write_file(out_dir / "episodes" / (base + "mpc.csv"),
                 episode_csv_string(pair.mpc));
      write_file(out_dir / "episodes" / (base + "pid.csv"),
                 episode_csv_string(pair.pid));
    }
    std::ostringstream pairs_csv;
    write_pairs_csv(pairs, pairs_csv);
    write_file(out_dir / ("pairs_" + std::to_string(density) + ".csv"), pairs_csv.str());
    write_histograms(out_dir, density, summary);

    densities_json.push_back(summary_to_json(density, summary));
    by_density.emplace(density, summary);
  }

  json root;
  root["seed"] = cfg.seed;
  root["episodes"] = cfg.episodes;
  root["densities"] = densities_json;
  write_file(out_dir / "summary.json", root.dump(2) + "\n");

  std::ostringstream table;
  write_density_table(by_density, table);
  write_file(out_dir / "table.txt", table.str());
  std::cout << "Average time difference (s), MPC - PID:\n" << table.str();

  if (any_collision) {
    std::cerr << "error: collision detected during the run\n";
    return 3;
  }
  return 0;
}

int cmd_report(const std::string& dir_arg) {
  const fs::path dir = dir_arg;
  std::map<int, Summary, std::greater<int>> by_density;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("pairs_", 0) != 0 || entry.path().extension() != ".csv") continue;
      const int density = std::stoi(name.substr(6));
      std::ifstream in(entry.path());
      const std::vector<PairedResult> pairs = read_pairs_csv(in);
      if (pairs.empty()) continue;
      const Summary summary = aggregate(pairs);
      by_density.emplace(density, summary);
      write_histograms(dir, density, summary);
    }
  }
  if (by_density.empty()) {
    std::cerr << "error: no pairs_<density>.csv files in " << dir << "\n";
    return 2;
  }
  std::ostringstream table;
  write_density_table(by_density, table);
  write_file(dir / "table.txt", table.str());
  std::cout << table.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPC + social-force crowd interaction speed regulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<int> densities;
  int episodes = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string controller = "both";
  int workers = -1;
  std::string out_dir;
  bool trace = false;
  bool full_scale = false;

  CLI::App* run = app.add_subcommand("run", "run simulation episodes");
  run->add_option("--config", config_path, "config file (key = value)");
  run->add_option("--n-ped", densities, "pedestrian density (repeatable)");
  run->add_option("--episodes", episodes, "episode pairs per density");
  run->add_option("--seed", seed, "base RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--controller", controller, "mpc, pid, or both")
      ->check(CLI::IsMember({"mpc", "pid", "both"}));
  run->add_option("--workers", workers, "worker thread count");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--trace", trace, "emit per-step force traces");
  run->add_flag("--full-scale", full_scale, "run 2000 pairs per density");

  std::string report_dir;
  CLI::App* report = app.add_subcommand("report", "regenerate tables from a finished run");
  report->add_option("--out", report_dir, "directory of a completed run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
      if (episodes >= 0) cfg.episodes = episodes;
      if (seed_set) cfg.seed = seed;
      if (workers >= 0) cfg.workers = workers;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (trace) cfg.trace = true;
      if (const char* env_seed = std::getenv("CROWD_MPC_SEED"))
        cfg.seed = std::stoull(env_seed);
      return cmd_run(std::move(cfg), std::move(densities), controller, full_scale);
    }
    return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
