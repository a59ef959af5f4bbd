// Command-line front end: run single scenarios, build maps from a
// scripted drive, batch-compare DWA vs MPC over seeds, and render SVG
// plots from saved records.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "navsim/report.hpp"
#include "navsim/runner.hpp"

namespace fs = std::filesystem;
using namespace navsim;

namespace {

ScenarioConfig build_config(const std::string& scenario,
                            const std::string& planner, std::uint64_t seed,
                            const std::vector<std::string>& config_files) {
  ScenarioConfig cfg = ScenarioConfig::defaults_with_noise();
  cfg.scenario = scenario;
  if (!planner.empty()) cfg.planner = planner_from_name(planner);
  cfg.seed = seed;
  for (const std::string& f : config_files) {
    KvConfig kv;
    kv.load_file(f);
    cfg.apply(kv);
  }
  return cfg;
}

// "a..b" inclusive, or a single number.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(
    const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const std::uint64_t v = std::stoull(s);
    return {v, v};
  }
  return {std::stoull(s.substr(0, dots)), std::stoull(s.substr(dots + 2))};
}

/// Scripted mapping drives per scenario: a perimeter loop for the
/// obstacle field, leg-turn-leg for the corner, a stop-short straight
/// run for the corridor.
std::vector<Twist> scripted_drive(Scenario s, const KinematicParams& p) {
  std::vector<Twist> cmds;
  auto straight = [&](double meters, double v) {
    const int n = static_cast<int>(std::lround(meters / (v * p.dt)));
    for (int i = 0; i < n; ++i) cmds.push_back(Twist{v, 0.0});
  };
  auto turn = [&](double radians) {
    const double w = radians >= 0 ? M_PI / 8.0 : -M_PI / 8.0;
    const int n = static_cast<int>(std::lround(std::abs(radians) /
                                               (std::abs(w) * p.dt)));
    for (int i = 0; i < n; ++i) cmds.push_back(Twist{0.0, w});
  };
  switch (s) {
    case Scenario::ObstacleField:
      // Rectangle loop just inside the walls, start (1.2, 1.2, 0).
      for (int side = 0; side < 4; ++side) {
        straight(7.6, 0.5);
        turn(M_PI / 2.0);
      }
      break;
    case Scenario::Corner:
      straight(3.2, 0.4);
      turn(M_PI / 2.0);
      straight(3.2, 0.4);
      break;
    case Scenario::StraightObstacle:
      straight(2.6, 0.5);
      turn(M_PI);  // look back down the corridor
      straight(1.8, 0.5);
      break;
  }
  return cmds;
}

Pose scripted_start(Scenario s) {
  switch (s) {
    case Scenario::ObstacleField: return Pose{1.2, 1.2, 0.0};
    case Scenario::Corner: return Pose{0.8, 1.2, 0.0};
    default: return Pose{0.6, 2.0, 0.0};
  }
}

int cmd_run(const std::string& scenario, const std::string& planner,
            std::uint64_t seed, const std::string& out,
            const std::vector<std::string>& configs) {
  ScenarioConfig cfg = build_config(scenario, planner, seed, configs);
  RunRecord rec = run_scenario(cfg);
  Metrics m = compute_metrics(rec, rec.global_path);

  fs::create_directories(out);
  write_record_csv(rec, (fs::path(out) / "record.csv").string());
  write_metrics_json(m, rec.outcome,
                     (fs::path(out) / "metrics.json").string());
  std::cout << "result scenario=" << cfg.scenario
            << " planner=" << planner_name(cfg.planner) << " seed=" << seed
            << " outcome=" << outcome_name(rec.outcome) << "\n";
  if (rec.outcome == Outcome::Success) return 0;
  std::cerr << "error: run did not succeed: outcome="
            << outcome_name(rec.outcome) << "\n";
  return 1;
}

int cmd_map(const std::string& scenario, std::uint64_t seed,
            const std::string& out, const std::vector<std::string>& configs) {
  ScenarioConfig cfg = build_config(scenario, "", seed, configs);
  const Scenario sc = scenario_from_name(cfg.scenario);
  const ScenarioWorld world = builtin_scenario(sc);

  MappingRunSetup setup;
  setup.kinematics = cfg.kinematics;
  setup.lidar = cfg.lidar;
  setup.noise = cfg.noise;
  setup.mapping = cfg.mapping;

  Rng rng(cfg.seed);
  MappingRunResult res =
      run_mapping(world.grid, scripted_start(sc),
                  scripted_drive(sc, cfg.kinematics), setup,
                  cfg.inflation.robot_radius, rng);
  fs::create_directories(out);
  save_map_file(res.map, (fs::path(out) / "map.txt").string());
  const double agreement = map_agreement(res.map, world.grid);
  {
    std::ofstream os(fs::path(out) / "mapping.json");
    os << "{\n  \"agreement\": " << agreement << ",\n  \"collided\": "
       << (res.collided ? "true" : "false")
       << ",\n  \"steps\": " << res.steps_run << "\n}\n";
  }
  std::cout << "result scenario=" << cfg.scenario << " agreement=" << agreement
            << " collided=" << res.collided << "\n";
  if (res.collided) {
    std::cerr << "error: scripted drive collided after " << res.steps_run
              << " steps\n";
    return 1;
  }
  return 0;
}

int cmd_compare(const std::string& scenario, const std::string& seeds,
                const std::string& out,
                const std::vector<std::string>& configs) {
  const auto [lo, hi] = parse_seed_range(seeds);
  std::vector<ComparePair> pairs;
  RunRecord first_dwa, first_mpc;
  for (std::uint64_t seed = lo; seed <= hi; ++seed) {
    ScenarioConfig dcfg = build_config(scenario, "dwa", seed, configs);
    ScenarioConfig mcfg = build_config(scenario, "mpc", seed, configs);
    RunRecord rd = run_scenario(dcfg);
    RunRecord rm = run_scenario(mcfg);
    if (seed == lo) {
      first_dwa = rd;
      first_mpc = rm;
    }
    pairs.push_back(ComparePair{seed, compute_metrics(rd, rd.global_path),
                                compute_metrics(rm, rm.global_path)});
  }
  CompareReport rep = compare(scenario, pairs);
  fs::create_directories(out);
  write_compare_csv(rep, (fs::path(out) / "report.csv").string());
  write_traces_svg(first_dwa, first_mpc,
                   (fs::path(out) / "traces.svg").string());
  std::cout << "result scenario=" << scenario << " seeds=" << seeds
            << " dwa_success=" << rep.dwa_success
            << " mpc_success=" << rep.mpc_success
            << " mpc_w_std_lower=" << rep.mpc_w_std_lower << "/"
            << pairs.size() << "\n";
  return 0;
}

RunRecord load_record_csv(const std::string& path, const std::string& scenario) {
  RunRecord rec;
  rec.world = builtin_scenario(scenario_from_name(scenario));
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open record: " + path);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() < 11) continue;
    RunRow r;
    r.time = vals[0];
    r.true_pose = Pose{vals[1], vals[2], vals[3]};
    r.est_pose = Pose{vals[4], vals[5], vals[6]};
    r.v = vals[7];
    r.w = vals[8];
    r.score = vals[9];
    r.blocked = vals[10] != 0.0;
    rec.rows.push_back(r);
  }
  return rec;
}

int cmd_plot(const std::string& scenario, const std::string& record,
             const std::string& out) {
  RunRecord rec = load_record_csv(record, scenario);
  fs::create_directories(out);
  write_trajectory_svg(rec, (fs::path(out) / "trajectory.svg").string());
  write_traces_svg(rec, RunRecord{}, (fs::path(out) / "traces.svg").string());
  std::cout << "result plotted rows=" << rec.rows.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic 2D differential-drive navigation benchmark"};
  app.require_subcommand(1);

  std::string scenario, planner = "mpc", out = "out", seeds = "1..20";
  std::string record;
  std::uint64_t seed = 1;
  std::vector<std::string> configs;

  auto add_common = [&](CLI::App* sub, bool with_planner) {
    sub->add_option("--scenario", scenario,
                    "builtin scenario name or map file")
        ->required();
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--config", configs,
                    "layered key=value config file (repeatable)");
    if (with_planner) {
      sub->add_option("--planner", planner, "dwa or mpc");
    }
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  add_common(run, true);

  CLI::App* map = app.add_subcommand("map", "scripted drive + grid mapping");
  add_common(map, false);

  CLI::App* cmp = app.add_subcommand("compare", "batch DWA vs MPC over seeds");
  add_common(cmp, false);
  cmp->add_option("--seeds", seeds, "seed range a..b");

  CLI::App* plot = app.add_subcommand("plot", "render SVGs from a record");
  plot->add_option("--scenario", scenario, "builtin scenario name")
      ->required();
  plot->add_option("--record", record, "record.csv path")->required();
  plot->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(scenario, planner, seed, out, configs);
    if (map->parsed()) return cmd_map(scenario, seed, out, configs);
    if (cmp->parsed()) return cmd_compare(scenario, seeds, out, configs);
    if (plot->parsed()) return cmd_plot(scenario, record, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
