#include "rdrl/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rdrl/cli/config.hpp"
#include "rdrl/common/strict_json.hpp"
#include "rdrl/eval/evaluation.hpp"

namespace rdrl::cli {
namespace fs = std::filesystem;
namespace {

/// Thrown for bad inputs (exit 2); anything else escaping a command is exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

agents::Checkpoint load_checkpoint_checked(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("checkpoint '" + path.string() + "' does not exist");
  try {
    return agents::load_checkpoint(path);
  } catch (const agents::CheckpointError& e) {
    throw UsageError(e.what());
  }
}

/// Environment the checkpoint was trained in, unless a config file overrides it.
env::EnvConfig env_for_checkpoint(const agents::Checkpoint& ckpt, const std::string& config_path,
                                  const std::string& scenario, int ambient) {
  env::EnvConfig cfg;
  if (!config_path.empty()) {
    cfg = load_run_config(config_path).train.env;
  } else if (ckpt.metadata.contains("run_config")) {
    cfg = parse_run_config(ckpt.metadata.at("run_config")).train.env;
  } else if (ckpt.metadata.contains("scenario")) {
    cfg.scenario = env::parse_scenario(ckpt.metadata.at("scenario").get<std::string>());
  }
  if (!scenario.empty()) {
    try {
      cfg.scenario = env::parse_scenario(scenario);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (ambient >= 0) cfg.ambient_vehicles = ambient;
  return cfg;
}

struct TrainOutcome {
  agents::TrainResult result;
  std::string curve_csv;
};

TrainOutcome train_to_dir(const RunConfig& cfg) {
  std::ostringstream curve;
  TrainOutcome out{agents::train(cfg.train, {}, &curve), curve.str()};
  out.result.checkpoint.metadata["run_config"] = to_json(cfg);
  fs::create_directories(cfg.output_dir);
  agents::save_checkpoint(cfg.output_dir / "checkpoint.bin", out.result.checkpoint);
  write_text(cfg.output_dir / "learning_curve.csv", out.curve_csv);
  write_text(cfg.output_dir / "resolved_config.json", to_json(cfg).dump(2) + "\n");
  const nlohmann::json sidecar{{"created_utc", utc_timestamp()},
                               {"episodes_run", out.result.curve.size()}};
  write_text(cfg.output_dir / "run_metadata.json", sidecar.dump(2) + "\n");
  return out;
}

double final_window_metric(const std::vector<agents::EpisodeRecord>& curve) {
  if (curve.empty()) return 0.0;
  const int window = std::max(1, static_cast<int>(std::ceil(0.1 * static_cast<double>(curve.size()))));
  return agents::trailing_mean_return(curve, window);
}

eval::WeightVector load_weights(const std::string& path) {
  eval::WeightVector w;
  if (path.empty()) return w;
  const nlohmann::json j = read_json_file(path);
  const nlohmann::json* src = &j;
  if (j.is_object() && j.contains("weights")) src = &j.at("weights");
  try {
    if (src->is_array()) {
      if (src->size() != eval::kIndicatorCount)
        throw UsageError("weights file must list exactly 5 weights");
      for (int i = 0; i < eval::kIndicatorCount; ++i) w.values[i] = src->at(i).get<double>();
    } else {
      StrictObject o(*src, "weights");
      for (int i = 0; i < eval::kIndicatorCount; ++i) o.get(eval::kIndicatorNames[i], w.values[i]);
      o.finish();
    }
    w.validate();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("weights file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("weights file: ") + e.what());
  }
  return w;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    cells.push_back(cell);
  }
  return cells;
}

// ---- subcommands ----

struct TrainArgs {
  std::string config;
  std::optional<int> episodes;
  std::optional<std::uint64_t> seed;
  std::string output, algorithm, scenario;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  if (!fs::exists(a.config)) throw UsageError("config file '" + a.config + "' does not exist");
  nlohmann::json j = read_json_file(a.config);
  if (!j.is_object()) throw UsageError("config '" + a.config + "' must be a JSON object");
  if (a.episodes) j["episodes"] = *a.episodes;
  if (a.seed) j["seed"] = *a.seed;
  if (!a.output.empty()) j["output_dir"] = a.output;
  if (!a.algorithm.empty()) j["algorithm"] = a.algorithm;
  if (!a.scenario.empty()) j["scenario"] = a.scenario;
  const RunConfig cfg = parse_run_config(j);
  const auto outcome = train_to_dir(cfg);
  const auto& curve = outcome.result.curve;
  out << "trained " << agents::to_string(cfg.train.algorithm) << " on "
      << env::to_string(cfg.train.env.scenario) << " for " << curve.size() << " episodes; final-window mean return "
      << final_window_metric(curve) << "\n"
      << "wrote " << (cfg.output_dir / "checkpoint.bin").string() << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string grid, config, output = "runs/sweep";
  int workers = 1;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::exists(a.grid)) throw UsageError("grid file '" + a.grid + "' does not exist");
  if (!fs::exists(a.config)) throw UsageError("config file '" + a.config + "' does not exist");
  if (a.workers < 1) throw UsageError("workers must be >= 1");
  const SweepGrid grid = parse_sweep_grid(read_json_file(a.grid));
  const nlohmann::json base = read_json_file(a.config);
  const RunConfig base_cfg = parse_run_config(base);
  const int budget = std::max(1, static_cast<int>(std::lround(grid.budget_fraction * base_cfg.train.episodes)));
  const auto combos = grid.combinations();

  struct Row {
    std::size_t index = 0;
    double metric = 0.0;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(combos.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < combos.size(); i = next++) {
      Row& row = rows[i];
      row.index = i;
      try {
        nlohmann::json j = base;
        for (const auto& [name, value] : combos[i]) apply_override(j, name, value);
        j["episodes"] = budget;
        std::ostringstream dir;
        dir << "run_" << std::setw(3) << std::setfill('0') << i;
        j["output_dir"] = (fs::path(a.output) / dir.str()).string();
        const auto outcome = train_to_dir(parse_run_config(j));
        row.metric = final_window_metric(outcome.result.curve);
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
        std::lock_guard lock(log_mutex);
        err << "sweep run " << i << " failed: " << e.what() << "\n";
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(a.workers, static_cast<int>(combos.size()));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.ok != y.ok) return x.ok;
    return x.ok && x.metric > y.metric;
  });
  std::ostringstream csv;
  csv << std::setprecision(10) << "rank,run,status,metric";
  for (const auto& axis : grid.axes) csv << ',' << axis.first;
  csv << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    csv << r + 1 << ",run_" << std::setw(3) << std::setfill('0') << row.index << std::setfill(' ')
        << ',' << (row.ok ? "ok" : "failed") << ',';
    if (row.ok) csv << row.metric;
    for (const auto& kv : combos[row.index]) csv << ',' << kv.second.dump();
    csv << '\n';
  }
  write_text(fs::path(a.output) / "ranking.csv", csv.str());
  out << "swept " << combos.size() << " combinations at " << budget << " episodes each; wrote "
      << (fs::path(a.output) / "ranking.csv").string() << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string checkpoint, scenario, config, output, csv, weights;
  int rounds = 50;
  int ambient = -1;
  std::uint64_t seed = 0;
};

int cmd_evaluate(const EvalArgs& a, std::ostream& out) {
  if (a.rounds < 1) throw UsageError("rounds must be >= 1");
  const auto ckpt = load_checkpoint_checked(a.checkpoint);
  const env::EnvConfig cfg = env_for_checkpoint(ckpt, a.config, a.scenario, a.ambient);
  eval::EvalOptions opt;
  opt.rounds = a.rounds;
  opt.seed = a.seed;
  opt.weights = load_weights(a.weights);
  eval::MetricReport report;
  try {
    report = eval::run_evaluation(ckpt, cfg, opt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  nlohmann::json j = eval::to_json(report);
  j["scenario"] = std::string(env::to_string(cfg.scenario));
  j["seed"] = a.seed;
  const std::string text = j.dump(2) + "\n";
  if (a.output.empty())
    out << text;
  else
    write_text(a.output, text);
  if (!a.csv.empty()) {
    std::ostringstream s;
    eval::write_indicator_csv(s, report);
    write_text(a.csv, s.str());
  }
  return kExitOk;
}

struct ScoreArgs {
  std::string indicators, weights;
};

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  std::ifstream in(a.indicators);
  if (!in) throw UsageError("cannot open indicators file '" + a.indicators + "'");
  const eval::WeightVector w = load_weights(a.weights);
  std::string line;
  if (!std::getline(in, line)) throw UsageError("indicators file is empty");
  const auto header = split_csv(line);
  std::array<int, eval::kIndicatorCount> column{};
  for (int i = 0; i < eval::kIndicatorCount; ++i) {
    auto it = std::find(header.begin(), header.end(), eval::kIndicatorNames[i]);
    if (it == header.end())
      throw UsageError("indicators header lacks column '" + eval::kIndicatorNames[i] + "'");
    column[i] = static_cast<int>(it - header.begin());
  }
  int line_no = 1, rows = 0;
  out << std::setprecision(10);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw UsageError("indicators line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " fields, header has " + std::to_string(header.size()));
    eval::Indicators ind{};
    for (int i = 0; i < eval::kIndicatorCount; ++i) {
      try {
        std::size_t used = 0;
        const std::string& cell = cells[static_cast<std::size_t>(column[i])];
        ind[i] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError("indicators line " + std::to_string(line_no) + ": '" +
                         cells[static_cast<std::size_t>(column[i])] + "' is not a number");
      }
    }
    out << eval::score(ind, w) << "\n";
    ++rows;
  }
  if (rows == 0) throw UsageError("indicators file has no data rows");
  return kExitOk;
}

struct TraceArgs {
  std::string checkpoint, scenario, config, output;
  int ambient = -1;
  std::uint64_t seed = 0;
};

int cmd_trace(const TraceArgs& a, std::ostream& out) {
  const auto ckpt = load_checkpoint_checked(a.checkpoint);
  const env::EnvConfig cfg = env_for_checkpoint(ckpt, a.config, a.scenario, a.ambient);
  env::DrivingEnv env(cfg);
  if (ckpt.metadata.value("observation_size", -1) != env.observation_size())
    throw UsageError("checkpoint observation size does not match the environment");
  const auto agent = agents::agent_from_checkpoint(ckpt);
  std::ostringstream csv;
  csv << std::setprecision(10);
  env::write_trace_header(csv);
  Eigen::VectorXd obs = env::flatten(env.reset(derive_seed(a.seed, "trace")));
  bool done = false;
  while (!done) {
    const Eigen::VectorXd act = agent->act_deterministic(obs);
    const auto r = env.step(env::ContinuousAction{act(0), act(1)});
    env::write_trace_row(csv, r);
    obs = env::flatten(r.observation);
    done = r.terminated;
  }
  if (a.output.empty())
    out << csv.str();
  else
    write_text(a.output, csv.str());
  return kExitOk;
}

struct AdaptArgs {
  std::string checkpoint, config, output;
  std::vector<std::string> scenarios{"highway", "merge"};
  int rounds = 20;
  int ambient = -1;
  std::uint64_t seed = 0;
};

int cmd_adapt(const AdaptArgs& a, std::ostream& out) {
  if (a.rounds < 1) throw UsageError("rounds must be >= 1");
  const auto ckpt = load_checkpoint_checked(a.checkpoint);
  const env::EnvConfig cfg = env_for_checkpoint(ckpt, a.config, "", a.ambient);
  std::vector<env::Scenario> scenarios;
  try {
    for (const auto& s : a.scenarios) scenarios.push_back(env::parse_scenario(s));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : eval::adaptability_report(ckpt, cfg, scenarios, a.rounds, a.seed))
    j.push_back(eval::to_json(e));
  const std::string text = j.dump(2) + "\n";
  if (a.output.empty())
    out << text;
  else
    write_text(a.output, text);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reinforcement-learning driving decisions: train, sweep, evaluate, score, trace"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train one agent from a JSON run config");
  t->add_option("config", train.config, "Run config (JSON)")->required();
  t->add_option("--episodes", train.episodes, "Override the episode count");
  t->add_option("--seed", train.seed, "Override the root seed");
  t->add_option("--output", train.output, "Override the output directory");
  t->add_option("--algorithm", train.algorithm, "Override the algorithm (ddpg, ppo, trpo)");
  t->add_option("--scenario", train.scenario, "Override the scenario (roundabout, highway, merge)");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Grid search over hyperparameters with a reduced budget");
  s->add_option("grid", sweep.grid, "Sweep grid (JSON)")->required();
  s->add_option("config", sweep.config, "Base run config (JSON)")->required();
  s->add_option("--output", sweep.output, "Directory for runs and ranking.csv");
  s->add_option("--workers", sweep.workers, "Concurrent training runs");

  EvalArgs ev;
  auto* e = app.add_subcommand("evaluate", "Deterministic multi-round evaluation of a checkpoint");
  e->add_option("checkpoint", ev.checkpoint, "Checkpoint file")->required();
  e->add_option("--scenario", ev.scenario, "Scenario (default: the training scenario)");
  e->add_option("--rounds", ev.rounds, "Evaluation rounds");
  e->add_option("--seed", ev.seed, "Root seed for round initial conditions");
  e->add_option("--config", ev.config, "Run config supplying environment settings");
  e->add_option("--ambient", ev.ambient, "Override the ambient vehicle count");
  e->add_option("--weights", ev.weights, "Indicator weights (JSON)");
  e->add_option("--output", ev.output, "MetricReport JSON path (default: stdout)");
  e->add_option("--csv", ev.csv, "Also write the indicator row as CSV");

  ScoreArgs sc;
  auto* c = app.add_subcommand("score", "Weighted total score of indicator rows");
  c->add_option("indicators", sc.indicators, "CSV with the five indicator columns")->required();
  c->add_option("--weights", sc.weights, "Indicator weights (JSON, default: built-in)");

  TraceArgs tr;
  auto* r = app.add_subcommand("trace", "Per-step CSV of one deterministic episode");
  r->add_option("checkpoint", tr.checkpoint, "Checkpoint file")->required();
  r->add_option("--scenario", tr.scenario, "Scenario (default: the training scenario)");
  r->add_option("--seed", tr.seed, "Episode seed");
  r->add_option("--config", tr.config, "Run config supplying environment settings");
  r->add_option("--ambient", tr.ambient, "Override the ambient vehicle count");
  r->add_option("--output", tr.output, "CSV path (default: stdout)");

  AdaptArgs ad;
  auto* d = app.add_subcommand("adapt", "Cross-scenario proxy metrics for a checkpoint");
  d->add_option("checkpoint", ad.checkpoint, "Checkpoint file")->required();
  d->add_option("--scenarios", ad.scenarios, "Scenarios to run");
  d->add_option("--rounds", ad.rounds, "Rounds per scenario");
  d->add_option("--seed", ad.seed, "Root seed");
  d->add_option("--config", ad.config, "Run config supplying environment settings");
  d->add_option("--ambient", ad.ambient, "Override the ambient vehicle count");
  d->add_option("--output", ad.output, "JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return kExitUsage;
  }

  try {
    if (*t) return cmd_train(train, out);
    if (*s) return cmd_sweep(sweep, out, err);
    if (*e) return cmd_evaluate(ev, out);
    if (*c) return cmd_score(sc, out);
    if (*r) return cmd_trace(tr, out);
    if (*d) return cmd_adapt(ad, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace rdrl::cli
