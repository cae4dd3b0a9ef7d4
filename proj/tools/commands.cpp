// Copyright 2026 The hetpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include "hetpred/benchmark.hpp"
#include "hetpred/checkpoint.hpp"
#include "hetpred/ed_baseline.hpp"
#include "hetpred/errors.hpp"
#include "hetpred/evaluate.hpp"
#include "hetpred/model_factory.hpp"
#include "hetpred/random.hpp"
#include "hetpred/scenario.hpp"
#include "hetpred/tape.hpp"
#include "hetpred/trainer.hpp"
#include "hetpred/window.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

namespace hetpred::cli
{
namespace
{

const std::vector<std::string> kDefaultEvalModes = {
  "full", "no_category_layer", "no_self_attention", "ed_baseline", "constant_velocity"};

bool is_traffic_mode(const std::string & m)
{
  return m == "full" || m == "no_category_layer" || m == "no_self_attention";
}

bool is_learned(const std::string & m)
{
  return is_traffic_mode(m) || m == "ed_baseline";
}

std::string single_mode(const RunConfig & config)
{
  if (config.modes.size() > 1) {
    throw ConfigError("this command takes a single --mode");
  }
  return config.modes.empty() ? std::string() : config.modes.front();
}

model::ModelConfig model_config(const KeyValues & kv)
{
  model::ModelConfig c;
  c.edge_hidden = kv.get_uint("model.edge_hidden", c.edge_hidden);
  c.node_hidden = kv.get_uint("model.node_hidden", c.node_hidden);
  c.embed_dim = kv.get_uint("model.embed_dim", c.embed_dim);
  c.attention_dim = kv.get_uint("model.attention_dim", c.attention_dim);
  c.attention_m = kv.get_double("model.attention_m", c.attention_m);
  c.radius = kv.get_double("model.radius", c.radius);
  c.shared_super_params = kv.get_bool("model.shared_super_params", c.shared_super_params);
  c.anchor = model::anchor_from_string(kv.get_string("model.anchor", model::to_string(c.anchor)));
  return c;
}

model::EdConfig ed_config(const KeyValues & kv)
{
  model::EdConfig c;
  c.hidden = kv.get_uint("ed.hidden", c.hidden);
  c.embed_dim = kv.get_uint("ed.embed_dim", c.embed_dim);
  c.anchor = model::anchor_from_string(kv.get_string("model.anchor", model::to_string(c.anchor)));
  return c;
}

/// Mode a checkpoint was trained in, as a method name.
std::string checkpoint_mode(const nn::Checkpoint & ckpt)
{
  const auto kind = ckpt.metadata.find("model.kind");
  if (kind != ckpt.metadata.end() && kind->second == "ed") {
    return "ed_baseline";
  }
  const auto mode = ckpt.metadata.find("train.mode");
  return mode == ckpt.metadata.end() ? "full" : mode->second;
}

model::Mode traffic_mode(const std::string & m)
{
  return is_traffic_mode(m) ? model::mode_from_string(m) : model::Mode::full;
}

std::vector<data::SceneWindow> load_windows(const RunConfig & config, std::size_t obs, std::size_t pred)
{
  if (config.data.empty()) {
    throw ConfigError("--data is required");
  }
  const auto records = data::load_trajectories(config.data);
  const auto stride = config.values.get_uint("data.stride", 1);
  auto sliced = data::slice_windows(records, obs, pred, stride);
  std::vector<data::SceneWindow> out;
  for (auto & w : sliced.windows) {
    if (data::window_has_target(w, obs)) {
      out.push_back(std::move(w));
    }
  }
  return out;
}

void write_file(const std::filesystem::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  f << text;
  if (!f) {
    throw IoError("failed writing " + path.string());
  }
}

void warn_unused(const KeyValues & kv, std::ostream & log)
{
  for (const auto & k : kv.unused()) {
    log << "warning: unused config key '" << k << "'\n";
  }
}

std::vector<std::string> split_list(const std::string & s)
{
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

}  // namespace

int cmd_generate(const RunConfig & config, std::ostream & log)
{
  const auto & kv = config.values;
  data::ScenarioSpec spec = data::ScenarioSpec::from_key_values(kv, "scenario.");
  if (!kv.has("scenario.seed")) {
    spec.seed = derive_seed(config.seed, "data");
  }
  spec.min_frames = static_cast<int>(kv.get_uint("pred_frames", 13));
  spec.validate();
  if (config.out.empty()) {
    throw ConfigError("--out is required");
  }
  const auto records = data::generate_scenario(spec);
  std::ostringstream csv;
  data::write_trajectories(csv, records);
  write_file(config.out, csv.str());

  std::array<std::set<int>, graph::kNumCategories> agents;
  std::set<int> frames;
  for (const auto & r : records) {
    agents[graph::category_slot(r.category)].insert(r.agent_id);
    frames.insert(r.frame);
  }
  log << "generated " << config.out.string() << ": " << data::to_string(spec.kind);
  for (const auto c : graph::kCategories) {
    log << ' ' << graph::category_name(c) << "=" << agents[graph::category_slot(c)].size();
  }
  log << " frames=" << frames.size() << " records=" << records.size() << '\n';
  warn_unused(kv, log);
  return kExitOk;
}

int cmd_train(const RunConfig & config, std::ostream & log)
{
  const auto & kv = config.values;
  const std::string mode = single_mode(config).empty() ? "full" : single_mode(config);
  if (!is_learned(mode)) {
    throw ConfigError("mode '" + mode + "' has nothing to train");
  }
  train::TrainConfig tc = train::TrainConfig::from_key_values(kv);
  tc.seed = config.seed;
  tc.workers = config.workers;
  if (config.out.empty()) {
    throw ConfigError("--out (checkpoint directory) is required");
  }
  tc.checkpoint_dir = config.out;

  std::unique_ptr<model::SequenceModel> net;
  if (mode == "ed_baseline") {
    auto m = std::make_unique<model::EdBaseline>(ed_config(kv));
    m->init(derive_seed(config.seed, "init"));
    net = std::move(m);
  } else {
    auto m = std::make_unique<model::TrafficModel>(model_config(kv));
    m->init(derive_seed(config.seed, "init"));
    net = std::move(m);
  }
  const auto windows = load_windows(config, tc.obs_frames, tc.pred_frames);
  if (windows.empty()) {
    throw ConfigError("no training windows in " + config.data.string());
  }
  train::Trainer trainer(*net, traffic_mode(mode), tc);
  std::vector<train::EpochStats> curve;
  if (const auto it = config.checkpoints.find(""); it != config.checkpoints.end()) {
    const auto ckpt = nn::load_checkpoint(it->second);
    trainer.resume(ckpt);
    if (checkpoint_mode(ckpt) != mode) {
      throw ConfigError("checkpoint mode '" + checkpoint_mode(ckpt) + "' does not match '" + mode + "'");
    }
    log << "resumed " << it->second.string() << " at epoch " << trainer.epochs_done() << ", step "
        << trainer.optimizer().step_count() << '\n';
  }

  log << "train: mode=" << mode << " beta1=" << data::format_double(tc.beta1)
      << " beta2=" << data::format_double(tc.beta2) << " lr=" << data::format_double(tc.learning_rate)
      << " clip=[-" << data::format_double(tc.clip) << "," << data::format_double(tc.clip) << "]"
      << " batch=" << tc.batch_size << " epochs=" << tc.epochs << " decay=" << data::format_double(tc.decay)
      << "/" << tc.decay_epochs << "ep seed=" << tc.seed << " windows=" << windows.size()
      << " params=" << net->params().scalar_count() << '\n';

  const auto result = trainer.train(windows, [&](const train::EpochStats & e) {
    log << "epoch " << e.epoch << " mean_nll=" << data::format_double(e.mean_nll)
        << " lr=" << data::format_double(e.lr) << " step=" << e.steps << '\n';
  });
  std::ostringstream csv;
  train::write_loss_curve(csv, result.curve);
  write_file(config.out / "loss.csv", csv.str());
  if (!result.checkpoints.empty()) {
    log << "final checkpoint: " << result.checkpoints.back().string() << '\n';
  }
  warn_unused(kv, log);
  return kExitOk;
}

int cmd_predict(const RunConfig & config, std::ostream & log)
{
  const auto & kv = config.values;
  const std::size_t obs = kv.get_uint("obs_frames", 5);
  const std::size_t pred = kv.get_uint("pred_frames", 13);
  if (obs < 1 || obs >= pred) {
    throw ConfigError("need 1 <= obs_frames < pred_frames");
  }
  const auto it = config.checkpoints.find("");
  if (config.checkpoints.size() != 1 || it == config.checkpoints.end()) {
    throw ConfigError("predict takes exactly one --checkpoint PATH");
  }
  if (config.data.empty() || config.out.empty()) {
    throw ConfigError("--data and --out are required");
  }
  const auto ckpt = nn::load_checkpoint(it->second);
  const std::string trained = checkpoint_mode(ckpt);
  const std::string wanted = single_mode(config);
  if (!wanted.empty() && wanted != trained) {
    throw ConfigError("checkpoint holds a '" + trained + "' model, --mode asked for '" + wanted + "'");
  }
  const auto net = model::load_model(ckpt);

  auto frames = data::group_frames(data::load_trajectories(config.data));
  if (frames.size() < obs) {
    throw ValidationError("observation file has " + std::to_string(frames.size()) + " frames, need " + std::to_string(obs));
  }
  std::vector<graph::FrameObservation> observed(frames.end() - static_cast<long>(obs), frames.end());
  const auto w = data::normalize_window(observed);

  ad::Tape tape;
  nn::ParamBinding binding(tape, net->params());
  model::RolloutOptions opt;
  opt.mode = traffic_mode(trained);
  opt.phase = model::Phase::predict;
  opt.obs_frames = obs;
  opt.total_frames = pred;
  const auto result = net->rollout(binding, w.frames, opt);

  struct Row
  {
    int frame;
    int agent;
    int category;
    double x, y, sx, sy, rho;
  };
  std::vector<Row> rows;
  for (const auto & agent : result.agents) {
    for (const auto & step : agent.steps) {
      if (step.frame < static_cast<int>(obs)) {
        continue;
      }
      const auto & g = step.gaussian;
      const auto [x, y] = w.transform.to_world(g.mu_x, g.mu_y);
      rows.push_back(
        {w.start_frame + step.frame, agent.agent_id, static_cast<int>(agent.category), x, y,
         w.transform.distance_to_world(g.sigma_x), w.transform.distance_to_world(g.sigma_y), g.rho});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row & a, const Row & b) {
    return std::tie(a.frame, a.agent) < std::tie(b.frame, b.agent);
  });
  std::ostringstream csv;
  csv << "frame,agent_id,category,x,y,sigma_x,sigma_y,rho\n";
  for (const auto & r : rows) {
    csv << r.frame << ',' << r.agent << ',' << r.category << ',' << data::format_double(r.x) << ','
        << data::format_double(r.y) << ',' << data::format_double(r.sx) << ','
        << data::format_double(r.sy) << ',' << data::format_double(r.rho) << '\n';
  }
  write_file(config.out, csv.str());
  log << "predicted " << result.agents.size() << " agents, frames " << w.start_frame + static_cast<int>(obs)
      << ".." << w.start_frame + static_cast<int>(pred) - 1 << " -> " << config.out.string() << '\n';
  warn_unused(kv, log);
  return kExitOk;
}

int cmd_eval(const RunConfig & config, std::ostream & log)
{
  const auto & kv = config.values;
  const std::size_t obs = kv.get_uint("obs_frames", 5);
  const std::size_t pred = kv.get_uint("pred_frames", 13);
  const auto modes = config.modes.empty() ? kDefaultEvalModes : config.modes;

  std::vector<std::string> learned;
  for (const auto & m : modes) {
    if (is_learned(m)) {
      learned.push_back(m);
    } else if (m != "constant_velocity" && m != "oracle") {
      throw ConfigError("unknown method '" + m + "'");
    }
  }
  std::map<std::string, std::filesystem::path> paths;
  std::vector<std::string> missing;
  for (const auto & m : learned) {
    if (auto it = config.checkpoints.find(m); it != config.checkpoints.end()) {
      paths[m] = it->second;
    } else if (auto any = config.checkpoints.find(""); any != config.checkpoints.end() && learned.size() == 1) {
      paths[m] = any->second;
    } else {
      missing.push_back(m);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto & m : missing) {
      list += (list.empty() ? "" : ", ") + m;
    }
    throw ConfigError("missing checkpoint for method(s): " + list);
  }

  std::map<std::string, std::unique_ptr<model::SequenceModel>> models;
  for (const auto & [m, path] : paths) {
    const auto ckpt = nn::load_checkpoint(path);
    if (checkpoint_mode(ckpt) != m) {
      throw ConfigError(path.string() + " holds a '" + checkpoint_mode(ckpt) + "' model, not '" + m + "'");
    }
    models[m] = model::load_model(ckpt);
  }
  std::vector<eval::Method> methods;
  for (const auto & m : modes) {
    if (m == "constant_velocity") {
      methods.push_back(eval::constant_velocity_method(obs));
    } else if (m == "oracle") {
      methods.push_back(eval::oracle_method(obs));
    } else {
      methods.push_back(eval::model_method(m, *models.at(m), traffic_mode(m), obs));
    }
  }

  const auto windows = load_windows(config, obs, pred);
  eval::EvalConfig ec;
  ec.obs_frames = obs;
  ec.workers = config.workers;
  const auto report = eval::evaluate(windows, methods, ec);

  std::ostringstream table;
  eval::write_report_table(table, report, eval::Scale::normalized);
  table << '\n';
  eval::write_report_table(table, report, eval::Scale::meters);
  for (const auto & e : report.exclusions) {
    table << "excluded " << e << '\n';
  }
  log << table.str();
  if (!config.out.empty()) {
    std::ostringstream csv;
    eval::write_report_csv(csv, report);
    write_file(config.out / "report.csv", csv.str());
    write_file(config.out / "report.txt", table.str());
    log << "report: " << (config.out / "report.csv").string() << '\n';
  }
  warn_unused(kv, log);
  return kExitOk;
}

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Trajectory prediction for mixed traffic"};
  app.require_subcommand(1);

  struct Flags
  {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string mode;
    std::string data;
    std::string out;
    std::vector<std::string> checkpoints;
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> workers;
    std::vector<std::string> sets;
  } flags;

  const std::vector<std::pair<std::string, std::string>> commands = {
    {"generate", "Write a synthetic scenario as trajectory CSV"},
    {"train", "Train a model on trajectory CSV"},
    {"predict", "Closed-loop prediction from observed frames"},
    {"eval", "Compare methods with ADE/FDE"},
  };
  for (const auto & [name, help] : commands) {
    auto * sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "key=value config file");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--mode", flags.mode, "model mode, or a comma list for eval");
    sub->add_option("--data", flags.data, "trajectory CSV");
    sub->add_option("--out", flags.out, "output file or directory");
    sub->add_option("--checkpoint", flags.checkpoints, "checkpoint PATH, or METHOD=PATH for eval");
    sub->add_option("--epochs", flags.epochs, "training epochs");
    sub->add_option("--workers", flags.workers, "worker threads");
    sub->add_option("--set", flags.sets, "config override KEY=VALUE");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    std::ostringstream o;
    std::ostringstream er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config;
    config.command = app.get_subcommands().front()->get_name();
    if (!flags.config.empty()) {
      config.values = KeyValues::load(flags.config);
    }
    for (const auto & s : flags.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
      }
      config.values.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (flags.seed) {
      config.values.set("seed", std::to_string(*flags.seed));
    }
    if (flags.epochs) {
      config.values.set("train.epochs", std::to_string(*flags.epochs));
    }
    if (flags.workers) {
      config.values.set("workers", std::to_string(*flags.workers));
    }
    config.seed = config.values.get_uint("seed", 1);
    config.workers = config.values.get_uint("workers", 1);
    if (config.workers == 0) {
      throw ConfigError("workers must be at least 1");
    }
    const std::string mode = flags.mode.empty() ? config.values.get_string("mode", "") : flags.mode;
    config.modes = split_list(mode);
    for (const auto & m : config.modes) {
      if (!is_learned(m) && m != "constant_velocity" && m != "oracle") {
        throw ConfigError("unknown mode '" + m + "'");
      }
    }
    config.data = flags.data.empty() ? config.values.get_string("data", "") : flags.data;
    config.out = flags.out.empty() ? config.values.get_string("out", "") : flags.out;
    for (const auto & c : flags.checkpoints) {
      const auto eq = c.find('=');
      if (eq != std::string::npos && is_learned(c.substr(0, eq))) {
        config.checkpoints[c.substr(0, eq)] = c.substr(eq + 1);
      } else {
        config.checkpoints[""] = c;
      }
    }
    if (config.command == "generate") {
      return cmd_generate(config, out);
    }
    if (config.command == "train") {
      return cmd_train(config, out);
    }
    if (config.command == "predict") {
      return cmd_predict(config, out);
    }
    return cmd_eval(config, out);
  } catch (const ConfigError & e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError & e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError & e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error & e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError & e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ValidationError & e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericDomainError & e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const TrainingError & e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace hetpred::cli
