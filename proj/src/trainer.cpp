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

#include "hetpred/trainer.hpp"

#include "hetpred/errors.hpp"
#include "hetpred/evaluate.hpp"
#include "hetpred/random.hpp"
#include "hetpred/tape.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace hetpred::train
{
namespace
{

std::string describe_window(const data::SceneWindow & w)
{
  std::ostringstream s;
  s << "window starting at frame " << w.start_frame;
  if (!w.scene.empty()) {
    s << " (" << w.scene << ")";
  }
  s << "\n" << data::kTrajectoryHeader << "\n";
  data::write_trajectories(s, data::to_records(w.raw_frames));
  return s.str();
}

struct WindowGrad
{
  std::optional<double> loss;
  std::vector<ad::Tensor> grads;
  std::exception_ptr error;
};

}  // namespace

void TrainConfig::validate() const
{
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and non-negative");
  }
  if (batch_size == 0) {
    throw ConfigError("batch_size must be at least 1");
  }
  if (!(clip > 0.0) || !std::isfinite(clip)) {
    throw ConfigError("clip must be finite and positive");
  }
  if (obs_frames < 1 || pred_frames < 1 || obs_frames >= pred_frames) {
    throw ConfigError("need 1 <= obs_frames < pred_frames");
  }
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw ConfigError("decay must be in (0, 1]");
  }
  if (decay_epochs == 0) {
    throw ConfigError("decay_epochs must be at least 1");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) {
    throw ConfigError("epsilon must be positive");
  }
  if (workers == 0) {
    throw ConfigError("workers must be at least 1");
  }
}

AdamConfig TrainConfig::adam() const
{
  AdamConfig a;
  a.learning_rate = learning_rate;
  a.beta1 = beta1;
  a.beta2 = beta2;
  a.epsilon = epsilon;
  a.decay = decay;
  a.decay_interval = 0;
  return a;
}

TrainConfig TrainConfig::from_key_values(const KeyValues & kv)
{
  TrainConfig c;
  c.learning_rate = kv.get_double("train.learning_rate", c.learning_rate);
  c.batch_size = kv.get_uint("train.batch_size", c.batch_size);
  c.clip = kv.get_double("train.clip", c.clip);
  c.epochs = kv.get_uint("train.epochs", c.epochs);
  c.seed = kv.get_uint("seed", c.seed);
  c.obs_frames = kv.get_uint("obs_frames", c.obs_frames);
  c.pred_frames = kv.get_uint("pred_frames", c.pred_frames);
  c.decay = kv.get_double("train.decay", c.decay);
  c.decay_epochs = kv.get_uint("train.decay_epochs", c.decay_epochs);
  c.beta1 = kv.get_double("train.beta1", c.beta1);
  c.beta2 = kv.get_double("train.beta2", c.beta2);
  c.epsilon = kv.get_double("train.epsilon", c.epsilon);
  c.workers = kv.get_uint("workers", c.workers);
  c.save_every = kv.get_uint("train.save_every", c.save_every);
  c.validate();
  return c;
}

Trainer::Trainer(model::SequenceModel & model, model::Mode mode, TrainConfig config)
: model_(model), mode_(mode), config_(std::move(config)), adam_(model.params(), config_.adam())
{
  config_.validate();
}

std::optional<double> Trainer::window_loss(const data::SceneWindow & w, std::vector<ad::Tensor> * grads) const
{
  if (w.frames.size() < config_.pred_frames) {
    throw UsageError("window shorter than pred_frames");
  }
  ad::Tape tape;
  nn::ParamBinding binding(tape, model_.params());
  model::RolloutOptions opt;
  opt.mode = mode_;
  opt.phase = model::Phase::train;
  opt.obs_frames = config_.obs_frames;
  opt.total_frames = config_.pred_frames;
  const auto result = model_.rollout(binding, std::span(w.frames).first(config_.pred_frames), opt);
  if (!result.loss) {
    return std::nullopt;
  }
  const double loss = result.loss->value().item();
  if (!std::isfinite(loss)) {
    throw NumericDomainError("non-finite loss " + std::to_string(loss));
  }
  if (grads) {
    tape.backward(*result.loss);
    *grads = binding.gradients();
  }
  return loss;
}

BatchStats Trainer::train_batch(std::span<const data::SceneWindow * const> batch)
{
  std::vector<WindowGrad> out(batch.size());
  auto work = [&](std::size_t i) {
    try {
      out[i].loss = window_loss(*batch[i], &out[i].grads);
    } catch (const Error &) {
      out[i].error = std::current_exception();
    }
  };
  const std::size_t workers = std::min(config_.workers, batch.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      work(i);
    }
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] {
        for (std::size_t i = k; i < batch.size(); i += workers) {
          work(i);
        }
      });
    }
    for (auto & t : pool) {
      t.join();
    }
  }

  BatchStats stats;
  std::vector<ad::Tensor> sum = nn::zero_gradients(model_.params());
  // Fixed summation order keeps the result independent of the worker count.
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (out[i].error) {
      try {
        std::rethrow_exception(out[i].error);
      } catch (const Error & e) {
        throw TrainingError(std::string("non-finite loss or value: ") + e.what() + "\n" + describe_window(*batch[i]));
      }
    }
    if (!out[i].loss) {
      continue;
    }
    stats.loss_sum += *out[i].loss;
    ++stats.windows;
    for (std::size_t p = 0; p < sum.size(); ++p) {
      sum[p].add_in_place(out[i].grads[p]);
    }
  }
  if (stats.windows == 0) {
    return stats;
  }
  const double inv = 1.0 / static_cast<double>(stats.windows);
  for (auto & g : sum) {
    for (auto & v : g.values()) {
      v *= inv;
    }
  }
  clip_gradients(sum, -config_.clip, config_.clip);
  adam_.step(model_.params(), sum);
  return stats;
}

EpochStats Trainer::run_epoch(const std::vector<data::SceneWindow> & data)
{
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(config_.seed, "shuffle-" + std::to_string(epochs_done_ + 1)));
  hetpred::shuffle(order.begin(), order.end(), rng);

  double loss_sum = 0.0;
  std::size_t windows = 0;
  double last_rate = adam_.current_rate();
  std::vector<const data::SceneWindow *> batch;
  for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
    batch.clear();
    for (std::size_t i = start; i < std::min(order.size(), start + config_.batch_size); ++i) {
      batch.push_back(&data[order[i]]);
    }
    const double rate = adam_.current_rate();
    const auto stats = train_batch(batch);
    if (stats.windows > 0) {
      last_rate = rate;
    }
    loss_sum += stats.loss_sum;
    windows += stats.windows;
  }
  ++epochs_done_;
  EpochStats e;
  e.epoch = epochs_done_;
  e.mean_nll = windows > 0 ? loss_sum / static_cast<double>(windows) : 0.0;
  e.lr = last_rate;
  e.steps = adam_.step_count();
  return e;
}

TrainResult Trainer::train(
  const std::vector<data::SceneWindow> & data, const std::function<void(const EpochStats &)> & on_epoch)
{
  const std::size_t steps_per_epoch = (data.size() + config_.batch_size - 1) / config_.batch_size;
  adam_.set_decay_interval(config_.decay_epochs * std::max<std::size_t>(1, steps_per_epoch));
  TrainResult result;
  auto save = [&](const std::string & name) {
    if (config_.checkpoint_dir.empty()) {
      return;
    }
    std::filesystem::create_directories(config_.checkpoint_dir);
    const auto path = config_.checkpoint_dir / name;
    nn::save_checkpoint(path, checkpoint());
    result.checkpoints.push_back(path);
  };
  while (epochs_done_ < config_.epochs) {
    result.curve.push_back(run_epoch(data));
    if (on_epoch) {
      on_epoch(result.curve.back());
    }
    if (config_.save_every > 0 && epochs_done_ % config_.save_every == 0) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%04zu.ckpt", epochs_done_);
      save(name);
    }
  }
  save("final.ckpt");
  return result;
}

nn::Checkpoint Trainer::checkpoint() const
{
  nn::Checkpoint ckpt;
  ckpt.metadata = model_.metadata();
  ckpt.metadata["model.kind"] = model_.kind();
  ckpt.metadata["train.mode"] = model::to_string(mode_);
  ckpt.metadata["train.epoch"] = std::to_string(epochs_done_);
  ckpt.metadata["train.seed"] = std::to_string(config_.seed);
  nn::append_parameters(ckpt, model_.params());
  adam_.save(ckpt, model_.params());
  return ckpt;
}

void Trainer::resume(const nn::Checkpoint & ckpt)
{
  const auto kind = ckpt.metadata.find("model.kind");
  if (kind == ckpt.metadata.end() || kind->second != model_.kind()) {
    throw ConfigError("checkpoint does not hold a '" + model_.kind() + "' model");
  }
  const auto mode = ckpt.metadata.find("train.mode");
  if (mode != ckpt.metadata.end() && mode->second != model::to_string(mode_)) {
    throw ConfigError(
      "checkpoint was trained in mode '" + mode->second + "', not '" + model::to_string(mode_) + "'");
  }
  nn::restore_parameters(ckpt, model_.params());
  adam_.restore(ckpt, model_.params());
  const auto epoch = ckpt.metadata.find("train.epoch");
  epochs_done_ = epoch == ckpt.metadata.end() ? 0 : std::stoul(epoch->second);
}

void write_loss_curve(std::ostream & out, const std::vector<EpochStats> & curve)
{
  out << "epoch,mean_nll,lr\n";
  for (const auto & e : curve) {
    out << e.epoch << ',' << data::format_double(e.mean_nll) << ',' << data::format_double(e.lr) << '\n';
  }
}

OverfitResult overfit_window(Trainer & trainer, const data::SceneWindow & window, const OverfitConfig & config)
{
  OverfitResult r;
  const data::SceneWindow * batch[] = {&window};
  const std::size_t every = std::max<std::size_t>(1, config.check_every);
  auto check = [&] {
    r.ade = eval::window_ade_fde(
              trainer.model(), trainer.mode(), window, trainer.config().obs_frames)
              .first;
    r.history.emplace_back(r.steps, r.ade);
    r.reached = r.ade < config.target_ade;
  };
  check();
  while (!r.reached && r.steps < config.max_steps) {
    trainer.train_batch(batch);
    ++r.steps;
    if (r.steps % every == 0 || r.steps == config.max_steps) {
      check();
    }
  }
  return r;
}

}  // namespace hetpred::train
