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

#ifndef HETPRED_TRAINER_HPP_
#define HETPRED_TRAINER_HPP_

#include "hetpred/checkpoint.hpp"
#include "hetpred/keyvalue.hpp"
#include "hetpred/model.hpp"
#include "hetpred/optimizer.hpp"
#include "hetpred/window.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <iosfwd>
#include <span>
#include <vector>

namespace hetpred::train
{

struct TrainConfig
{
  double learning_rate = 0.001;
  std::size_t batch_size = 8;
  double clip = 10.0;  // gradients are clamped to [-clip, clip]
  std::size_t epochs = 50;
  std::uint64_t seed = 1;
  std::size_t obs_frames = 5;
  std::size_t pred_frames = 13;
  double decay = 0.95;
  std::size_t decay_epochs = 5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t workers = 1;
  std::size_t save_every = 0;  // epochs between checkpoints; 0 keeps only the final one
  std::filesystem::path checkpoint_dir;  // empty: no files written

  /// Raises ConfigError.
  void validate() const;
  AdamConfig adam() const;
  static TrainConfig from_key_values(const KeyValues & kv);
};

struct EpochStats
{
  std::size_t epoch = 0;
  double mean_nll = 0.0;  // mean window loss seen during the epoch
  double lr = 0.0;        // rate of the epoch's last step
  std::uint64_t steps = 0;  // optimizer step counter after the epoch
};

struct TrainResult
{
  std::vector<EpochStats> curve;
  std::vector<std::filesystem::path> checkpoints;
};

struct BatchStats
{
  double loss_sum = 0.0;
  std::size_t windows = 0;  // windows that carried a loss
};

class Trainer
{
public:
  Trainer(model::SequenceModel & model, model::Mode mode, TrainConfig config);

  /// Mean gradient over the batch's scored windows, clipped, one Adam step.
  /// No step is taken when no window carries a loss. A non-finite loss
  /// raises TrainingError describing the window.
  BatchStats train_batch(std::span<const data::SceneWindow * const> batch);

  EpochStats run_epoch(const std::vector<data::SceneWindow> & data);

  /// Runs epochs until config.epochs have completed, counting resumed ones.
  TrainResult train(
    const std::vector<data::SceneWindow> & data,
    const std::function<void(const EpochStats &)> & on_epoch = {});

  /// Window loss and gradients without touching the parameters.
  std::optional<double> window_loss(const data::SceneWindow & w, std::vector<ad::Tensor> * grads) const;

  nn::Checkpoint checkpoint() const;
  /// Raises ConfigError when the checkpoint belongs to another model or mode.
  void resume(const nn::Checkpoint & ckpt);

  std::size_t epochs_done() const { return epochs_done_; }
  Adam & optimizer() { return adam_; }
  const TrainConfig & config() const { return config_; }
  model::Mode mode() const { return mode_; }
  const model::SequenceModel & model() const { return model_; }

private:
  model::SequenceModel & model_;
  model::Mode mode_;
  TrainConfig config_;
  Adam adam_;
  std::size_t epochs_done_ = 0;
};

void write_loss_curve(std::ostream & out, const std::vector<EpochStats> & curve);

struct OverfitConfig
{
  std::size_t max_steps = 5000;
  double target_ade = 0.02;  // closed-loop, normalized units
  std::size_t check_every = 50;
};

struct OverfitResult
{
  std::size_t steps = 0;
  double ade = 0.0;
  bool reached = false;
  std::vector<std::pair<std::size_t, double>> history;  // (step, ADE)
};

/// Repeated single-window steps until the closed-loop ADE drops below the
/// target or the step budget runs out.
OverfitResult overfit_window(Trainer & trainer, const data::SceneWindow & window, const OverfitConfig & config);

}  // namespace hetpred::train

#endif  // HETPRED_TRAINER_HPP_
