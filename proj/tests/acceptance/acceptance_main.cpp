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

// Acceptance checks. With no argument every criterion runs; with a number
// only that one. Each prints a single "criterion N ... PASS|FAIL" line and
// the exit status is non-zero when any selected criterion fails.

#include "hetpred/benchmark.hpp"
#include "hetpred/checkpoint.hpp"
#include "hetpred/ed_baseline.hpp"
#include "hetpred/evaluate.hpp"
#include "hetpred/gaussian.hpp"
#include "hetpred/graph4d.hpp"
#include "hetpred/metrics.hpp"
#include "hetpred/model.hpp"
#include "hetpred/random.hpp"
#include "hetpred/scenario.hpp"
#include "hetpred/trainer.hpp"
#include "oracles/graph_oracle.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace hetpred;
using graph::Category;
using model::Mode;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4)
{
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

model::RolloutOptions train_options(Mode mode, std::size_t obs, std::size_t total)
{
  model::RolloutOptions o;
  o.mode = mode;
  o.phase = model::Phase::train;
  o.obs_frames = obs;
  o.total_frames = total;
  return o;
}

// --- 1 -------------------------------------------------------------------

std::vector<graph::FrameObservation> three_agent_scene()
{
  std::vector<graph::FrameObservation> f;
  for (int t = 0; t < 4; ++t) {
    f.push_back({t, {
                      {1, Category::pedestrian, -0.6 + 0.05 * t, 0.2 + 0.01 * t},
                      {2, Category::bicycle, 0.1 * t - 0.3, -0.4},
                      {3, Category::vehicle, 0.9 - 0.2 * t, 0.05 * t},
                    }});
  }
  return f;
}

Outcome gradient_check()
{
  const auto t0 = Clock::now();
  const auto frames = three_agent_scene();
  // Every scalar of a reduced-width model, in each mode.
  model::ModelConfig tiny;
  tiny.embed_dim = 3;
  tiny.edge_hidden = 4;
  tiny.node_hidden = 3;
  tiny.attention_dim = 3;
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst = 0.0;
  for (const Mode mode : {Mode::full, Mode::no_self_attention, Mode::no_category_layer}) {
    model::TrafficModel m(tiny);
    m.init(derive_seed(1, "init"));
    const auto r = testing::check_store_gradients(m.params(), [&](nn::ParamBinding & b) {
      return *m.rollout(b, frames, train_options(mode, 2, 4)).loss;
    });
    checked += r.checked;
    failed += r.failed;
    worst = std::max(worst, r.worst);
  }

  // Default widths: every parameter tensor, a spread of entries in each.
  model::TrafficModel big;
  big.init(derive_seed(2, "init"));
  std::size_t big_checked = 0;
  std::size_t big_failed = 0;
  {
    ad::Tape tape;
    nn::ParamBinding b(tape, big.params());
    const ad::Var loss = *big.rollout(b, frames, train_options(Mode::full, 2, 4)).loss;
    tape.backward(loss);
    const auto grads = b.gradients();
    auto value = [&] {
      ad::Tape t;
      nn::ParamBinding bb(t, big.params());
      return big.rollout(bb, frames, train_options(Mode::full, 2, 4)).loss->value().item();
    };
    const double h = 1e-5;
    for (std::size_t p = 0; p < big.params().size(); ++p) {
      auto vals = big.params().value(p).values();
      const std::size_t n = vals.size();
      for (const std::size_t k : {std::size_t{0}, n / 3, n / 2, n - 1}) {
        const double saved = vals[k];
        vals[k] = saved + h;
        const double up = value();
        vals[k] = saved - h;
        const double down = value();
        vals[k] = saved;
        const double numeric = (up - down) / (2 * h);
        const double err = std::abs(grads[p][k] - numeric) / std::max(1.0, std::abs(numeric));
        worst = std::max(worst, err);
        ++big_checked;
        big_failed += err <= 1e-4 ? 0 : 1;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = failed == 0 && big_failed == 0 && elapsed <= 300.0;
  o.detail = std::to_string(checked - failed) + "/" + std::to_string(checked) + " scalars (3 modes, reduced width), " +
             std::to_string(big_checked - big_failed) + "/" + std::to_string(big_checked) +
             " sampled at default width, worst rel err " + fmt(worst, 3) + ", " + fmt(elapsed, 3) + " s";
  return o;
}

// --- 2 -------------------------------------------------------------------

Outcome distribution_validity()
{
  std::mt19937_64 rng(derive_seed(2, "draws"));
  std::size_t bad = 0;
  const std::size_t draws = 10000;
  for (std::size_t k = 0; k < draws; ++k) {
    nn::ParameterStore store;
    const auto head = nn::add_linear(store, "head", 8, 5);
    store.init(rng());
    // widen the draw so the squashing is exercised at its extremes
    const double spread = std::pow(10.0, uniform(rng, -2, 3));
    for (auto & v : store.value(0).values()) {
      v *= spread;
    }
    ad::Tape tape;
    nn::ParamBinding b(tape, store);
    const auto h = tape.constant(testing::random_tensor({8}, rng, -3, 3));
    std::optional<std::pair<double, double>> anchor;
    if (k % 2) {
      anchor = std::make_pair(uniform(rng, -1, 1), uniform(rng, -1, 1));
    }
    const auto g = model::gaussian_head(b, head, h, anchor).value();
    if (!(g.sigma_x > 0.0 && g.sigma_y > 0.0 && std::abs(g.rho) < 1.0 && std::isfinite(g.mu_x) && std::isfinite(g.mu_y))) {
      ++bad;
    }
  }
  const double at_mean = model::nll_value({0.3, -0.2, 1.0, 1.0, 0.0}, 0.3, -0.2);
  const double err = std::abs(at_mean - std::log(2.0 * std::numbers::pi));
  Outcome o;
  o.pass = bad == 0 && err <= 1e-9;
  o.detail = std::to_string(draws - bad) + "/" + std::to_string(draws) + " valid draws, |nll(mu) - log 2pi| = " + fmt(err, 3);
  return o;
}

// --- 3 -------------------------------------------------------------------

Outcome attention_invariants()
{
  std::mt19937_64 rng(derive_seed(3, "attention"));
  model::TrafficModel m;
  m.init(derive_seed(3, "init"));
  const auto & L = m.layout();
  const std::size_t EH = m.config().edge_hidden;
  double worst_sum = 0.0;
  bool singleton_exact = true;
  for (int trial = 0; trial < 200; ++trial) {
    ad::Tape tape;
    nn::ParamBinding b(tape, m.params());
    const ad::Var self = tape.constant(testing::random_tensor({EH}, rng));
    std::vector<ad::Var> nbrs;
    const std::size_t n = 1 + uniform_index(rng, 12);
    for (std::size_t j = 0; j < n; ++j) {
      nbrs.push_back(tape.constant(testing::random_tensor({EH}, rng, -1, 1)));
    }
    const auto r = model::attention_aggregate(b, L.attention_query, L.attention_key, self, nbrs, m.attention_scale());
    double sum = 0.0;
    for (double w : r.weights->value().values()) {
      sum += w;
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    const ad::Var one[] = {nbrs[0]};
    const auto s = model::attention_aggregate(b, L.attention_query, L.attention_key, self, one, m.attention_scale());
    singleton_exact = singleton_exact && s.output.value() == nbrs[0].value();
  }

  // Shuffle agents inside each frame; per-agent outputs must not move.
  double worst_perm = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    auto frames = testing::random_scene(rng, 6, 7, 0.8);
    auto shuffled = frames;
    for (auto & f : shuffled) {
      hetpred::shuffle(f.agents.begin(), f.agents.end(), rng);
    }
    for (const Mode mode : {Mode::full, Mode::no_self_attention, Mode::no_category_layer}) {
      ad::Tape ta;
      nn::ParamBinding ba(ta, m.params());
      const auto a = m.rollout(ba, frames, train_options(mode, 3, 6));
      ad::Tape tb;
      nn::ParamBinding bb(tb, m.params());
      const auto b = m.rollout(bb, shuffled, train_options(mode, 3, 6));
      for (std::size_t k = 0; k < a.agents.size(); ++k) {
        for (std::size_t s = 0; s < a.agents[k].steps.size(); ++s) {
          const auto & ga = a.agents[k].steps[s].gaussian;
          const auto & gb = b.agents[k].steps[s].gaussian;
          worst_perm = std::max(
            {worst_perm, std::abs(ga.mu_x - gb.mu_x), std::abs(ga.mu_y - gb.mu_y), std::abs(ga.sigma_x - gb.sigma_x),
             std::abs(ga.sigma_y - gb.sigma_y), std::abs(ga.rho - gb.rho)});
        }
      }
      if (a.loss && b.loss) {
        worst_perm = std::max(worst_perm, std::abs(a.loss->value().item() - b.loss->value().item()));
      }
    }
  }
  Outcome o;
  o.pass = worst_sum <= 1e-12 && singleton_exact && worst_perm <= 1e-12;
  o.detail = "max |sum w - 1| = " + fmt(worst_sum, 3) + ", singleton exact: " + (singleton_exact ? "yes" : "no") +
             ", max permutation change " + fmt(worst_perm, 3);
  return o;
}

// --- 4 -------------------------------------------------------------------

Outcome graph_structure()
{
  std::mt19937_64 rng(derive_seed(4, "scenes"));
  std::size_t agree = 0;
  std::size_t edges = 0;
  for (int scene = 0; scene < 50; ++scene) {
    const auto frames =
      testing::random_scene(rng, 2 + uniform_index(rng, 10), 1 + uniform_index(rng, 12), uniform(rng, 0.4, 1.0));
    const double radius = scene % 2 ? 0.7 : graph::kUnlimitedRadius;
    const auto oracle = testing::brute_force_graph(frames, radius);
    edges += oracle.spatial.size();
    if (testing::graph_sets(graph::build_graph(frames, radius)) == oracle) {
      ++agree;
    }
  }
  Outcome o;
  o.pass = agree == 50;
  o.detail = std::to_string(agree) + "/50 scenes identical (" + std::to_string(edges) + " spatial edges)";
  return o;
}

// --- 5 -------------------------------------------------------------------

Outcome overfit()
{
  const auto t0 = Clock::now();
  data::ScenarioSpec spec;
  spec.kind = data::ScenarioKind::crossroad;
  spec.pedestrians = 2;
  spec.bicycles = 2;
  spec.vehicles = 2;
  spec.noise = 0.0;
  spec.duration = 13;
  spec.seed = 1;
  const auto records = data::generate_scenario(spec);
  const auto window = data::normalize_window(data::group_frames(records), 5);
  std::size_t agents = window.frames.front().agents.size();

  model::TrafficModel m;
  m.init(derive_seed(1, "init"));
  train::TrainConfig tc;
  tc.batch_size = 1;
  train::Trainer trainer(m, Mode::full, tc);
  train::OverfitConfig oc;
  oc.max_steps = 5000;
  oc.target_ade = 0.02;
  oc.check_every = 25;
  const auto r = train::overfit_window(trainer, window, oc);
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = r.reached && elapsed <= 900.0;
  o.detail = std::to_string(agents) + " agents, ADE " + fmt(r.history.front().second) + " -> " + fmt(r.ade) + " after " +
             std::to_string(r.steps) + " steps, " + fmt(elapsed, 3) + " s";
  return o;
}

// --- 6 -------------------------------------------------------------------

// Reduced widths keep five seeds of four trained models inside the budget.
struct OrderingSetup
{
  std::size_t width = 16;  // node hidden, embedding and attention width; edges get twice this
  std::size_t epochs = 60;
  double learning_rate = 0.003;
  model::MeanAnchor anchor = model::MeanAnchor::last_position;
};

struct SeedResult
{
  double full = 0, nosa = 0, nocl = 0;
  double turn_full = 0, turn_nosa = 0, turn_nocl = 0, turn_ed = 0, turn_cv = 0;
  bool ok = false;
};

SeedResult ordering_seed(std::uint64_t seed, const OrderingSetup & setup)
{
  data::BenchmarkConfig bc;
  bc.seed = seed;
  const auto bench = data::make_benchmark(bc);
  std::vector<data::SceneWindow> turning;
  for (const auto & w : bench.test) {
    if (w.scene == "crossroad") {
      turning.push_back(w);
    }
  }
  model::ModelConfig mc;
  mc.node_hidden = setup.width;
  mc.embed_dim = setup.width;
  mc.attention_dim = setup.width;
  mc.edge_hidden = 2 * setup.width;
  mc.anchor = setup.anchor;
  train::TrainConfig tc;
  tc.epochs = setup.epochs;
  tc.seed = seed;
  tc.learning_rate = setup.learning_rate;

  std::vector<std::unique_ptr<model::SequenceModel>> models;
  std::vector<eval::Method> methods;
  for (const auto & [name, mode] : std::vector<std::pair<std::string, Mode>>{
         {"full", Mode::full}, {"no_self_attention", Mode::no_self_attention}, {"no_category_layer", Mode::no_category_layer}}) {
    auto m = std::make_unique<model::TrafficModel>(mc);
    m->init(derive_seed(seed, "init"));
    train::Trainer t(*m, mode, tc);
    t.train(bench.train);
    methods.push_back(eval::model_method(name, *m, mode, bc.obs_frames));
    models.push_back(std::move(m));
  }
  model::EdConfig ec;
  ec.hidden = setup.width;
  ec.embed_dim = setup.width;
  ec.anchor = setup.anchor;
  auto ed = std::make_unique<model::EdBaseline>(ec);
  ed->init(derive_seed(seed, "init"));
  train::Trainer t(*ed, Mode::full, tc);
  t.train(bench.train);
  methods.push_back(eval::model_method("ed_baseline", *ed, Mode::full, bc.obs_frames));
  models.push_back(std::move(ed));
  methods.push_back(eval::constant_velocity_method(bc.obs_frames));

  eval::EvalConfig evc;
  evc.obs_frames = bc.obs_frames;
  const auto all = eval::evaluate(bench.test, methods, evc);
  const auto turn = eval::evaluate(turning, methods, evc);
  auto total = [](const eval::MetricsReport & r, const std::string & m) {
    return r.find(m)->normalized[eval::kTotalRow].ade;
  };
  SeedResult s;
  s.full = total(all, "full");
  s.nosa = total(all, "no_self_attention");
  s.nocl = total(all, "no_category_layer");
  s.turn_full = total(turn, "full");
  s.turn_nosa = total(turn, "no_self_attention");
  s.turn_nocl = total(turn, "no_category_layer");
  s.turn_ed = total(turn, "ed_baseline");
  s.turn_cv = total(turn, "constant_velocity");
  const double best_baseline = std::min(s.turn_ed, s.turn_cv);
  s.ok = s.full <= s.nosa && s.nosa <= s.nocl && s.turn_full < best_baseline && s.turn_nosa < best_baseline &&
         s.turn_nocl < best_baseline;
  return s;
}

Outcome relative_ordering()
{
  const auto t0 = Clock::now();
  const OrderingSetup setup;
  std::size_t held = 0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = ordering_seed(seed, setup);
    held += s.ok ? 1 : 0;
    d << "\n    seed " << seed << ": total ADE full " << fmt(s.full) << " nosa " << fmt(s.nosa) << " nocl "
      << fmt(s.nocl) << " | turning full " << fmt(s.turn_full) << " nosa " << fmt(s.turn_nosa) << " nocl "
      << fmt(s.turn_nocl) << " ed " << fmt(s.turn_ed) << " cv " << fmt(s.turn_cv) << (s.ok ? "  holds" : "  fails");
    std::cout << "  [6] seed " << seed << " done after " << fmt(seconds_since(t0), 4) << " s" << std::endl;
  }
  Outcome o;
  o.pass = held >= 3;
  o.detail = std::to_string(held) + "/5 seeds hold the ordering (need 3), width " + std::to_string(setup.width) +
             ", " + std::to_string(setup.epochs) + " epochs, " + fmt(seconds_since(t0), 4) + " s" + d.str();
  return o;
}

// --- 7 -------------------------------------------------------------------

Outcome metric_oracles()
{
  std::mt19937_64 rng(derive_seed(7, "tracks"));
  double worst = 0.0;
  double worst_rigid = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    std::vector<eval::Point> a;
    std::vector<eval::Point> b;
    for (std::size_t k = 0; k < n; ++k) {
      a.push_back({uniform(rng, -10, 10), uniform(rng, -10, 10)});
      b.push_back({uniform(rng, -10, 10), uniform(rng, -10, 10)});
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += std::sqrt((a[k].x - b[k].x) * (a[k].x - b[k].x) + (a[k].y - b[k].y) * (a[k].y - b[k].y));
    }
    const double last = std::sqrt(
      (a.back().x - b.back().x) * (a.back().x - b.back().x) + (a.back().y - b.back().y) * (a.back().y - b.back().y));
    worst = std::max({worst, std::abs(eval::ade(a, b) - sum / n), std::abs(eval::fde(a, b) - last)});

    const double th = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double tx = uniform(rng, -100, 100);
    const double ty = uniform(rng, -100, 100);
    auto move = [&](std::vector<eval::Point> p) {
      for (auto & q : p) {
        q = {std::cos(th) * q.x - std::sin(th) * q.y + tx, std::sin(th) * q.x + std::cos(th) * q.y + ty};
      }
      return p;
    };
    const auto ma = move(a);
    const auto mb = move(b);
    worst_rigid = std::max(
      {worst_rigid, std::abs(eval::ade(ma, mb) - eval::ade(a, b)), std::abs(eval::fde(ma, mb) - eval::fde(a, b))});
  }
  Outcome o;
  o.pass = worst <= 1e-12 && worst_rigid <= 1e-12;
  o.detail = "max brute-force diff " + fmt(worst, 3) + ", max rigid-motion diff " + fmt(worst_rigid, 3);
  return o;
}

// --- 8 -------------------------------------------------------------------

Outcome determinism()
{
  // generated data
  auto generated = [] {
    std::ostringstream s;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      data::ScenarioSpec spec;
      spec.seed = seed;
      spec.kind = seed % 2 ? data::ScenarioKind::crossroad : data::ScenarioKind::straight_lanes;
      data::write_trajectories(s, data::generate_scenario(spec));
    }
    return s.str();
  };
  const bool data_same = generated() == generated();

  data::BenchmarkConfig bc;
  bc.train_windows = 40;
  bc.test_windows = 10;
  const auto bench = data::make_benchmark(bc);
  model::ModelConfig mc;
  mc.node_hidden = 16;
  mc.embed_dim = 16;
  mc.attention_dim = 16;
  mc.edge_hidden = 32;

  struct Run
  {
    std::string curve;
    std::string report;
    std::filesystem::path ckpt;
  };
  const auto dir = std::filesystem::temp_directory_path() / "hetpred_acceptance_8";
  std::filesystem::remove_all(dir);
  auto run = [&](const std::string & tag) {
    model::TrafficModel m(mc);
    m.init(derive_seed(1, "init"));
    train::TrainConfig tc;
    tc.epochs = 3;
    tc.checkpoint_dir = dir / tag;
    train::Trainer t(m, Mode::full, tc);
    const auto result = t.train(bench.train);
    Run r;
    std::ostringstream curve;
    train::write_loss_curve(curve, result.curve);
    r.curve = curve.str();
    std::ostringstream report;
    eval::write_report_csv(
      report, eval::evaluate(bench.test, {eval::model_method("full", m, Mode::full, 5), eval::constant_velocity_method(5)}, {}));
    r.report = report.str();
    r.ckpt = result.checkpoints.back();
    return r;
  };
  const Run a = run("a");
  const Run b = run("b");
  const bool curves_same = a.curve == b.curve;
  const bool reports_same = a.report == b.report;

  // checkpoint round trip: forward outputs bitwise equal
  model::TrafficModel original(mc);
  original.init(derive_seed(5, "init"));
  const auto path = dir / "probe.ckpt";
  nn::Checkpoint ckpt;
  ckpt.metadata = original.metadata();
  nn::append_parameters(ckpt, original.params());
  nn::save_checkpoint(path, ckpt);
  model::TrafficModel loaded(model::ModelConfig::from_metadata(nn::load_checkpoint(path).metadata));
  nn::restore_parameters(nn::load_checkpoint(path), loaded.params());
  bool forward_same = true;
  for (const auto & w : bench.test) {
    for (const Mode mode : {Mode::full, Mode::no_self_attention, Mode::no_category_layer}) {
      model::RolloutOptions opt;
      opt.mode = mode;
      opt.phase = model::Phase::predict;
      ad::Tape ta;
      nn::ParamBinding ba(ta, original.params());
      const auto ra = original.rollout(ba, std::span(w.frames).first(5), opt);
      ad::Tape tb;
      nn::ParamBinding bb(tb, loaded.params());
      const auto rb = loaded.rollout(bb, std::span(w.frames).first(5), opt);
      for (std::size_t k = 0; k < ra.agents.size(); ++k) {
        for (std::size_t s = 0; s < ra.agents[k].steps.size(); ++s) {
          const auto & ga = ra.agents[k].steps[s].gaussian;
          const auto & gb = rb.agents[k].steps[s].gaussian;
          forward_same = forward_same && ga.mu_x == gb.mu_x && ga.mu_y == gb.mu_y && ga.sigma_x == gb.sigma_x &&
                         ga.sigma_y == gb.sigma_y && ga.rho == gb.rho;
        }
      }
    }
  }
  // a trained checkpoint from disk reproduces its run's report
  const auto trained = nn::load_checkpoint(a.ckpt);
  model::TrafficModel reloaded(model::ModelConfig::from_metadata(trained.metadata));
  nn::restore_parameters(trained, reloaded.params());
  std::ostringstream report;
  eval::write_report_csv(
    report,
    eval::evaluate(bench.test, {eval::model_method("full", reloaded, Mode::full, 5), eval::constant_velocity_method(5)}, {}));
  const bool report_from_disk = report.str() == a.report;
  std::filesystem::remove_all(dir);

  Outcome o;
  o.pass = data_same && curves_same && reports_same && forward_same && report_from_disk;
  auto yn = [](bool v) { return v ? "identical" : "DIFFERENT"; };
  o.detail = std::string("data ") + yn(data_same) + ", loss curves " + yn(curves_same) + ", reports " + yn(reports_same) +
             ", reloaded forward " + yn(forward_same) + ", report from checkpoint " + yn(report_from_disk);
  return o;
}

// --- 9 -------------------------------------------------------------------

Outcome throughput()
{
  std::mt19937_64 rng(derive_seed(9, "window"));
  std::vector<graph::FrameObservation> frames;
  for (int t = 0; t < 5; ++t) {
    graph::FrameObservation f{t, {}};
    for (int a = 0; a < 10; ++a) {
      f.agents.push_back({a + 1, graph::kCategories[static_cast<std::size_t>(a) % 3], -0.9 + 0.18 * a + 0.02 * t,
                          0.5 * std::sin(a) - 0.03 * t});
    }
    frames.push_back(std::move(f));
  }
  model::TrafficModel m;
  m.init(derive_seed(9, "init"));
  model::RolloutOptions opt;
  opt.phase = model::Phase::predict;
  opt.obs_frames = 5;
  opt.total_frames = 13;
  std::vector<double> times;
  std::size_t predicted = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = Clock::now();
    ad::Tape tape;
    nn::ParamBinding b(tape, m.params());
    const auto r = m.rollout(b, frames, opt);
    times.push_back(seconds_since(t0));
    predicted = r.frames.size() - 5;
  }
  std::sort(times.begin(), times.end());
  Outcome o;
  o.pass = times.back() <= 1.0 && predicted == 8;
  o.detail = "10 agents, 5 observed + " + std::to_string(predicted) + " predicted frames: median " + fmt(times[2], 3) +
             " s, slowest " + fmt(times.back(), 3) + " s (default widths, one thread)";
  return o;
}

struct Criterion
{
  int number;
  const char * label;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char ** argv)
{
  const std::vector<Criterion> criteria = {
    {1, "gradient_check", gradient_check},
    {2, "distribution_validity", distribution_validity},
    {3, "attention_invariants", attention_invariants},
    {4, "graph_structure", graph_structure},
    {5, "overfit", overfit},
    {6, "relative_ordering", relative_ordering},
    {7, "metric_oracles", metric_oracles},
    {8, "determinism", determinism},
    {9, "throughput", throughput},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all_pass = true;
  bool ran = false;
  for (const auto & c : criteria) {
    if (only != 0 && c.number != only) {
      continue;
    }
    ran = true;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception & e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << "criterion " << c.number << " " << c.label << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail
              << ")" << std::endl;
  }
  if (!ran) {
    std::cerr << "unknown criterion " << argv[1] << '\n';
    return 2;
  }
  return all_pass ? 0 : 1;
}
