// Copyright 2026 The Neural Game Engine Authors.
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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nge/common/errors.h"
#include "nge/common/parallel.h"
#include "nge/evalkit/evalkit.h"
#include "nge/model/model_io.h"
#include "nge/model/reward_codec.h"
#include "nge/training/training.h"

namespace nge::training {
namespace {

using model::Matrix;

// Cross-entropy of one logit pair against class `bit`, and its gradient.
double pair_loss(float l0, float l1, int bit, double* g0, double* g1) {
  const double a = l0, b = l1;
  const double mx = std::max(a, b);
  const double lse = mx + std::log(std::exp(a - mx) + std::exp(b - mx));
  const double p0 = std::exp(a - lse), p1 = std::exp(b - lse);
  if (g0) *g0 = p0 - (bit == 0 ? 1.0 : 0.0);
  if (g1) *g1 = p1 - (bit == 1 ? 1.0 : 0.0);
  return lse - (bit == 0 ? a : b);
}

}  // namespace

double pdt_fraction(const TrainConfig& config, int epoch) {
  if (!config.pdt) return 0.0;
  const double ramp = config.pdt_ramp * config.total_epochs;
  return std::min(1.0, static_cast<double>(epoch) / ramp);
}

int ground_truth_inputs(const TrainConfig& config, int epoch) {
  const int len = config.sequence_length;
  const double rho = pdt_fraction(config, epoch);
  const int k = static_cast<int>(std::ceil((1.0 - rho) * len - 1e-9));
  return std::clamp(k, 1, len);
}

double frame_pixel_loss(const Observation& pred, const Observation& target) {
  if (pred.pixels.size() != target.pixels.size()) throw ShapeError("frame_pixel_loss: shape mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < pred.pixels.size(); ++i) {
    const double d = static_cast<double>(pred.pixels[i]) - target.pixels[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.pixels.size());
}

double frame_reward_loss(const float* logits, int reward) {
  const auto bits = model::encode_reward(reward);
  double acc = 0.0;
  for (int k = 0; k < model::kRewardBits; ++k)
    acc += pair_loss(logits[2 * k], logits[2 * k + 1], bits[k], nullptr, nullptr);
  return acc / model::kRewardBits;
}

BatchLoss pdt_batch_loss(model::ModelParams<float>& params, const SequenceBatch& batch, int epoch,
                         const TrainConfig& config, Rng& noise_rng) {
  if (batch.empty()) throw ValidationError("empty batch");
  const int n_seq = static_cast<int>(batch.size());
  const int len = static_cast<int>(batch[0].size());
  for (const auto& seq : batch) {
    if (static_cast<int>(seq.size()) != len) throw ShapeError("sequences in a batch must share one length");
  }
  const int tile = params.hyper.tile_size;
  const int k_truth = config.pdt ? std::min(ground_truth_inputs(config, epoch), len) : len;
  const double frames_total = static_cast<double>(n_seq) * len;

  std::vector<std::pair<int, int>> extents;
  for (const auto& seq : batch) extents.emplace_back(seq[0].before.grid_width(), seq[0].before.grid_height());
  const kernels::GridLayout layout(extents);
  const model::PackedParams<float> packed = model::PackedParams<float>::pack(params);
  model::PackedParams<float> grads = packed.zeros_like();

  std::vector<model::StepCache<float>> caches(len);
  std::vector<Matrix<float>> targets(len);
  std::vector<Matrix<float>> clamp_masks(len);
  model::StepOptions options;
  options.sat_limit = config.sat_limit;

  BatchLoss out;
  for (int t = 0; t < len; ++t) {
    std::vector<int> actions;
    std::vector<const float*> images;
    for (const auto& seq : batch) {
      actions.push_back(static_cast<int>(seq[t].action));
      images.push_back(seq[t].after.pixels.data());
    }
    kernels::images_to_patches(layout, images, tile, targets[t]);

    Matrix<float> x;
    if (t < k_truth) {
      std::vector<Observation> noised;
      noised.reserve(batch.size());
      for (const auto& seq : batch) noised.push_back(add_noise(seq[t].before, config.noise_sigma, noise_rng));
      images.clear();
      for (const auto& o : noised) images.push_back(o.pixels.data());
      kernels::images_to_patches(layout, images, tile, x);
    } else {
      // Own prediction of the previous step, noised and clamped.
      x = caches[t - 1].y;
      Matrix<float>& mask = clamp_masks[t];
      mask.resize(x.rows(), x.cols());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double v = x.data()[i] + (config.noise_sigma > 0 ? config.noise_sigma * noise_rng.normal() : 0.0);
        mask.data()[i] = (v > 0.0 && v < 1.0) ? 1.0f : 0.0f;
        x.data()[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
    forward_step(packed, layout, std::move(x), actions, caches[t], options);
  }

  // Losses and backward, last step first so gradients of fed-back
  // predictions can flow into earlier steps.
  Matrix<float> carry;
  for (int t = len - 1; t >= 0; --t) {
    const model::StepCache<float>& cache = caches[t];
    Matrix<float> d_y = cache.y - targets[t];
    Matrix<float> d_logits(n_seq, model::kRewardLogits);
    std::vector<double> sat_scale(n_seq, 0.0);
    for (int f = 0; f < n_seq; ++f) {
      auto block = d_y.middleRows(layout.begin(f), layout.cells(f));
      const double count = static_cast<double>(block.size());
      out.pixel += static_cast<double>(block.squaredNorm()) / count;
      block *= static_cast<float>(2.0 / (count * frames_total));

      const auto bits = model::encode_reward(batch[f][t].reward);
      for (int k = 0; k < model::kRewardBits; ++k) {
        double g0, g1;
        out.reward += pair_loss(cache.logits(f, 2 * k), cache.logits(f, 2 * k + 1), bits[k], &g0, &g1) /
                      model::kRewardBits;
        d_logits(f, 2 * k) = static_cast<float>(g0 / (model::kRewardBits * frames_total));
        d_logits(f, 2 * k + 1) = static_cast<float>(g1 / (model::kRewardBits * frames_total));
      }

      out.saturation += cache.frame_saturation(f);
      if (cache.sat_count[f] > 0) sat_scale[f] = config.sat_weight / (cache.sat_count[f] * frames_total);
    }
    if (carry.size() > 0) d_y += carry;
    const bool fed_back = t >= k_truth && config.pdt_backprop;
    Matrix<float> d_x;
    model::backward_step(packed, cache, d_y, &d_logits, sat_scale, config.sat_limit, grads, fed_back ? &d_x : nullptr);
    if (fed_back) {
      carry = d_x.cwiseProduct(clamp_masks[t]);
    } else {
      carry.resize(0, 0);
    }
  }

  params.zero_grad();
  grads.unpack_grad_add(params);
  out.frames = n_seq * len;
  out.transitions = out.frames / std::max(1, config.symmetry_factor);
  out.pixel /= frames_total;
  out.reward /= frames_total;
  out.saturation /= frames_total;
  out.loss = out.pixel + out.reward + config.sat_weight * out.saturation;
  return out;
}

std::string log_csv_header() { return "epoch,loss,pixel_loss,reward_loss,sat_cost,F_t,E_mse,F_r,wall_clock\n"; }

std::string log_csv_row(const LogRow& r) {
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *v);
    return std::string(buf);
  };
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.9g,", r.epoch, r.loss, r.pixel_loss, r.reward_loss, r.sat_cost);
  std::string s = buf;
  s += opt(r.f_t) + "," + opt(r.e_mse) + "," + opt(r.f_r) + ",";
  std::snprintf(buf, sizeof buf, "%.3f\n", r.wall_clock);
  return s + buf;
}

TrainResult train(const TrainConfig& config, const std::function<void(const LogRow&)>& on_row) {
  config.validate();
  if (config.threads > 0) set_worker_threads(config.threads);
  const auto game = gridworld::make_game(config.game, config.model.tile_size);
  model::HyperParams hyper = config.model;
  hyper.num_actions = gridworld::kNumActions;

  namespace fs = std::filesystem;
  const bool write = !config.out_dir.empty();
  std::ofstream log_file;
  if (write) {
    fs::create_directories(config.out_dir);
    std::ofstream(fs::path(config.out_dir) / "config.json") << config_to_json(config);
    log_file.open(fs::path(config.out_dir) / "train_log.csv", std::ios::trunc);
    log_file << log_csv_header() << std::flush;
  }

  TrainResult result;
  result.params = model::init_params<float>(hyper, Rng::mix(config.seed, 1));
  Adam<float> adam(result.params.parameters(), AdamOptions{config.lr, 0.9, 0.999, 1e-8});
  const std::vector<Grid> eval_levels = game->builtin_levels();
  const levelgen::TileDistribution dist =
      levelgen::estimate_distribution(eval_levels, game->wall(), game->palette().size());
  Rng batch_rng(Rng::mix(config.seed, 2));
  Rng noise_rng(Rng::mix(config.seed, 3));
  EpisodeBuffer buffer;
  const auto start = std::chrono::steady_clock::now();

  for (int epoch = 0; epoch < config.total_epochs; ++epoch) {
    if (epoch % config.refresh_every == 0) {
      buffer = collect(*game, dist, config.size_range, config.episodes_per_refresh, config.max_episode_steps,
                       Rng::mix(config.seed, 100 + static_cast<uint64_t>(epoch / config.refresh_every)));
    }
    const SequenceBatch batch = sample_batch(buffer, game->palette(), config, batch_rng);
    const BatchLoss bl = pdt_batch_loss(result.params, batch, epoch, config, noise_rng);
    bool finite = std::isfinite(bl.loss);
    result.params.for_each(
        [&](std::string_view, const Parameter<float>& p) { finite = finite && p.grad.all_finite(); });
    if (!finite) {
      std::string where;
      if (write) {
        where = (fs::path(config.out_dir) / "diverged.nge").string();
        model::save_model(where, result.params);
      }
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch + 1) +
                            (where.empty() ? "" : "; last finite parameters saved to " + where));
    }
    adam.step();

    LogRow row;
    row.epoch = epoch + 1;
    row.loss = bl.loss;
    row.pixel_loss = bl.pixel;
    row.reward_loss = bl.reward;
    row.sat_cost = bl.saturation;
    if (row.epoch % config.eval_every == 0 || row.epoch == config.total_epochs) {
      evalkit::LearnedModel learned(result.params);
      const evalkit::RolloutReport report = evalkit::evaluate_rollouts(
          learned, *game, eval_levels, config.eval_rollout_len, config.eval_repeats, config.eval_seed);
      row.f_t = report.mean_f_t;
      row.min_f_t = report.min_f_t;
      row.e_mse = report.mean_e_mse;
      row.f_r = report.reward.f1;
    }
    row.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (write) log_file << log_csv_row(row) << std::flush;
    if (on_row) on_row(row);
    result.log.push_back(row);
    if (write && row.epoch % config.checkpoint_every == 0 && row.epoch != config.total_epochs) {
      model::save_model((fs::path(config.out_dir) / ("checkpoint_" + std::to_string(row.epoch) + ".nge")).string(),
                        result.params);
    }
    if (config.early_stop && row.min_f_t && *row.min_f_t >= config.early_stop_threshold &&
        *row.f_r >= config.early_stop_threshold) {
      break;
    }
  }
  if (write) model::save_model((fs::path(config.out_dir) / "model.nge").string(), result.params);
  return result;
}

}  // namespace nge::training
