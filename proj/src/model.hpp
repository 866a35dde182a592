// Copyright 2026 The albench Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "acquisition.hpp"
#include "augment.hpp"
#include "image.hpp"

namespace albench {

enum class Backbone {
  kResNet18Full,
  // Stem + first residual stage + global pool + linear head.
  kResNet18FirstBlock,
};

const char* backbone_name(Backbone b);
Backbone parse_backbone(const std::string& name);

struct DropoutRates {
  double stage = 0.25;  // after every residual stage
  double head = 0.5;    // before the linear head
};

struct TrainConfig {
  Backbone backbone = Backbone::kResNet18FirstBlock;
  int epochs = 50;
  double learning_rate = 0.0005;
  double weight_decay = 0.01;  // AdamW
  int batch_size = 128;
  // Channels of the first stage; 64 is the standard ResNet18.
  int width = 64;
  DropoutRates dropout;
  double mixup_alpha = 0.2;
  double cutmix_alpha = 1.0;
  double batch_aug_prob = 0.5;
  AugmentConfig augment;
  bool oversample = true;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  // Unknown keys are rejected; `path` prefixes error messages.
  static TrainConfig from_json(const nlohmann::json& j, const std::string& path = "train");
};

class TrainedModel {
 public:
  TrainedModel(TrainedModel&&) noexcept;
  TrainedModel& operator=(TrainedModel&&) noexcept;
  ~TrainedModel();

  const std::vector<std::string>& class_list() const;
  const TrainConfig& config() const;
  ImageShape input_shape() const;
  int num_classes() const { return static_cast<int>(class_list().size()); }

  // N x C softmax probabilities, dropout disabled.
  std::vector<double> predict_probs(const ImageStore& store, std::span<const std::size_t> indices) const;
  std::vector<int> predict(const ImageStore& store, std::span<const std::size_t> indices) const;

  // T passes with dropout active and batch norm in inference mode. `rates`
  // overrides the configured dropout rates.
  McProbs mc_dropout_predict(const ImageStore& store, std::span<const std::size_t> indices, int passes,
                             std::uint64_t seed, std::optional<DropoutRates> rates = std::nullopt) const;

  // <dir>/model.pt plus <dir>/model.json (config hash, seed, class list).
  void save(const std::filesystem::path& dir) const;
  static TrainedModel load(const std::filesystem::path& dir);

  // Mean training loss of the final epoch.
  double final_loss() const;

  struct Impl;

 private:
  explicit TrainedModel(std::unique_ptr<Impl> impl);
  friend TrainedModel train_model(const ImageStore&, std::span<const LabeledRef>, std::vector<std::string>,
                                  const TrainConfig&);
  std::unique_ptr<Impl> impl_;
};

std::string config_hash(const nlohmann::json& j);

// Generic recipe: oversample to balance, per-sample augmentation, batch
// MixUp/CutMix, soft-label cross entropy, AdamW.
TrainedModel train_model(const ImageStore& store, std::span<const LabeledRef> labeled,
                         std::vector<std::string> class_list, const TrainConfig& config);

// Every class in `class_list` needs at least one sample (EmptyClass).
TrainedModel train_classifier(const ImageStore& store, std::span<const LabeledRef> labeled,
                              std::vector<std::string> class_list, const TrainConfig& config);

// One-vs-all: minority -> class 1 ("minority"), everything else -> class 0.
std::vector<LabeledRef> binarize(std::span<const LabeledRef> labeled, int minority_class);
TrainedModel train_discriminator(const ImageStore& store, std::span<const LabeledRef> labeled, int minority_class,
                                 const TrainConfig& config);

// Positive-class probability from a deterministic pass. With
// `mc_passes` > 0 it is the MC-dropout mean instead.
std::vector<double> score_discriminator(const TrainedModel& discriminator, const ImageStore& store,
                                        std::span<const std::size_t> indices, int mc_passes = 0,
                                        std::uint64_t seed = 0);

}  // namespace albench
