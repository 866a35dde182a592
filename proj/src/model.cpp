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

#include "model.hpp"

#include <torch/torch.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "error.hpp"
#include "json_config.hpp"
#include "seed.hpp"

namespace albench {

namespace fs = std::filesystem;
namespace nn = torch::nn;

const char* backbone_name(Backbone b) {
  return b == Backbone::kResNet18Full ? "resnet18-full" : "resnet18-first-block";
}

Backbone parse_backbone(const std::string& name) {
  if (name == "resnet18-full") return Backbone::kResNet18Full;
  if (name == "resnet18-first-block") return Backbone::kResNet18FirstBlock;
  fail(ErrorCode::kConfig, "unknown backbone '" + name + "'");
}

void TrainConfig::validate() const {
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (epochs < 1) fail(ErrorCode::kConfig, "train.epochs must be >= 1");
  if (!(learning_rate > 0)) fail(ErrorCode::kConfig, "train.learning_rate must be > 0");
  if (weight_decay < 0) fail(ErrorCode::kConfig, "train.weight_decay must be >= 0");
  if (batch_size < 1) fail(ErrorCode::kConfig, "train.batch_size must be >= 1");
  if (width < 1) fail(ErrorCode::kConfig, "train.width must be >= 1");
  if (!probability(dropout.stage) || !probability(dropout.head) || !probability(batch_aug_prob) ||
      !probability(augment.flip_prob) || !probability(augment.affine_prob) || !probability(augment.color_prob)) {
    fail(ErrorCode::kConfig, "train: probabilities must lie in [0, 1]");
  }
  if (!(mixup_alpha > 0) || !(cutmix_alpha > 0)) fail(ErrorCode::kConfig, "train: mixup/cutmix alpha must be > 0");
}

nlohmann::json TrainConfig::to_json() const {
  return {{"backbone", backbone_name(backbone)},
          {"epochs", epochs},
          {"learning_rate", learning_rate},
          {"weight_decay", weight_decay},
          {"batch_size", batch_size},
          {"width", width},
          {"dropout", {{"stage", dropout.stage}, {"head", dropout.head}}},
          {"mixup_alpha", mixup_alpha},
          {"cutmix_alpha", cutmix_alpha},
          {"batch_aug_prob", batch_aug_prob},
          {"augment",
           {{"flip_prob", augment.flip_prob},
            {"affine_prob", augment.affine_prob},
            {"shift_limit", augment.shift_limit},
            {"scale_limit", augment.scale_limit},
            {"rotate_limit_deg", augment.rotate_limit_deg},
            {"color_prob", augment.color_prob},
            {"brightness_limit", augment.brightness_limit},
            {"contrast_limit", augment.contrast_limit}}},
          {"oversample", oversample},
          {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j, const std::string& path) {
  TrainConfig c;
  ObjectReader r(j, path);
  c.backbone = parse_backbone(r.get<std::string>("backbone", backbone_name(c.backbone)));
  c.epochs = r.get("epochs", c.epochs);
  c.learning_rate = r.get("learning_rate", c.learning_rate);
  c.weight_decay = r.get("weight_decay", c.weight_decay);
  c.batch_size = r.get("batch_size", c.batch_size);
  c.width = r.get("width", c.width);
  if (r.has("dropout")) {
    ObjectReader d(r.child("dropout"), r.field("dropout"));
    c.dropout.stage = d.get("stage", c.dropout.stage);
    c.dropout.head = d.get("head", c.dropout.head);
    d.finish();
  }
  c.mixup_alpha = r.get("mixup_alpha", c.mixup_alpha);
  c.cutmix_alpha = r.get("cutmix_alpha", c.cutmix_alpha);
  c.batch_aug_prob = r.get("batch_aug_prob", c.batch_aug_prob);
  if (r.has("augment")) {
    ObjectReader a(r.child("augment"), r.field("augment"));
    auto& g = c.augment;
    g.flip_prob = a.get("flip_prob", g.flip_prob);
    g.affine_prob = a.get("affine_prob", g.affine_prob);
    g.shift_limit = a.get("shift_limit", g.shift_limit);
    g.scale_limit = a.get("scale_limit", g.scale_limit);
    g.rotate_limit_deg = a.get("rotate_limit_deg", g.rotate_limit_deg);
    g.color_prob = a.get("color_prob", g.color_prob);
    g.brightness_limit = a.get("brightness_limit", g.brightness_limit);
    g.contrast_limit = a.get("contrast_limit", g.contrast_limit);
    a.finish();
  }
  c.oversample = r.get("oversample", c.oversample);
  c.seed = r.get<std::uint64_t>("seed", c.seed);
  r.finish();
  c.validate();
  return c;
}

std::string config_hash(const nlohmann::json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

nn::Conv2dOptions conv_options(int in, int out, int kernel, int stride) {
  return nn::Conv2dOptions(in, out, kernel).stride(stride).padding(kernel / 2).bias(false);
}

struct BasicBlockImpl : nn::Module {
  BasicBlockImpl(int in, int out, int stride)
      : conv1(register_module("conv1", nn::Conv2d(conv_options(in, out, 3, stride)))),
        bn1(register_module("bn1", nn::BatchNorm2d(out))),
        conv2(register_module("conv2", nn::Conv2d(conv_options(out, out, 3, 1)))),
        bn2(register_module("bn2", nn::BatchNorm2d(out))) {
    if (stride != 1 || in != out) {
      downsample = register_module(
          "downsample", nn::Sequential(nn::Conv2d(conv_options(in, out, 1, stride)), nn::BatchNorm2d(out)));
    }
  }

  torch::Tensor forward(const torch::Tensor& x) {
    auto y = torch::relu(bn1(conv1(x)));
    y = bn2(conv2(y));
    return torch::relu(y + (downsample ? downsample->forward(x) : x));
  }

  nn::Conv2d conv1;
  nn::BatchNorm2d bn1;
  nn::Conv2d conv2;
  nn::BatchNorm2d bn2;
  nn::Sequential downsample{nullptr};
};
TORCH_MODULE(BasicBlock);

// 18-layer residual network. Inputs under 64 px get a 3x3 stride-1 stem
// without max pooling.
struct ResNetImpl : nn::Module {
  ResNetImpl(Backbone backbone, int width, int num_classes, ImageShape input) {
    large_input_ = std::min(input.height, input.width) >= 64;
    stem_conv = register_module("stem_conv", nn::Conv2d(conv_options(input.channels, width, large_input_ ? 7 : 3,
                                                                     large_input_ ? 2 : 1)));
    stem_bn = register_module("stem_bn", nn::BatchNorm2d(width));
    const int n_stages = backbone == Backbone::kResNet18Full ? 4 : 1;
    int channels = width;
    for (int s = 0; s < n_stages; ++s) {
      const int out = width << s;
      const int stride = s == 0 ? 1 : 2;
      nn::Sequential stage(BasicBlock(channels, out, stride), BasicBlock(out, out, 1));
      stages.push_back(register_module("stage" + std::to_string(s + 1), stage));
      channels = out;
    }
    head = register_module("head", nn::Linear(channels, num_classes));
  }

  torch::Tensor forward(torch::Tensor x, const DropoutRates& rates, bool dropout_active) {
    x = torch::relu(stem_bn(stem_conv(x)));
    if (large_input_) x = torch::max_pool2d(x, 3, 2, 1);
    for (auto& stage : stages) {
      x = stage->forward(x);
      x = torch::dropout(x, rates.stage, dropout_active);
    }
    x = x.mean({2, 3});
    x = torch::dropout(x, rates.head, dropout_active);
    return head(x);
  }

  bool large_input_ = false;
  nn::Conv2d stem_conv{nullptr};
  nn::BatchNorm2d stem_bn{nullptr};
  std::vector<nn::Sequential> stages;
  nn::Linear head{nullptr};
};
TORCH_MODULE(ResNet);

torch::Tensor normalize(torch::Tensor x) { return (x - 0.5) / 0.25; }

torch::Tensor gather_images(const ImageStore& store, std::span<const std::size_t> indices) {
  const ImageShape s = store.shape();
  auto out = torch::empty({static_cast<long>(indices.size()), s.channels, s.height, s.width}, torch::kUInt8);
  auto* dst = out.data_ptr<std::uint8_t>();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto img = store.image(indices[i]);
    std::copy(img.begin(), img.end(), dst + i * s.pixels());
  }
  return out.to(torch::kFloat32).div_(255.0);
}

constexpr std::size_t kEvalBatch = 256;

}  // namespace

struct TrainedModel::Impl {
  Impl(const TrainConfig& c, std::vector<std::string> classes, ImageShape shape)
      : config(c), class_list(std::move(classes)), input(shape),
        net(c.backbone, c.width, static_cast<int>(class_list.size()), shape) {}

  TrainConfig config;
  std::vector<std::string> class_list;
  ImageShape input;
  mutable ResNet net;
  double final_loss = 0;

  // Softmax probabilities for `indices`, row-major N x C.
  std::vector<double> probs(const ImageStore& store, std::span<const std::size_t> indices, const DropoutRates& rates,
                            bool dropout_active) const {
    if (!(store.shape() == input)) fail(ErrorCode::kShapeMismatch, "image shape differs from the model input");
    torch::NoGradGuard no_grad;
    net->eval();
    std::vector<double> out;
    out.reserve(indices.size() * class_list.size());
    for (std::size_t start = 0; start < indices.size(); start += kEvalBatch) {
      const auto chunk = indices.subspan(start, std::min(kEvalBatch, indices.size() - start));
      auto logits = net->forward(normalize(gather_images(store, chunk)), rates, dropout_active);
      auto p = torch::softmax(logits.to(torch::kFloat64), 1).contiguous();
      const double* data = p.data_ptr<double>();
      out.insert(out.end(), data, data + p.numel());
    }
    return out;
  }
};

TrainedModel::TrainedModel(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
TrainedModel::TrainedModel(TrainedModel&&) noexcept = default;
TrainedModel& TrainedModel::operator=(TrainedModel&&) noexcept = default;
TrainedModel::~TrainedModel() = default;

const std::vector<std::string>& TrainedModel::class_list() const { return impl_->class_list; }
const TrainConfig& TrainedModel::config() const { return impl_->config; }
ImageShape TrainedModel::input_shape() const { return impl_->input; }
double TrainedModel::final_loss() const { return impl_->final_loss; }

std::vector<double> TrainedModel::predict_probs(const ImageStore& store, std::span<const std::size_t> indices) const {
  return impl_->probs(store, indices, impl_->config.dropout, false);
}

std::vector<int> TrainedModel::predict(const ImageStore& store, std::span<const std::size_t> indices) const {
  const auto p = predict_probs(store, indices);
  const std::size_t c = impl_->class_list.size();
  std::vector<int> out(indices.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto* row = p.data() + i * c;
    out[i] = static_cast<int>(std::max_element(row, row + c) - row);
  }
  return out;
}

McProbs TrainedModel::mc_dropout_predict(const ImageStore& store, std::span<const std::size_t> indices, int passes,
                                         std::uint64_t seed, std::optional<DropoutRates> rates) const {
  if (passes < 1) fail(ErrorCode::kInvalidArgument, "MC dropout needs T >= 1");
  const DropoutRates r = rates.value_or(impl_->config.dropout);
  McProbs mc(static_cast<std::size_t>(passes), indices.size(), impl_->class_list.size());
  torch::manual_seed(SeedChain(seed).mix("mc_dropout").value());
  for (int t = 0; t < passes; ++t) {
    const auto p = impl_->probs(store, indices, r, true);
    std::copy(p.begin(), p.end(), mc.data.begin() + static_cast<std::ptrdiff_t>(t * p.size()));
  }
  return mc;
}

void TrainedModel::save(const fs::path& dir) const {
  fs::create_directories(dir);
  torch::save(impl_->net, (dir / "model.pt").string());
  const auto cfg = impl_->config.to_json();
  nlohmann::json sidecar = {{"backbone", backbone_name(impl_->config.backbone)},
                            {"class_list", impl_->class_list},
                            {"seed", impl_->config.seed},
                            {"config_hash", config_hash(cfg)},
                            {"input_shape", {impl_->input.channels, impl_->input.height, impl_->input.width}},
                            {"train_config", cfg},
                            {"final_loss", impl_->final_loss}};
  std::ofstream out(dir / "model.json");
  out << sidecar.dump(2) << "\n";
  if (!out) fail(ErrorCode::kIo, "cannot write " + (dir / "model.json").string());
}

TrainedModel TrainedModel::load(const fs::path& dir) {
  std::ifstream in(dir / "model.json");
  if (!in) fail(ErrorCode::kIo, "cannot read " + (dir / "model.json").string());
  nlohmann::json sidecar;
  in >> sidecar;
  const auto shape = sidecar.at("input_shape").get<std::vector<int>>();
  auto impl = std::make_unique<Impl>(TrainConfig::from_json(sidecar.at("train_config")),
                                     sidecar.at("class_list").get<std::vector<std::string>>(),
                                     ImageShape{shape.at(0), shape.at(1), shape.at(2)});
  torch::load(impl->net, (dir / "model.pt").string());
  impl->final_loss = sidecar.value("final_loss", 0.0);
  return TrainedModel(std::move(impl));
}

TrainedModel train_model(const ImageStore& store, std::span<const LabeledRef> labeled,
                         std::vector<std::string> class_list, const TrainConfig& config) {
  config.validate();
  if (labeled.empty()) fail(ErrorCode::kEmptyInput, "no labeled samples to train on");
  const int num_classes = static_cast<int>(class_list.size());
  for (const auto& s : labeled) {
    if (s.label < 0 || s.label >= num_classes) fail(ErrorCode::kInvalidArgument, "label outside the class list");
    if (s.image_index >= store.size()) fail(ErrorCode::kInvalidArgument, "image index outside the store");
  }
  const SeedChain seeds(config.seed);
  torch::manual_seed(seeds.mix("weights").value());
  auto impl = std::make_unique<TrainedModel::Impl>(config, std::move(class_list), store.shape());
  ResNet& net = impl->net;
  torch::optim::AdamW optimizer(
      net->parameters(), torch::optim::AdamWOptions(config.learning_rate).weight_decay(config.weight_decay));

  Rng data_rng = seeds.mix("augmentation").rng();
  std::vector<LabeledRef> pool = config.oversample ? oversample_balance(labeled, data_rng)
                                                   : std::vector<LabeledRef>(labeled.begin(), labeled.end());
  const BatchAugmentConfig batch_cfg{config.mixup_alpha, config.cutmix_alpha, config.batch_aug_prob};
  const ImageShape shape = store.shape();
  torch::manual_seed(seeds.mix("dropout").value());

  net->train();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_range(pool.begin(), pool.end(), data_rng);
    double loss_sum = 0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < pool.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(pool.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<FloatImage> images;
      std::vector<int> labels;
      images.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        images.push_back(augment_sample(to_float(shape, store.image(pool[i].image_index)), config.augment, data_rng));
        labels.push_back(pool[i].label);
      }
      Batch batch = one_hot_batch(shape, images, labels, num_classes);
      if (batch.size() >= 2) batch = batch_augment(batch, batch_cfg, data_rng).batch;

      const long n = static_cast<long>(batch.size());
      auto x = torch::from_blob(batch.images.data(), {n, shape.channels, shape.height, shape.width}, torch::kFloat32);
      auto y = torch::from_blob(batch.labels.data(), {n, num_classes}, torch::kFloat32);
      optimizer.zero_grad();
      auto logits = net->forward(normalize(x), config.dropout, true);
      auto loss = -(y * torch::log_softmax(logits, 1)).sum(1).mean();
      loss.backward();
      optimizer.step();
      loss_sum += loss.item<double>() * static_cast<double>(n);
      seen += static_cast<std::size_t>(n);
    }
    impl->final_loss = loss_sum / static_cast<double>(seen);
  }
  net->eval();
  return TrainedModel(std::move(impl));
}

TrainedModel train_classifier(const ImageStore& store, std::span<const LabeledRef> labeled,
                              std::vector<std::string> class_list, const TrainConfig& config) {
  config.validate();
  std::vector<std::int64_t> counts(class_list.size(), 0);
  for (const auto& s : labeled) {
    if (s.label >= 0 && s.label < static_cast<int>(counts.size())) ++counts[s.label];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) fail(ErrorCode::kEmptyClass, "class '" + class_list[c] + "' has no labeled sample");
  }
  return train_model(store, labeled, std::move(class_list), config);
}

std::vector<LabeledRef> binarize(std::span<const LabeledRef> labeled, int minority_class) {
  std::vector<LabeledRef> out;
  out.reserve(labeled.size());
  for (const auto& s : labeled) out.push_back({s.image_index, s.label == minority_class ? 1 : 0});
  return out;
}

TrainedModel train_discriminator(const ImageStore& store, std::span<const LabeledRef> labeled, int minority_class,
                                 const TrainConfig& config) {
  const auto binary = binarize(labeled, minority_class);
  const auto positives = std::count_if(binary.begin(), binary.end(), [](const LabeledRef& s) { return s.label == 1; });
  if (positives == 0) fail(ErrorCode::kMissingMinority, "labeled pool has no minority sample");
  if (positives == static_cast<std::ptrdiff_t>(binary.size())) {
    fail(ErrorCode::kInvalidArgument, "labeled pool has no majority sample");
  }
  return train_model(store, binary, {"majority", "minority"}, config);
}

std::vector<double> score_discriminator(const TrainedModel& discriminator, const ImageStore& store,
                                        std::span<const std::size_t> indices, int mc_passes, std::uint64_t seed) {
  if (discriminator.num_classes() != 2) fail(ErrorCode::kInvalidArgument, "discriminator must be binary");
  std::vector<double> out(indices.size());
  if (mc_passes > 0) {
    const McProbs mc = discriminator.mc_dropout_predict(store, indices, mc_passes, seed);
    for (std::size_t n = 0; n < indices.size(); ++n) {
      double sum = 0;
      for (std::size_t t = 0; t < mc.passes; ++t) sum += mc.at(t, n, 1);
      out[n] = sum / static_cast<double>(mc.passes);
    }
    return out;
  }
  const auto p = discriminator.predict_probs(store, indices);
  for (std::size_t n = 0; n < indices.size(); ++n) out[n] = p[2 * n + 1];
  return out;
}

}  // namespace albench
