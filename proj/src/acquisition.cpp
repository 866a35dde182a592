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

#include "acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"

namespace albench {

void McProbs::validate() const {
  if (data.size() != passes * samples * classes) fail(ErrorCode::kShapeMismatch, "McProbs buffer size mismatch");
  if (passes == 0 || classes == 0) fail(ErrorCode::kShapeMismatch, "McProbs needs T >= 1 and C >= 1");
  for (std::size_t t = 0; t < passes; ++t) {
    for (std::size_t n = 0; n < samples; ++n) {
      double sum = 0;
      for (double p : row(t, n)) {
        if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kInvalidArgument, "probability outside [0, 1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-6) fail(ErrorCode::kInvalidArgument, "probability row does not sum to 1");
    }
  }
}

const char* acquisition_name(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::kRandom: return "random";
    case AcquisitionKind::kEntropy: return "entropy";
    case AcquisitionKind::kBald: return "bald";
    case AcquisitionKind::kVariationRatio: return "variation-ratio";
    case AcquisitionKind::kDiscriminator: return "discriminator";
  }
  return "?";
}

AcquisitionKind parse_acquisition(const std::string& name) {
  for (auto k : {AcquisitionKind::kRandom, AcquisitionKind::kEntropy, AcquisitionKind::kBald,
                 AcquisitionKind::kVariationRatio, AcquisitionKind::kDiscriminator}) {
    if (name == acquisition_name(k)) return k;
  }
  fail(ErrorCode::kConfig, "unknown acquisition method '" + name + "'");
}

namespace {

double entropy_of(std::span<const double> p) {
  double h = 0;
  for (double v : p) {
    if (v > 0) h -= v * std::log(v);
  }
  return h;
}

std::vector<double> mean_distribution(const McProbs& mc, std::size_t n) {
  std::vector<double> mean(mc.classes, 0.0);
  for (std::size_t t = 0; t < mc.passes; ++t) {
    const auto r = mc.row(t, n);
    for (std::size_t c = 0; c < mc.classes; ++c) mean[c] += r[c];
  }
  for (double& v : mean) v /= static_cast<double>(mc.passes);
  return mean;
}

}  // namespace

std::vector<double> score_entropy(const McProbs& mc) {
  mc.validate();
  std::vector<double> out(mc.samples);
  for (std::size_t n = 0; n < mc.samples; ++n) out[n] = entropy_of(mean_distribution(mc, n));
  return out;
}

std::vector<double> score_bald(const McProbs& mc) {
  mc.validate();
  std::vector<double> out(mc.samples);
  for (std::size_t n = 0; n < mc.samples; ++n) {
    double expected = 0;
    for (std::size_t t = 0; t < mc.passes; ++t) expected += entropy_of(mc.row(t, n));
    expected /= static_cast<double>(mc.passes);
    out[n] = std::max(0.0, entropy_of(mean_distribution(mc, n)) - expected);
  }
  return out;
}

std::vector<double> score_variation_ratio(const McProbs& mc) {
  mc.validate();
  std::vector<double> out(mc.samples);
  std::vector<std::size_t> votes(mc.classes);
  for (std::size_t n = 0; n < mc.samples; ++n) {
    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t t = 0; t < mc.passes; ++t) {
      const auto r = mc.row(t, n);
      ++votes[static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin())];
    }
    const auto modal = *std::max_element(votes.begin(), votes.end());
    out[n] = 1.0 - static_cast<double>(modal) / static_cast<double>(mc.passes);
  }
  return out;
}

std::vector<double> score_random(std::size_t count, Rng& rng) {
  std::vector<double> out(count);
  for (double& v : out) v = uniform01(rng);
  return out;
}

std::vector<AcquisitionScore> attach_ids(std::span<const std::string> ids, std::span<const double> scores) {
  if (ids.size() != scores.size()) fail(ErrorCode::kLengthMismatch, "ids and scores differ in length");
  std::vector<AcquisitionScore> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!std::isfinite(scores[i])) fail(ErrorCode::kInvalidArgument, "score for '" + ids[i] + "' is not finite");
    out.push_back({ids[i], scores[i]});
  }
  return out;
}

std::vector<std::string> select_top_k(std::span<const AcquisitionScore> scores, std::size_t k) {
  if (k > scores.size()) {
    fail(ErrorCode::kKTooLarge, "K=" + std::to_string(k) + " exceeds " + std::to_string(scores.size()) + " scores");
  }
  std::set<std::string> distinct;
  for (const auto& s : scores) {
    if (!distinct.insert(s.sample_id).second) fail(ErrorCode::kInvalidArgument, "duplicate id " + s.sample_id);
  }
  std::vector<const AcquisitionScore*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) order.push_back(&s);
  auto better = [](const AcquisitionScore* a, const AcquisitionScore* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->sample_id < b->sample_id;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), better);
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(order[i]->sample_id);
  return out;
}

}  // namespace albench
