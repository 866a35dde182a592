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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seed.hpp"

namespace albench {

// T x N x C class probabilities from T stochastic forward passes.
struct McProbs {
  std::size_t passes = 0;
  std::size_t samples = 0;
  std::size_t classes = 0;
  std::vector<double> data;

  McProbs() = default;
  McProbs(std::size_t t, std::size_t n, std::size_t c) : passes(t), samples(n), classes(c), data(t * n * c, 0.0) {}

  double& at(std::size_t t, std::size_t n, std::size_t c) { return data[(t * samples + n) * classes + c]; }
  double at(std::size_t t, std::size_t n, std::size_t c) const { return data[(t * samples + n) * classes + c]; }
  std::span<const double> row(std::size_t t, std::size_t n) const {
    return {data.data() + (t * samples + n) * classes, classes};
  }

  // Throws ShapeMismatch / InvalidArgument unless every row is a
  // distribution (entries in [0,1], sums within 1e-6 of 1).
  void validate() const;
};

struct AcquisitionScore {
  std::string sample_id;
  double score = 0;
};

enum class AcquisitionKind { kRandom, kEntropy, kBald, kVariationRatio, kDiscriminator };

const char* acquisition_name(AcquisitionKind kind);
AcquisitionKind parse_acquisition(const std::string& name);

// Scores are aligned with McProbs sample order. Natural log; 0 ln 0 = 0.
std::vector<double> score_entropy(const McProbs& mc);
// Entropy of the mean minus mean entropy, clamped at 0.
std::vector<double> score_bald(const McProbs& mc);
// 1 - modal count / T over per-pass argmaxes (ties -> lowest class).
std::vector<double> score_variation_ratio(const McProbs& mc);
std::vector<double> score_random(std::size_t count, Rng& rng);

std::vector<AcquisitionScore> attach_ids(std::span<const std::string> ids, std::span<const double> scores);

// K highest scores; ties go to the lexicographically smaller id. The result
// is ordered by (score desc, id asc).
std::vector<std::string> select_top_k(std::span<const AcquisitionScore> scores, std::size_t k);

}  // namespace albench
