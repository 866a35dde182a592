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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace albench {

// One image with its ground-truth label. The simulator always knows the
// label; whether the oracle has revealed it is tracked by PoolState.
struct Sample {
  std::string id;
  std::size_t image_index = 0;
  int true_label = 0;
};

using ClassCounts = std::vector<std::int64_t>;

// Immutable sample collection with id lookup.
class SampleTable {
 public:
  SampleTable(std::vector<Sample> samples, std::vector<std::string> class_list);

  const std::vector<Sample>& samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }

  const std::vector<std::string>& class_list() const { return class_list_; }
  int num_classes() const { return static_cast<int>(class_list_.size()); }

  // Throws InvalidArgument for unknown ids.
  std::size_t index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.contains(id); }

 private:
  std::vector<Sample> samples_;
  std::vector<std::string> class_list_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ImbalanceSpec {
  std::int64_t labeled_minority_count = 0;
  std::int64_t labeled_majority_count_per_class = 0;
  std::int64_t unlabeled_minority_count = 0;
  std::int64_t unlabeled_majority_count_per_class = 0;

  void validate() const;
};

enum class PoolKind : std::uint8_t { kLabeled = 0, kUnlabeled = 1, kUnused = 2 };

const char* pool_kind_name(PoolKind kind);

// Labeled / unlabeled / unused partition of a training set. Values are cheap
// to copy; every mutating operation below returns a new state.
class PoolState {
 public:
  PoolState(std::shared_ptr<const SampleTable> table, int minority_class);

  const SampleTable& table() const { return *table_; }
  const std::shared_ptr<const SampleTable>& table_ptr() const { return table_; }
  int minority_class() const { return minority_class_; }
  const std::vector<std::string>& class_list() const { return table_->class_list(); }

  PoolKind pool_of(std::size_t index) const { return membership_[index]; }
  bool revealed(std::size_t index) const { return revealed_[index] != 0; }

  // Member indices in ascending table order.
  std::vector<std::size_t> members(PoolKind kind) const;
  std::vector<std::string> member_ids(PoolKind kind) const;
  std::size_t size(PoolKind kind) const;
  ClassCounts class_counts(PoolKind kind) const;

  // Throws Internal when an invariant is broken.
  void check_invariants() const;

  // Ids and class counts per pool.
  nlohmann::json to_json() const;
  static PoolState from_json(std::shared_ptr<const SampleTable> table, const nlohmann::json& snapshot);

 private:
  friend PoolState build_al_pools(std::shared_ptr<const SampleTable>, int, const ImbalanceSpec&, std::uint64_t);
  friend std::pair<PoolState, std::vector<int>> oracle_label(const PoolState&, std::span<const std::string>);
  friend std::pair<PoolState, ClassCounts> replenish(const PoolState&, const ClassCounts&, std::uint64_t);

  std::shared_ptr<const SampleTable> table_;
  int minority_class_;
  std::vector<PoolKind> membership_;
  std::vector<std::uint8_t> revealed_;
};

// Per-class stratified split; floor(n * train_fraction) of every class goes
// to train, the remainder to test. Relative input order is preserved.
std::pair<std::vector<Sample>, std::vector<Sample>> stratified_split(std::span<const Sample> dataset,
                                                                     int num_classes, double train_fraction,
                                                                     std::uint64_t seed);

// Draws the unlabeled pool first and the labeled pool second from one seeded
// per-class shuffle, so the unlabeled pool does not depend on the labeled
// counts. Everything left over is unused.
PoolState build_al_pools(std::shared_ptr<const SampleTable> train, int minority_class, const ImbalanceSpec& spec,
                         std::uint64_t seed);

std::pair<PoolState, std::vector<int>> oracle_label(const PoolState& state, std::span<const std::string> ids);

// Moves min(count, available) samples per class from unused to unlabeled and
// returns the per-class deficit.
std::pair<PoolState, ClassCounts> replenish(const PoolState& state, const ClassCounts& moved_class_counts,
                                            std::uint64_t seed);

}  // namespace albench
