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

#include "pools.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "seed.hpp"

namespace albench {

SampleTable::SampleTable(std::vector<Sample> samples, std::vector<std::string> class_list)
    : samples_(std::move(samples)), class_list_(std::move(class_list)) {
  index_.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.true_label < 0 || s.true_label >= num_classes()) {
      fail(ErrorCode::kInvalidArgument, "sample '" + s.id + "' has label " + std::to_string(s.true_label) +
                                            " outside the class list of size " + std::to_string(num_classes()));
    }
    if (!index_.emplace(s.id, i).second) fail(ErrorCode::kInvalidArgument, "duplicate sample id '" + s.id + "'");
  }
}

std::size_t SampleTable::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(ErrorCode::kInvalidArgument, "unknown sample id '" + id + "'");
  return it->second;
}

void ImbalanceSpec::validate() const {
  if (labeled_minority_count < 0 || labeled_majority_count_per_class < 0 || unlabeled_minority_count < 0 ||
      unlabeled_majority_count_per_class < 0) {
    fail(ErrorCode::kInvalidArgument, "imbalance counts must be non-negative");
  }
}

const char* pool_kind_name(PoolKind kind) {
  switch (kind) {
    case PoolKind::kLabeled: return "labeled";
    case PoolKind::kUnlabeled: return "unlabeled";
    case PoolKind::kUnused: return "unused";
  }
  return "?";
}

PoolState::PoolState(std::shared_ptr<const SampleTable> table, int minority_class)
    : table_(std::move(table)),
      minority_class_(minority_class),
      membership_(table_->size(), PoolKind::kUnused),
      revealed_(table_->size(), 0) {
  if (minority_class < 0 || minority_class >= table_->num_classes()) {
    fail(ErrorCode::kInvalidArgument, "minority class " + std::to_string(minority_class) + " not in class list");
  }
}

std::vector<std::size_t> PoolState::members(PoolKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    if (membership_[i] == kind) out.push_back(i);
  }
  return out;
}

std::vector<std::string> PoolState::member_ids(PoolKind kind) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    if (membership_[i] == kind) out.push_back((*table_)[i].id);
  }
  return out;
}

std::size_t PoolState::size(PoolKind kind) const {
  return static_cast<std::size_t>(std::count(membership_.begin(), membership_.end(), kind));
}

ClassCounts PoolState::class_counts(PoolKind kind) const {
  ClassCounts counts(table_->num_classes(), 0);
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    if (membership_[i] == kind) ++counts[(*table_)[i].true_label];
  }
  return counts;
}

void PoolState::check_invariants() const {
  if (membership_.size() != table_->size() || revealed_.size() != table_->size()) {
    fail(ErrorCode::kInternal, "pool membership does not cover the sample table");
  }
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    const auto k = static_cast<int>(membership_[i]);
    if (k < 0 || k > 2) fail(ErrorCode::kInternal, "sample " + (*table_)[i].id + " has no pool");
    if (membership_[i] == PoolKind::kLabeled && !revealed_[i]) {
      fail(ErrorCode::kInternal, "labeled sample " + (*table_)[i].id + " was never revealed");
    }
  }
}

nlohmann::json PoolState::to_json() const {
  nlohmann::json j;
  j["minority_class"] = minority_class_;
  j["class_list"] = table_->class_list();
  for (PoolKind kind : {PoolKind::kLabeled, PoolKind::kUnlabeled, PoolKind::kUnused}) {
    j[pool_kind_name(kind)] = {{"ids", member_ids(kind)}, {"class_counts", class_counts(kind)}};
  }
  return j;
}

PoolState PoolState::from_json(std::shared_ptr<const SampleTable> table, const nlohmann::json& snapshot) {
  PoolState state(table, snapshot.at("minority_class").get<int>());
  if (snapshot.at("class_list").get<std::vector<std::string>>() != table->class_list()) {
    fail(ErrorCode::kConfig, "pool snapshot class list does not match the dataset");
  }
  std::vector<std::uint8_t> seen(table->size(), 0);
  for (PoolKind kind : {PoolKind::kLabeled, PoolKind::kUnlabeled, PoolKind::kUnused}) {
    const auto& section = snapshot.at(pool_kind_name(kind));
    for (const auto& id : section.at("ids")) {
      const std::size_t i = table->index_of(id.get<std::string>());
      if (seen[i]++) fail(ErrorCode::kConfig, "sample " + id.get<std::string>() + " appears in two pools");
      state.membership_[i] = kind;
      state.revealed_[i] = kind == PoolKind::kLabeled;
    }
    if (state.class_counts(kind) != section.at("class_counts").get<ClassCounts>()) {
      fail(ErrorCode::kConfig, std::string("pool snapshot class counts disagree for ") + pool_kind_name(kind));
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) {
    fail(ErrorCode::kConfig, "pool snapshot does not cover every training sample");
  }
  state.check_invariants();
  return state;
}

std::pair<std::vector<Sample>, std::vector<Sample>> stratified_split(std::span<const Sample> dataset,
                                                                     int num_classes, double train_fraction,
                                                                     std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "train_fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int label = dataset[i].true_label;
    if (label < 0 || label >= num_classes) {
      fail(ErrorCode::kInvalidArgument, "sample '" + dataset[i].id + "' has an out-of-range label");
    }
    by_class[label].push_back(i);
  }
  std::vector<std::uint8_t> to_train(dataset.size(), 0);
  const SeedChain chain = SeedChain(seed).mix("stratified_split");
  for (int c = 0; c < num_classes; ++c) {
    auto& members = by_class[c];
    if (members.size() < 2) {
      fail(ErrorCode::kEmptyClass, "class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                                       " samples, at least 2 are required");
    }
    Rng rng = chain.mix(static_cast<std::uint64_t>(c)).rng();
    shuffle_range(members.begin(), members.end(), rng);
    // The epsilon absorbs representation error such as 0.7 * 100 = 69.999...
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(members.size()) * train_fraction + 1e-9));
    for (std::size_t k = 0; k < n_train; ++k) to_train[members[k]] = 1;
  }
  std::pair<std::vector<Sample>, std::vector<Sample>> out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (to_train[i] ? out.first : out.second).push_back(dataset[i]);
  }
  return out;
}

PoolState build_al_pools(std::shared_ptr<const SampleTable> train, int minority_class, const ImbalanceSpec& spec,
                         std::uint64_t seed) {
  spec.validate();
  PoolState state(train, minority_class);
  const SampleTable& table = *train;
  std::vector<std::vector<std::size_t>> by_class(table.num_classes());
  for (std::size_t i = 0; i < table.size(); ++i) by_class[table[i].true_label].push_back(i);

  const SeedChain chain = SeedChain(seed).mix("build_al_pools");
  for (int c = 0; c < table.num_classes(); ++c) {
    const bool minority = c == minority_class;
    const std::int64_t n_labeled = minority ? spec.labeled_minority_count : spec.labeled_majority_count_per_class;
    const std::int64_t n_unlabeled =
        minority ? spec.unlabeled_minority_count : spec.unlabeled_majority_count_per_class;
    auto& members = by_class[c];
    const auto available = static_cast<std::int64_t>(members.size());
    if (available < n_labeled + n_unlabeled) {
      fail(ErrorCode::kInsufficientSamples,
           "class '" + table.class_list()[c] + "' has " + std::to_string(available) + " samples but " +
               std::to_string(n_labeled + n_unlabeled) + " were requested (shortfall " +
               std::to_string(n_labeled + n_unlabeled - available) + ")");
    }
    Rng rng = chain.mix(static_cast<std::uint64_t>(c)).rng();
    shuffle_range(members.begin(), members.end(), rng);
    for (std::int64_t k = 0; k < n_unlabeled; ++k) state.membership_[members[k]] = PoolKind::kUnlabeled;
    for (std::int64_t k = n_unlabeled; k < n_unlabeled + n_labeled; ++k) {
      state.membership_[members[k]] = PoolKind::kLabeled;
      state.revealed_[members[k]] = 1;
    }
  }
  state.check_invariants();
  return state;
}

std::pair<PoolState, std::vector<int>> oracle_label(const PoolState& state, std::span<const std::string> ids) {
  PoolState next = state;
  std::vector<int> labels;
  labels.reserve(ids.size());
  for (const std::string& id : ids) {
    if (!state.table().contains(id)) fail(ErrorCode::kNotInUnlabeled, "'" + id + "' is not a training sample");
    const std::size_t i = state.table().index_of(id);
    // Checking `next` also rejects an id repeated within one query.
    if (next.membership_[i] != PoolKind::kUnlabeled) {
      fail(ErrorCode::kNotInUnlabeled, "'" + id + "' is in the " + pool_kind_name(next.membership_[i]) + " pool");
    }
    next.membership_[i] = PoolKind::kLabeled;
    next.revealed_[i] = 1;
    labels.push_back(state.table()[i].true_label);
  }
  next.check_invariants();
  return {std::move(next), std::move(labels)};
}

std::pair<PoolState, ClassCounts> replenish(const PoolState& state, const ClassCounts& moved_class_counts,
                                            std::uint64_t seed) {
  const int num_classes = state.table().num_classes();
  if (static_cast<int>(moved_class_counts.size()) != num_classes) {
    fail(ErrorCode::kInvalidArgument, "moved class counts must have one entry per class");
  }
  PoolState next = state;
  ClassCounts shortfall(num_classes, 0);
  std::vector<std::vector<std::size_t>> unused(num_classes);
  for (std::size_t i : state.members(PoolKind::kUnused)) unused[state.table()[i].true_label].push_back(i);

  const SeedChain chain = SeedChain(seed).mix("replenish");
  for (int c = 0; c < num_classes; ++c) {
    const std::int64_t wanted = moved_class_counts[c];
    if (wanted < 0) fail(ErrorCode::kInvalidArgument, "moved class counts must be non-negative");
    if (wanted == 0) continue;
    auto& candidates = unused[c];
    const std::int64_t take = std::min<std::int64_t>(wanted, static_cast<std::int64_t>(candidates.size()));
    Rng rng = chain.mix(static_cast<std::uint64_t>(c)).rng();
    shuffle_range(candidates.begin(), candidates.end(), rng);
    for (std::int64_t k = 0; k < take; ++k) next.membership_[candidates[k]] = PoolKind::kUnlabeled;
    shortfall[c] = wanted - take;
  }
  next.check_invariants();
  return {std::move(next), std::move(shortfall)};
}

}  // namespace albench
