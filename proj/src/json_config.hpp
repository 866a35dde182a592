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

#include <set>
#include <string>

#include <json.hpp>

#include "error.hpp"

namespace albench {

// Reads a JSON object field by field and rejects keys nobody asked for.
// Error messages carry the dotted field path.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) fail(ErrorCode::kConfig, path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  const nlohmann::json& child(const std::string& key) {
    seen_.insert(key);
    if (!object_.contains(key)) fail(ErrorCode::kConfig, field(key) + ": missing");
    return object_.at(key);
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!object_.contains(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    seen_.insert(key);
    if (!object_.contains(key)) fail(ErrorCode::kConfig, field(key) + ": missing");
    return convert<T>(key);
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.contains(it.key())) fail(ErrorCode::kConfig, field(it.key()) + ": unknown key");
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    try {
      return object_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(ErrorCode::kConfig, field(key) + ": wrong type");
    }
  }

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace albench
