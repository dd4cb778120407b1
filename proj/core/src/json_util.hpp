/*
 * Copyright (C) 2026 The hetpop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Strict JSON decoding helpers shared by the document readers. Every failure
// is a ParseError carrying the JSON-pointer path of the offending element.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>

#include "hetpop/error.hpp"
#include "json.hpp"

namespace hetpop::json_util {

using Json = nlohmann::json;

inline std::string child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

inline std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

inline Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

inline const char* kind_of(const Json& j) { return j.type_name(); }

inline void expect_object(const Json& j, const std::string& path,
                          std::initializer_list<std::string_view> required,
                          std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) {
    throw ParseError(path.empty() ? "/" : path,
                     std::string("expected an object, found ") + kind_of(j));
  }
  for (std::string_view key : required) {
    if (!j.contains(std::string(key))) throw ParseError(child(path, key), "missing required field");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view k : required) known = known || k == key;
    for (std::string_view k : optional) known = known || k == key;
    if (!known) throw ParseError(child(path, key), "unknown field");
  }
}

inline const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, std::string("expected an array, found ") + kind_of(j));
  return j;
}

inline std::string expect_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, std::string("expected a string, found ") + kind_of(j));
  return j.get<std::string>();
}

inline std::int64_t expect_int(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ParseError(path, "integer out of range");
    }
    return static_cast<std::int64_t>(v);
  }
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) throw ParseError(path, "expected an integer, found a fractional number");
  throw ParseError(path, std::string("expected an integer, found ") + kind_of(j));
}

// Non-negative integer up to `max`. `what` names the quantity in messages.
inline std::uint64_t expect_uint(const Json& j, const std::string& path,
                                 std::uint64_t max = std::numeric_limits<std::uint64_t>::max(),
                                 std::string_view what = "value") {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > max) throw ParseError(path, std::string(what) + " out of range");
    return v;
  }
  if (j.is_number_integer()) throw ParseError(path, "negative " + std::string(what));
  if (j.is_number_float()) {
    throw ParseError(path, std::string(what) + " must be an integer, found a fractional number");
  }
  throw ParseError(path, std::string("expected a non-negative integer, found ") + kind_of(j));
}

inline std::uint32_t expect_u32(const Json& j, const std::string& path, std::string_view what) {
  return static_cast<std::uint32_t>(
      expect_uint(j, path, std::numeric_limits<std::uint32_t>::max(), what));
}

}  // namespace hetpop::json_util
