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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hetpop/trace.hpp"

namespace hetpop {

// ---------------------------------------------------------------------------
// Native trace documents (version 1, see docs/trace_format.md).
// ---------------------------------------------------------------------------

inline constexpr int kTraceFormatVersion = 1;

// Decodes a native trace document. The result is structurally sound but the
// trace invariants (overlaps, declarations) are left to validate(). Throws
// ParseError with the path of the first offending element.
Trace read_trace(std::string_view document);

// Canonical encoding: fixed key order, resources in declared order, records
// sorted by (start, end, kind). Equal traces encode to identical bytes.
// Every record must reference a declared resource.
std::string write_trace(const Trace& trace);

// ---------------------------------------------------------------------------
// Mapped import of Chrome trace-event style timelines.
// ---------------------------------------------------------------------------

// Where a mapped record's resource index (rank or device id) comes from.
struct ResourceExpr {
  enum class Source : std::uint8_t { kConstant, kPid, kTid };
  Source source = Source::kConstant;
  std::int64_t value = 0;  // constant value, or offset added to pid/tid

  friend bool operator==(const ResourceExpr&, const ResourceExpr&) = default;
};

struct MappingRule {
  enum class Field : std::uint8_t { kName, kCategory };
  enum class Mode : std::uint8_t { kSubstring, kExact };

  Field field = Field::kName;
  Mode mode = Mode::kSubstring;
  std::string pattern;
  std::variant<HostState, DeviceActivityKind> target;
  ResourceExpr resource;
  std::optional<ResourceExpr> stream;  // device targets only

  bool matches(std::string_view name, std::string_view category) const;

  friend bool operator==(const MappingRule&, const MappingRule&) = default;
};

enum class DefaultPolicy : std::uint8_t { kDrop, kError };

// Ordered rules; the first rule that matches an event decides its fate.
struct CategoryMapping {
  std::vector<MappingRule> rules;
  DefaultPolicy default_policy = DefaultPolicy::kDrop;

  friend bool operator==(const CategoryMapping&, const CategoryMapping&) = default;
};

// Decodes a mapping document (see docs/mapping_format.md).
CategoryMapping read_mapping(std::string_view document);

struct ImportResult {
  Trace trace;
  std::size_t dropped = 0;
  std::vector<std::string> warnings;
};

// Maps every complete ("ph": "X") event of `events_document` through
// `mapping`. Source timestamps are integer microseconds and are converted to
// nanoseconds exactly. Throws ParseError for malformed events and ImportError
// when unmapped events exist under DefaultPolicy::kError.
ImportResult import_mapped(std::string_view events_document, const CategoryMapping& mapping);

}  // namespace hetpop
