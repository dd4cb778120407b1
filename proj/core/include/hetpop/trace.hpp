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
#include <vector>

#include "hetpop/error.hpp"
#include "hetpop/interval.hpp"

namespace hetpop {

using RankId = std::uint32_t;
using DeviceId = std::uint32_t;
using StreamId = std::uint32_t;

// Host time is partitioned into exactly these three states.
enum class HostState : std::uint8_t { kUseful, kOffload, kMpi };

// Recorded device activity. Idle is never recorded; it is whatever remains.
enum class DeviceActivityKind : std::uint8_t { kKernel, kMemory };

std::string_view to_string(HostState s);
std::string_view to_string(DeviceActivityKind k);

struct HostRecord {
  RankId rank = 0;
  HostState state = HostState::kUseful;
  Interval interval;

  friend bool operator==(const HostRecord&, const HostRecord&) = default;
};

struct DeviceRecord {
  DeviceId device = 0;
  DeviceActivityKind kind = DeviceActivityKind::kKernel;
  std::optional<StreamId> stream;
  Interval interval;

  friend bool operator==(const DeviceRecord&, const DeviceRecord&) = default;
};

struct DeviceInfo {
  DeviceId id = 0;
  std::optional<RankId> owner_rank;

  friend bool operator==(const DeviceInfo&, const DeviceInfo&) = default;
};

// A complete post-mortem trace: declared resources plus their records. All
// timestamps are nanoseconds relative to one shared epoch.
//
// Equality compares the resource declarations in order and the records as
// multisets, so a trace that went through the canonical writer compares equal
// to the one it was written from.
struct Trace {
  std::vector<RankId> host_processes;
  std::vector<DeviceInfo> devices;
  std::vector<HostRecord> host_records;
  std::vector<DeviceRecord> device_records;

  std::size_t process_count() const { return host_processes.size(); }
  std::size_t device_count() const { return devices.size(); }

  friend bool operator==(const Trace& a, const Trace& b);
};

// Sorts records into the canonical (resource, start, end, kind) order used by
// the native writer.
void canonicalize(Trace& trace);

enum class FindingCode : std::uint8_t {
  kNoResources,
  kDuplicateRank,
  kDuplicateDevice,
  kUnknownOwnerRank,
  kUndeclaredRank,
  kUndeclaredDevice,
  kMalformedInterval,
  kHostOverlap,
  kZeroLength,
  kDeviceBeyondHostElapsed,
};

std::string_view to_string(FindingCode c);

enum class RecordTable : std::uint8_t { kNone, kHost, kDevice };

struct Finding {
  FindingCode code;
  std::string message;
  // Which record list the indices refer to.
  RecordTable table = RecordTable::kNone;
  std::vector<std::size_t> records;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool ok() const { return errors.empty(); }

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Checks every structural invariant of `trace`. Never throws: all problems
// are returned as findings.
ValidationReport validate(const Trace& trace);

// Thrown by operations that require a trace without validation errors.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(ValidationReport report);

  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace hetpop
