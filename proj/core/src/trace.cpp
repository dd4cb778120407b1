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

#include "hetpop/trace.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

namespace hetpop {

std::string_view to_string(HostState s) {
  switch (s) {
    case HostState::kUseful: return "useful";
    case HostState::kOffload: return "offload";
    case HostState::kMpi: return "mpi";
  }
  return "?";
}

std::string_view to_string(DeviceActivityKind k) {
  switch (k) {
    case DeviceActivityKind::kKernel: return "kernel";
    case DeviceActivityKind::kMemory: return "memory";
  }
  return "?";
}

std::string_view to_string(FindingCode c) {
  switch (c) {
    case FindingCode::kNoResources: return "no-resources";
    case FindingCode::kDuplicateRank: return "duplicate-rank";
    case FindingCode::kDuplicateDevice: return "duplicate-device";
    case FindingCode::kUnknownOwnerRank: return "unknown-owner-rank";
    case FindingCode::kUndeclaredRank: return "undeclared-rank";
    case FindingCode::kUndeclaredDevice: return "undeclared-device";
    case FindingCode::kMalformedInterval: return "malformed-interval";
    case FindingCode::kHostOverlap: return "host-overlap";
    case FindingCode::kZeroLength: return "zero-length";
    case FindingCode::kDeviceBeyondHostElapsed: return "device-beyond-host-elapsed";
  }
  return "?";
}

namespace {

auto host_key(const HostRecord& r) {
  return std::tuple(r.rank, r.interval.start, r.interval.end, r.state);
}

auto device_key(const DeviceRecord& r) {
  return std::tuple(r.device, r.interval.start, r.interval.end, r.kind,
                    r.stream.has_value(), r.stream.value_or(0));
}

void sort_records(std::vector<HostRecord>& hosts, std::vector<DeviceRecord>& devices) {
  std::stable_sort(hosts.begin(), hosts.end(),
                   [](const auto& a, const auto& b) { return host_key(a) < host_key(b); });
  std::stable_sort(devices.begin(), devices.end(),
                   [](const auto& a, const auto& b) { return device_key(a) < device_key(b); });
}

std::string describe(const Interval& iv) { return fmt::format("[{},{})", iv.start, iv.end); }

}  // namespace

void canonicalize(Trace& trace) { sort_records(trace.host_records, trace.device_records); }

bool operator==(const Trace& a, const Trace& b) {
  if (a.host_processes != b.host_processes || a.devices != b.devices ||
      a.host_records.size() != b.host_records.size() ||
      a.device_records.size() != b.device_records.size()) {
    return false;
  }
  Trace ca = a;
  Trace cb = b;
  canonicalize(ca);
  canonicalize(cb);
  return ca.host_records == cb.host_records && ca.device_records == cb.device_records;
}

ValidationReport validate(const Trace& trace) {
  ValidationReport report;
  auto error = [&](FindingCode code, std::string msg, RecordTable table = RecordTable::kNone,
                   std::vector<std::size_t> records = {}) {
    report.errors.push_back({code, std::move(msg), table, std::move(records)});
  };
  auto warn = [&](FindingCode code, std::string msg, RecordTable table = RecordTable::kNone,
                  std::vector<std::size_t> records = {}) {
    report.warnings.push_back({code, std::move(msg), table, std::move(records)});
  };

  if (trace.host_processes.empty() && trace.devices.empty()) {
    error(FindingCode::kNoResources, "trace declares neither host processes nor devices");
  }

  std::set<RankId> ranks;
  for (RankId r : trace.host_processes) {
    if (!ranks.insert(r).second) {
      error(FindingCode::kDuplicateRank, fmt::format("rank {} is declared more than once", r));
    }
  }
  std::set<DeviceId> device_ids;
  for (const DeviceInfo& d : trace.devices) {
    if (!device_ids.insert(d.id).second) {
      error(FindingCode::kDuplicateDevice,
            fmt::format("device {} is declared more than once", d.id));
    }
    if (d.owner_rank && !ranks.contains(*d.owner_rank)) {
      error(FindingCode::kUnknownOwnerRank,
            fmt::format("device {} is owned by undeclared rank {}", d.id, *d.owner_rank));
    }
  }

  // Per-rank indices of host records that take part in the overlap sweep.
  std::map<RankId, std::vector<std::size_t>> by_rank;
  Nanos host_elapsed = 0;
  for (std::size_t i = 0; i < trace.host_records.size(); ++i) {
    const HostRecord& r = trace.host_records[i];
    bool usable = true;
    if (!ranks.contains(r.rank)) {
      error(FindingCode::kUndeclaredRank,
            fmt::format("host record {} refers to undeclared rank {}", i, r.rank),
            RecordTable::kHost, {i});
      usable = false;
    }
    if (r.interval.start > r.interval.end) {
      error(FindingCode::kMalformedInterval,
            fmt::format("host record {} has start > end {}", i, describe(r.interval)),
            RecordTable::kHost, {i});
      usable = false;
    } else if (r.interval.empty()) {
      warn(FindingCode::kZeroLength,
           fmt::format("host record {} (rank {}) has zero length at {}", i, r.rank,
                       r.interval.start),
           RecordTable::kHost, {i});
      usable = false;
    }
    if (usable) {
      by_rank[r.rank].push_back(i);
      host_elapsed = std::max(host_elapsed, r.interval.end);
    }
  }

  for (auto& [rank, idx] : by_rank) {
    const auto& recs = trace.host_records;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return recs[a].interval.start < recs[b].interval.start;
    });
    // `reach` is the record whose end extends furthest so far.
    std::size_t reach = idx.front();
    for (std::size_t k = 1; k < idx.size(); ++k) {
      const HostRecord& cur = recs[idx[k]];
      const HostRecord& prev = recs[reach];
      if (cur.interval.start < prev.interval.end) {
        error(FindingCode::kHostOverlap,
              fmt::format("rank {}: {} {} (host record {}) overlaps {} {} (host record {})", rank,
                          to_string(prev.state), describe(prev.interval), reach,
                          to_string(cur.state), describe(cur.interval), idx[k]),
              RecordTable::kHost, {std::min(reach, idx[k]), std::max(reach, idx[k])});
      }
      if (cur.interval.end > prev.interval.end) reach = idx[k];
    }
  }

  std::map<DeviceId, std::vector<std::size_t>> beyond;
  for (std::size_t i = 0; i < trace.device_records.size(); ++i) {
    const DeviceRecord& r = trace.device_records[i];
    if (!device_ids.contains(r.device)) {
      error(FindingCode::kUndeclaredDevice,
            fmt::format("device record {} refers to undeclared device {}", i, r.device),
            RecordTable::kDevice, {i});
    }
    if (r.interval.start > r.interval.end) {
      error(FindingCode::kMalformedInterval,
            fmt::format("device record {} has start > end {}", i, describe(r.interval)),
            RecordTable::kDevice, {i});
      continue;
    }
    if (r.interval.empty()) {
      warn(FindingCode::kZeroLength,
           fmt::format("device record {} (device {}) has zero length at {}", i, r.device,
                       r.interval.start),
           RecordTable::kDevice, {i});
      continue;
    }
    if (!trace.host_processes.empty() && r.interval.end > host_elapsed) {
      beyond[r.device].push_back(i);
    }
  }
  for (auto& [device, idx] : beyond) {
    warn(FindingCode::kDeviceBeyondHostElapsed,
         fmt::format("device {}: {} record(s) end after the host elapsed time {} ns and will be "
                     "clamped",
                     device, idx.size(), host_elapsed),
         RecordTable::kDevice, std::move(idx));
  }
  return report;
}

ValidationFailed::ValidationFailed(ValidationReport report)
    : Error(report.errors.empty()
                ? std::string("trace failed validation")
                : fmt::format("trace failed validation with {} error(s); first: {}",
                              report.errors.size(), report.errors.front().message)),
      report_(std::move(report)) {}

}  // namespace hetpop
