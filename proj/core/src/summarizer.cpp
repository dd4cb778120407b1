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

#include "hetpop/summarizer.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace hetpop {

namespace {

void require_valid(const Trace& trace) {
  ValidationReport report = validate(trace);
  if (!report.ok()) throw ValidationFailed(std::move(report));
}

void require_positive(Nanos elapsed) {
  if (elapsed == 0) throw Error("device accounting needs a positive elapsed time");
}

struct RawDeviceActivity {
  std::vector<Interval> kernel;
  std::vector<Interval> memory;
  std::size_t clamped = 0;
};

// Groups device records by device, clamping every interval to [0, elapsed).
std::map<DeviceId, RawDeviceActivity> gather_device_activity(const Trace& trace, Nanos elapsed) {
  std::map<DeviceId, RawDeviceActivity> out;
  for (const DeviceRecord& r : trace.device_records) {
    RawDeviceActivity& act = out[r.device];
    Interval iv = r.interval;
    if (iv.empty()) continue;
    if (iv.end > elapsed) {
      ++act.clamped;
      iv.end = elapsed;
      iv.start = std::min(iv.start, elapsed);
    }
    auto& bucket = r.kind == DeviceActivityKind::kKernel ? act.kernel : act.memory;
    bucket.push_back(iv);
  }
  return out;
}

DeviceTimeline build_timeline(const RawDeviceActivity& act, Nanos elapsed) {
  DeviceTimeline t;
  t.kernel = flatten(act.kernel);
  t.memory = subtract(flatten(act.memory), t.kernel);
  t.idle = complement(unite(t.kernel, t.memory), {0, elapsed});
  return t;
}

}  // namespace

namespace detail {

HostAccounting summarize_host_unchecked(const Trace& trace) {
  struct PerState {
    std::vector<Interval> offload, mpi;
    Nanos span_end = 0;
  };
  std::map<RankId, PerState> per_rank;
  for (const HostRecord& r : trace.host_records) {
    PerState& p = per_rank[r.rank];
    switch (r.state) {
      case HostState::kUseful: break;
      case HostState::kOffload: p.offload.push_back(r.interval); break;
      case HostState::kMpi: p.mpi.push_back(r.interval); break;
    }
    if (!r.interval.empty()) p.span_end = std::max(p.span_end, r.interval.end);
  }

  HostAccounting acc;
  acc.hosts.reserve(trace.host_processes.size());
  for (RankId rank : trace.host_processes) {
    HostSummary s;
    s.rank = rank;
    if (auto it = per_rank.find(rank); it != per_rank.end()) {
      const PerState& p = it->second;
      s.offload = total_duration(flatten(p.offload));
      s.mpi = total_duration(flatten(p.mpi));
      s.span_end = p.span_end;
      // Everything in [0, span_end) that is not offload or MPI is useful.
      s.useful = p.span_end - s.offload - s.mpi;
    }
    acc.elapsed = std::max(acc.elapsed, s.total());
    acc.hosts.push_back(s);
  }

  if (trace.host_processes.empty()) {
    for (const DeviceRecord& r : trace.device_records) {
      if (!r.interval.empty()) acc.elapsed = std::max(acc.elapsed, r.interval.end);
    }
  }
  return acc;
}

DeviceAccounting summarize_device_unchecked(const Trace& trace, Nanos elapsed) {
  require_positive(elapsed);
  const auto activity = gather_device_activity(trace, elapsed);
  const RawDeviceActivity nothing;

  DeviceAccounting acc;
  acc.devices.reserve(trace.devices.size());
  for (const DeviceInfo& info : trace.devices) {
    auto it = activity.find(info.id);
    const RawDeviceActivity& act = it == activity.end() ? nothing : it->second;
    const DeviceTimeline t = build_timeline(act, elapsed);
    acc.devices.push_back({info.id, total_duration(t.kernel), total_duration(t.memory),
                           total_duration(t.idle)});
    if (act.clamped > 0) {
      acc.warnings.push_back(fmt::format(
          "device {}: {} record(s) extended past the elapsed time {} ns and were clamped",
          info.id, act.clamped, elapsed));
    }
  }
  return acc;
}

}  // namespace detail

HostAccounting summarize_host(const Trace& trace) {
  require_valid(trace);
  return detail::summarize_host_unchecked(trace);
}

DeviceAccounting summarize_device(const Trace& trace, Nanos elapsed) {
  require_positive(elapsed);
  require_valid(trace);
  return detail::summarize_device_unchecked(trace, elapsed);
}

DeviceTimeline device_timeline(const Trace& trace, DeviceId device, Nanos elapsed) {
  require_positive(elapsed);
  require_valid(trace);
  const auto activity = gather_device_activity(trace, elapsed);
  auto it = activity.find(device);
  return build_timeline(it == activity.end() ? RawDeviceActivity{} : it->second, elapsed);
}

}  // namespace hetpop
