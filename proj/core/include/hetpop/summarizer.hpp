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

#include <string>
#include <vector>

#include "hetpop/interval.hpp"
#include "hetpop/trace.hpp"

namespace hetpop {

// Per-rank totals. Time between a rank's records, and before its first
// record back to t = 0, is uninstrumented computation and counts as useful,
// so useful + offload + mpi == span_end.
struct HostSummary {
  RankId rank = 0;
  Nanos useful = 0;
  Nanos offload = 0;
  Nanos mpi = 0;
  Nanos span_end = 0;

  Nanos total() const { return useful + offload + mpi; }

  friend bool operator==(const HostSummary&, const HostSummary&) = default;
};

struct HostAccounting {
  std::vector<HostSummary> hosts;  // declared rank order
  Nanos elapsed = 0;               // max over ranks of total(); device-derived when n = 0
};

// Per-device occupancy over [0, elapsed). kernel + memory + idle == elapsed.
struct DeviceSummary {
  DeviceId device = 0;
  Nanos kernel = 0;
  Nanos memory = 0;
  Nanos idle = 0;

  friend bool operator==(const DeviceSummary&, const DeviceSummary&) = default;
};

struct DeviceAccounting {
  std::vector<DeviceSummary> devices;  // declared device order
  std::vector<std::string> warnings;   // one per device that needed clamping
};

// The three disjoint occupancy sets of one device.
struct DeviceTimeline {
  FlatSet kernel;
  FlatSet memory;  // memory activity not hidden under a kernel
  FlatSet idle;
};

// Both throw ValidationFailed when `trace` has validation errors.
HostAccounting summarize_host(const Trace& trace);
DeviceAccounting summarize_device(const Trace& trace, Nanos elapsed);

// Kernel records of every stream are flattened together; memory records are
// flattened, then anything under a kernel is removed; idle is the rest of
// [0, elapsed). Records are clamped to `elapsed` first.
DeviceTimeline device_timeline(const Trace& trace, DeviceId device, Nanos elapsed);

namespace detail {
// Variants that trust the caller to have validated the trace already.
HostAccounting summarize_host_unchecked(const Trace& trace);
DeviceAccounting summarize_device_unchecked(const Trace& trace, Nanos elapsed);
}  // namespace detail

}  // namespace hetpop
