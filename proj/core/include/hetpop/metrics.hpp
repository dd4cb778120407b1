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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetpop/summarizer.hpp"
#include "hetpop/trace.hpp"

namespace hetpop {

// Host hierarchy:
//
//   parallel_efficiency = mpi_parallel_efficiency * device_offload_efficiency
//   mpi_parallel_efficiency = mpi_communication_efficiency * mpi_load_balance
//
// The MPI subtree treats offload time as useful. A metric whose denominator
// is zero is absent rather than 0 or 1.
struct HostMetrics {
  std::optional<double> parallel_efficiency;
  std::optional<double> mpi_parallel_efficiency;
  std::optional<double> mpi_communication_efficiency;
  std::optional<double> mpi_load_balance;
  std::optional<double> device_offload_efficiency;

  friend bool operator==(const HostMetrics&, const HostMetrics&) = default;
};

// Device hierarchy:
//
//   parallel_efficiency = load_balance * communication_efficiency
//                         * orchestration_efficiency
struct DeviceMetrics {
  std::optional<double> parallel_efficiency;
  std::optional<double> load_balance;
  std::optional<double> communication_efficiency;
  std::optional<double> orchestration_efficiency;

  friend bool operator==(const DeviceMetrics&, const DeviceMetrics&) = default;
};

struct MetricsReport {
  Nanos elapsed = 0;
  std::size_t processes = 0;
  std::size_t devices = 0;
  std::optional<HostMetrics> host;      // absent iff processes == 0
  std::optional<DeviceMetrics> device;  // absent iff devices == 0
  std::vector<HostSummary> host_summaries;
  std::vector<DeviceSummary> device_summaries;
  std::vector<std::string> warnings;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// The trace validated but accounts for no time at all.
class ZeroElapsed : public Error {
 public:
  using Error::Error;
};

// Requires at least one summary and elapsed > 0.
HostMetrics host_metrics(std::span<const HostSummary> hosts, Nanos elapsed);
DeviceMetrics device_metrics(std::span<const DeviceSummary> devices, Nanos elapsed);

// validate -> summarize -> evaluate both trees. Throws ValidationFailed or
// ZeroElapsed.
MetricsReport compute_report(const Trace& trace);

}  // namespace hetpop
