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

#include "hetpop/metrics.hpp"

#include <algorithm>

namespace hetpop {

namespace {

__extension__ using Wide = unsigned __int128;

// Each metric is one division of two exact integers, so the result is the
// correctly rounded value of the exact ratio and does not depend on the time
// unit.
double ratio(Wide num, Wide den) { return static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

HostMetrics host_metrics(std::span<const HostSummary> hosts, Nanos elapsed) {
  if (hosts.empty()) throw Error("host metrics need at least one process");
  if (elapsed == 0) throw Error("host metrics need a positive elapsed time");

  const Wide n = hosts.size();
  Wide useful = 0;
  Wide busy = 0;  // useful + offload
  Wide max_busy = 0;
  for (const HostSummary& h : hosts) {
    const Wide b = Wide{h.useful} + h.offload;
    useful += h.useful;
    busy += b;
    max_busy = std::max(max_busy, b);
  }

  HostMetrics m;
  m.parallel_efficiency = ratio(useful, elapsed * n);
  if (busy == 0) return m;
  m.mpi_parallel_efficiency = ratio(busy, elapsed * n);
  m.mpi_communication_efficiency = ratio(max_busy, elapsed);
  m.mpi_load_balance = ratio(busy, n * max_busy);
  m.device_offload_efficiency = ratio(useful, busy);
  return m;
}

DeviceMetrics device_metrics(std::span<const DeviceSummary> devices, Nanos elapsed) {
  if (devices.empty()) throw Error("device metrics need at least one device");
  if (elapsed == 0) throw Error("device metrics need a positive elapsed time");

  const Wide m = devices.size();
  Wide kernel = 0;
  Wide max_kernel = 0;
  Wide max_active = 0;  // kernel + memory
  for (const DeviceSummary& d : devices) {
    kernel += d.kernel;
    max_kernel = std::max(max_kernel, Wide{d.kernel});
    max_active = std::max(max_active, Wide{d.kernel} + d.memory);
  }

  DeviceMetrics out;
  out.parallel_efficiency = ratio(kernel, elapsed * m);
  out.orchestration_efficiency = ratio(max_active, elapsed);
  if (max_kernel == 0) return out;
  out.load_balance = ratio(kernel, m * max_kernel);
  out.communication_efficiency = ratio(max_kernel, max_active);
  return out;
}

MetricsReport compute_report(const Trace& trace) {
  ValidationReport validation = validate(trace);
  if (!validation.ok()) throw ValidationFailed(std::move(validation));

  HostAccounting host = detail::summarize_host_unchecked(trace);
  if (host.elapsed == 0) throw ZeroElapsed("trace accounts for no time: elapsed E = 0");

  MetricsReport report;
  report.elapsed = host.elapsed;
  report.processes = trace.process_count();
  report.devices = trace.device_count();

  for (const Finding& w : validation.warnings) {
    // Clamping is reported by the device accounting below, per device.
    if (w.code == FindingCode::kDeviceBeyondHostElapsed) continue;
    report.warnings.push_back(w.message);
  }

  if (report.processes > 0) report.host = host_metrics(host.hosts, report.elapsed);
  report.host_summaries = std::move(host.hosts);

  if (report.devices > 0) {
    DeviceAccounting dev = detail::summarize_device_unchecked(trace, report.elapsed);
    report.device = device_metrics(dev.devices, report.elapsed);
    report.device_summaries = std::move(dev.devices);
    for (auto& w : dev.warnings) report.warnings.push_back(std::move(w));
  }
  return report;
}

}  // namespace hetpop
