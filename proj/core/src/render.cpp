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

#include "hetpop/render.hpp"

#include <algorithm>
#include <optional>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"

namespace hetpop {

namespace {

void check_precision(const RenderOptions& opts) {
  if (opts.precision < 0 || opts.precision > 6) {
    throw Error(fmt::format("precision must be within 0..6, got {}", opts.precision));
  }
}

struct Glyphs {
  std::string_view tee, last, pipe;
};

constexpr Glyphs kUnicode{"├─ ", "└─ ", "│  "};
constexpr Glyphs kAscii{"|- ", "`- ", "|  "};

struct Row {
  std::string label;
  std::optional<double> value;
};

// Column width in terminal cells; every glyph used here is one cell wide.
std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string format_value(const std::optional<double>& v, int precision) {
  if (!v) return "n/a";
  // Correctly rounded from the binary value; exact ties go to even.
  return fmt::format("{:.{}f}", *v, precision);
}

std::vector<Row> host_rows(const HostMetrics& h, const Glyphs& g) {
  return {
      {"Parallel Efficiency", h.parallel_efficiency},
      {std::string(g.tee) + "MPI Parallel Eff.", h.mpi_parallel_efficiency},
      {std::string(g.pipe) + std::string(g.tee) + "Comm. Eff.", h.mpi_communication_efficiency},
      {std::string(g.pipe) + std::string(g.last) + "Load Balance", h.mpi_load_balance},
      {std::string(g.last) + "Device Offload Eff.", h.device_offload_efficiency},
  };
}

std::vector<Row> device_rows(const DeviceMetrics& d, const Glyphs& g) {
  return {
      {"Parallel Efficiency", d.parallel_efficiency},
      {std::string(g.tee) + "Load Balance", d.load_balance},
      {std::string(g.tee) + "Communication Eff.", d.communication_efficiency},
      {std::string(g.last) + "Orchestration Eff.", d.orchestration_efficiency},
  };
}

}  // namespace

std::string render_text(const MetricsReport& report, const RenderOptions& opts) {
  check_precision(opts);
  const Glyphs& g = opts.ascii ? kAscii : kUnicode;

  std::vector<Row> host;
  std::vector<Row> device;
  if (report.host) host = host_rows(*report.host, g);
  if (report.device) device = device_rows(*report.device, g);

  std::size_t width = 0;
  for (const auto* rows : {&host, &device}) {
    for (const Row& r : *rows) width = std::max(width, display_width(r.label));
  }
  width += 2;

  std::string out;
  auto emit = [&out]<typename... A>(fmt::format_string<A...> f, A&&... args) {
    fmt::format_to(std::back_inserter(out), f, std::forward<A>(args)...);
  };
  auto emit_rows = [&](const std::vector<Row>& rows) {
    for (const Row& r : rows) {
      emit("{}{}{}\n", r.label, std::string(width - display_width(r.label), ' '),
           format_value(r.value, opts.precision));
    }
  };

  emit("Elapsed time: {} ns ({} process{}, {} device{})\n\n", report.elapsed, report.processes,
       report.processes == 1 ? "" : "es", report.devices, report.devices == 1 ? "" : "s");

  if (report.host) {
    emit("Host\n");
    emit_rows(host);
  } else {
    emit("no host processes\n");
  }
  emit("\n");
  if (report.device) {
    emit("Device\n");
    emit_rows(device);
  } else {
    emit("no device activity\n");
  }

  if (opts.show_raw) {
    emit("\nRaw durations (ns)\n");
    for (const HostSummary& h : report.host_summaries) {
      emit("  rank {:<6} useful {:>14}  offload {:>14}  mpi {:>14}\n", h.rank, h.useful,
           h.offload, h.mpi);
    }
    for (const DeviceSummary& d : report.device_summaries) {
      emit("  device {:<4} kernel {:>14}  memory {:>14}  idle {:>14}\n", d.device, d.kernel,
           d.memory, d.idle);
    }
  }

  if (!report.warnings.empty()) {
    emit("\nWarnings\n");
    for (const std::string& w : report.warnings) emit("  - {}\n", w);
  }
  return out;
}

std::string render_json(const MetricsReport& report, const RenderOptions& opts) {
  using Json = nlohmann::ordered_json;
  auto metric = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };

  Json doc;
  doc["format_version"] = kReportFormatVersion;
  doc["elapsed_ns"] = report.elapsed;
  doc["processes"] = report.processes;
  doc["devices"] = report.devices;

  if (report.host) {
    const HostMetrics& h = *report.host;
    Json host;
    host["parallel_efficiency"] = metric(h.parallel_efficiency);
    host["mpi_parallel_efficiency"] = metric(h.mpi_parallel_efficiency);
    host["mpi_communication_efficiency"] = metric(h.mpi_communication_efficiency);
    host["mpi_load_balance"] = metric(h.mpi_load_balance);
    host["device_offload_efficiency"] = metric(h.device_offload_efficiency);
    doc["host"] = std::move(host);
  } else {
    doc["host"] = nullptr;
  }

  if (report.device) {
    const DeviceMetrics& d = *report.device;
    Json device;
    device["parallel_efficiency"] = metric(d.parallel_efficiency);
    device["load_balance"] = metric(d.load_balance);
    device["communication_efficiency"] = metric(d.communication_efficiency);
    device["orchestration_efficiency"] = metric(d.orchestration_efficiency);
    doc["device"] = std::move(device);
  } else {
    doc["device"] = nullptr;
  }

  doc["warnings"] = Json::array();
  for (const std::string& w : report.warnings) doc["warnings"].push_back(w);

  if (opts.show_raw) {
    Json hosts = Json::array();
    for (const HostSummary& h : report.host_summaries) {
      Json row;
      row["rank"] = h.rank;
      row["useful_ns"] = h.useful;
      row["offload_ns"] = h.offload;
      row["mpi_ns"] = h.mpi;
      row["span_end_ns"] = h.span_end;
      hosts.push_back(std::move(row));
    }
    Json devices = Json::array();
    for (const DeviceSummary& d : report.device_summaries) {
      Json row;
      row["id"] = d.device;
      row["kernel_ns"] = d.kernel;
      row["memory_ns"] = d.memory;
      row["idle_ns"] = d.idle;
      devices.push_back(std::move(row));
    }
    doc["raw"]["hosts"] = std::move(hosts);
    doc["raw"]["devices"] = std::move(devices);
  }
  return doc.dump(2) + "\n";
}

std::string render(const MetricsReport& report, const RenderOptions& opts) {
  check_precision(opts);
  return opts.format == RenderOptions::Format::kJson ? render_json(report, opts)
                                                      : render_text(report, opts);
}

}  // namespace hetpop
