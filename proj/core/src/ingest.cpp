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

#include "hetpop/ingest.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "json_util.hpp"

namespace hetpop {

using json_util::child;
using json_util::Json;

namespace {

HostState parse_state(const Json& j, const std::string& path) {
  const std::string s = json_util::expect_string(j, path);
  if (s == "useful") return HostState::kUseful;
  if (s == "offload") return HostState::kOffload;
  if (s == "mpi") return HostState::kMpi;
  throw ParseError(path, "unknown host state \"" + s + "\" (expected useful, offload or mpi)");
}

DeviceActivityKind parse_kind(const Json& j, const std::string& path) {
  const std::string s = json_util::expect_string(j, path);
  if (s == "kernel") return DeviceActivityKind::kKernel;
  if (s == "memory") return DeviceActivityKind::kMemory;
  throw ParseError(path, "unknown device activity kind \"" + s + "\" (expected kernel or memory)");
}

Interval parse_span(const Json& rec, const std::string& path) {
  return {json_util::expect_uint(rec.at("start"), child(path, "start"),
                                 std::numeric_limits<Nanos>::max(), "timestamp"),
          json_util::expect_uint(rec.at("end"), child(path, "end"),
                                 std::numeric_limits<Nanos>::max(), "timestamp")};
}

}  // namespace

Trace read_trace(std::string_view document) {
  const Json root = json_util::parse(document);
  json_util::expect_object(root, "", {"version", "time_unit", "hosts", "devices"});

  const std::int64_t version = json_util::expect_int(root.at("version"), "/version");
  if (version != kTraceFormatVersion) {
    throw ParseError("/version", fmt::format("unsupported trace format version {}", version));
  }
  const std::string unit = json_util::expect_string(root.at("time_unit"), "/time_unit");
  if (unit != "ns") throw ParseError("/time_unit", "unsupported time unit \"" + unit + "\"");

  Trace trace;
  const Json& hosts = json_util::expect_array(root.at("hosts"), "/hosts");
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    const std::string path = child("/hosts", i);
    json_util::expect_object(hosts[i], path, {"rank", "records"});
    const RankId rank = json_util::expect_u32(hosts[i].at("rank"), child(path, "rank"), "rank");
    trace.host_processes.push_back(rank);

    const std::string rpath = child(path, "records");
    const Json& records = json_util::expect_array(hosts[i].at("records"), rpath);
    for (std::size_t k = 0; k < records.size(); ++k) {
      const std::string p = child(rpath, k);
      json_util::expect_object(records[k], p, {"state", "start", "end"});
      trace.host_records.push_back(
          {rank, parse_state(records[k].at("state"), child(p, "state")), parse_span(records[k], p)});
    }
  }

  const Json& devices = json_util::expect_array(root.at("devices"), "/devices");
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const std::string path = child("/devices", i);
    json_util::expect_object(devices[i], path, {"id", "records"}, {"owner_rank"});
    DeviceInfo info;
    info.id = json_util::expect_u32(devices[i].at("id"), child(path, "id"), "device id");
    if (devices[i].contains("owner_rank")) {
      info.owner_rank =
          json_util::expect_u32(devices[i].at("owner_rank"), child(path, "owner_rank"), "rank");
    }
    trace.devices.push_back(info);

    const std::string rpath = child(path, "records");
    const Json& records = json_util::expect_array(devices[i].at("records"), rpath);
    for (std::size_t k = 0; k < records.size(); ++k) {
      const std::string p = child(rpath, k);
      json_util::expect_object(records[k], p, {"kind", "start", "end"}, {"stream"});
      DeviceRecord rec;
      rec.device = info.id;
      rec.kind = parse_kind(records[k].at("kind"), child(p, "kind"));
      if (records[k].contains("stream")) {
        rec.stream = json_util::expect_u32(records[k].at("stream"), child(p, "stream"), "stream");
      }
      rec.interval = parse_span(records[k], p);
      trace.device_records.push_back(rec);
    }
  }
  return trace;
}

std::string write_trace(const Trace& trace) {
  Trace sorted = trace;
  canonicalize(sorted);

  std::map<RankId, std::vector<const HostRecord*>> host_groups;
  for (const HostRecord& r : sorted.host_records) host_groups[r.rank].push_back(&r);
  std::map<DeviceId, std::vector<const DeviceRecord*>> device_groups;
  for (const DeviceRecord& r : sorted.device_records) device_groups[r.device].push_back(&r);

  const std::set<RankId> ranks(trace.host_processes.begin(), trace.host_processes.end());
  for (const auto& [rank, recs] : host_groups) {
    if (!ranks.contains(rank)) {
      throw Error(fmt::format("cannot encode host records of undeclared rank {}", rank));
    }
  }
  std::set<DeviceId> ids;
  for (const DeviceInfo& d : trace.devices) ids.insert(d.id);
  for (const auto& [id, recs] : device_groups) {
    if (!ids.contains(id)) {
      throw Error(fmt::format("cannot encode device records of undeclared device {}", id));
    }
  }

  std::string out;
  auto emit = [&out]<typename... A>(fmt::format_string<A...> f, A&&... args) {
    fmt::format_to(std::back_inserter(out), f, std::forward<A>(args)...);
  };

  emit("{{\n  \"version\": {},\n  \"time_unit\": \"ns\",\n", kTraceFormatVersion);

  // A rank or device declared twice gets its records under the first entry.
  std::set<RankId> written_ranks;
  emit("  \"hosts\": [");
  for (std::size_t i = 0; i < trace.host_processes.size(); ++i) {
    const RankId rank = trace.host_processes[i];
    emit("{}\n    {{\n      \"rank\": {},\n      \"records\": [", i ? "," : "", rank);
    const auto it = host_groups.find(rank);
    if (written_ranks.insert(rank).second && it != host_groups.end()) {
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        const HostRecord& r = *it->second[k];
        emit("{}\n        {{\"state\": \"{}\", \"start\": {}, \"end\": {}}}", k ? "," : "",
             to_string(r.state), r.interval.start, r.interval.end);
      }
      emit("\n      ");
    }
    emit("]\n    }}");
  }
  emit("{}],\n", trace.host_processes.empty() ? "" : "\n  ");

  std::set<DeviceId> written_devices;
  emit("  \"devices\": [");
  for (std::size_t i = 0; i < trace.devices.size(); ++i) {
    const DeviceInfo& info = trace.devices[i];
    emit("{}\n    {{\n      \"id\": {},\n", i ? "," : "", info.id);
    if (info.owner_rank) emit("      \"owner_rank\": {},\n", *info.owner_rank);
    emit("      \"records\": [");
    const auto it = device_groups.find(info.id);
    if (written_devices.insert(info.id).second && it != device_groups.end()) {
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        const DeviceRecord& r = *it->second[k];
        emit("{}\n        {{\"kind\": \"{}\", ", k ? "," : "", to_string(r.kind));
        if (r.stream) emit("\"stream\": {}, ", *r.stream);
        emit("\"start\": {}, \"end\": {}}}", r.interval.start, r.interval.end);
      }
      emit("\n      ");
    }
    emit("]\n    }}");
  }
  emit("{}]\n}}\n", trace.devices.empty() ? "" : "\n  ");
  return out;
}

// ---------------------------------------------------------------------------
// Mapping documents
// ---------------------------------------------------------------------------

namespace {

ResourceExpr parse_resource(const Json& j, const std::string& path) {
  if (j.is_number()) {
    return {ResourceExpr::Source::kConstant,
            static_cast<std::int64_t>(json_util::expect_u32(j, path, "resource index"))};
  }
  auto source_of = [](const std::string& s, const std::string& p) {
    if (s == "pid") return ResourceExpr::Source::kPid;
    if (s == "tid") return ResourceExpr::Source::kTid;
    throw ParseError(p, "unknown resource source \"" + s + "\" (expected pid or tid)");
  };
  if (j.is_string()) return {source_of(j.get<std::string>(), path), 0};
  json_util::expect_object(j, path, {"from"}, {"offset"});
  ResourceExpr e;
  e.source = source_of(json_util::expect_string(j.at("from"), child(path, "from")),
                       child(path, "from"));
  if (j.contains("offset")) e.value = json_util::expect_int(j.at("offset"), child(path, "offset"));
  return e;
}

std::variant<HostState, DeviceActivityKind> parse_target(const Json& j, const std::string& path) {
  const std::string s = json_util::expect_string(j, path);
  if (s == "useful") return HostState::kUseful;
  if (s == "offload") return HostState::kOffload;
  if (s == "mpi") return HostState::kMpi;
  if (s == "kernel") return DeviceActivityKind::kKernel;
  if (s == "memory") return DeviceActivityKind::kMemory;
  throw ParseError(path, "unknown target \"" + s + "\"");
}

}  // namespace

bool MappingRule::matches(std::string_view name, std::string_view category) const {
  const std::string_view subject = field == Field::kName ? name : category;
  return mode == Mode::kExact ? subject == pattern
                              : subject.find(pattern) != std::string_view::npos;
}

CategoryMapping read_mapping(std::string_view document) {
  const Json root = json_util::parse(document);
  json_util::expect_object(root, "", {"rules"}, {"default_policy"});

  CategoryMapping mapping;
  if (root.contains("default_policy")) {
    const std::string p = json_util::expect_string(root.at("default_policy"), "/default_policy");
    if (p == "drop") {
      mapping.default_policy = DefaultPolicy::kDrop;
    } else if (p == "error") {
      mapping.default_policy = DefaultPolicy::kError;
    } else {
      throw ParseError("/default_policy", "unknown policy \"" + p + "\" (expected drop or error)");
    }
  }

  const Json& rules = json_util::expect_array(root.at("rules"), "/rules");
  if (rules.empty()) throw ParseError("/rules", "a mapping needs at least one rule");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string path = child("/rules", i);
    const Json& r = rules[i];
    json_util::expect_object(r, path, {"pattern", "target", "resource"}, {"field", "mode", "stream"});
    MappingRule rule;
    if (r.contains("field")) {
      const std::string f = json_util::expect_string(r.at("field"), child(path, "field"));
      if (f == "name") {
        rule.field = MappingRule::Field::kName;
      } else if (f == "cat") {
        rule.field = MappingRule::Field::kCategory;
      } else {
        throw ParseError(child(path, "field"), "unknown field \"" + f + "\" (expected name or cat)");
      }
    }
    if (r.contains("mode")) {
      const std::string m = json_util::expect_string(r.at("mode"), child(path, "mode"));
      if (m == "substring") {
        rule.mode = MappingRule::Mode::kSubstring;
      } else if (m == "exact") {
        rule.mode = MappingRule::Mode::kExact;
      } else {
        throw ParseError(child(path, "mode"),
                         "unknown mode \"" + m + "\" (expected substring or exact)");
      }
    }
    rule.pattern = json_util::expect_string(r.at("pattern"), child(path, "pattern"));
    if (rule.pattern.empty()) throw ParseError(child(path, "pattern"), "pattern must not be empty");
    rule.target = parse_target(r.at("target"), child(path, "target"));
    rule.resource = parse_resource(r.at("resource"), child(path, "resource"));
    if (r.contains("stream")) {
      if (std::holds_alternative<HostState>(rule.target)) {
        throw ParseError(child(path, "stream"), "stream applies to device targets only");
      }
      rule.stream = parse_resource(r.at("stream"), child(path, "stream"));
    }
    mapping.rules.push_back(std::move(rule));
  }
  return mapping;
}

// ---------------------------------------------------------------------------
// Event import
// ---------------------------------------------------------------------------

namespace {

struct Event {
  std::string name;
  std::string category;
  std::int64_t pid = 0;
  std::int64_t tid = 0;
  Interval span;
};

Event parse_event(const Json& e, const std::string& path) {
  for (const char* key : {"name", "ts", "dur", "pid", "tid"}) {
    if (!e.contains(key)) throw ParseError(child(path, key), "missing required field");
  }
  Event ev;
  ev.name = json_util::expect_string(e.at("name"), child(path, "name"));
  if (e.contains("cat")) ev.category = json_util::expect_string(e.at("cat"), child(path, "cat"));
  ev.pid = json_util::expect_int(e.at("pid"), child(path, "pid"));
  ev.tid = json_util::expect_int(e.at("tid"), child(path, "tid"));
  const Nanos ts_us = json_util::expect_uint(e.at("ts"), child(path, "ts"),
                                             std::numeric_limits<Nanos>::max(), "timestamp");
  const Nanos dur_us = json_util::expect_uint(e.at("dur"), child(path, "dur"),
                                              std::numeric_limits<Nanos>::max(), "duration");
  try {
    ev.span.start = checked_mul(ts_us, 1000);
    ev.span.end = checked_add(ev.span.start, checked_mul(dur_us, 1000));
  } catch (const ArithmeticOverflow&) {
    throw ParseError(path, "timestamp does not fit in 64-bit nanoseconds");
  }
  return ev;
}

std::uint32_t evaluate(const ResourceExpr& expr, const Event& ev, const std::string& path) {
  std::int64_t v = expr.value;
  if (expr.source == ResourceExpr::Source::kPid) v += ev.pid;
  if (expr.source == ResourceExpr::Source::kTid) v += ev.tid;
  if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError(path, fmt::format("mapped resource index {} is out of range", v));
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

ImportResult import_mapped(std::string_view events_document, const CategoryMapping& mapping) {
  const Json root = json_util::parse(events_document);
  const Json* events = &root;
  std::string base;
  if (root.is_object()) {
    if (!root.contains("traceEvents")) throw ParseError("/traceEvents", "missing required field");
    events = &root.at("traceEvents");
    base = "/traceEvents";
  }
  json_util::expect_array(*events, base.empty() ? "/" : base);

  ImportResult result;
  std::set<RankId> ranks;
  std::set<DeviceId> devices;
  std::vector<std::string> offenders;

  for (std::size_t i = 0; i < events->size(); ++i) {
    const std::string path = child(base, i);
    const Json& e = (*events)[i];
    if (!e.is_object()) throw ParseError(path, "expected an event object");
    if (!e.contains("ph") || json_util::expect_string(e.at("ph"), child(path, "ph")) != "X") {
      continue;
    }
    const Event ev = parse_event(e, path);

    const auto rule = std::find_if(mapping.rules.begin(), mapping.rules.end(),
                                   [&](const MappingRule& r) { return r.matches(ev.name, ev.category); });
    if (rule == mapping.rules.end()) {
      ++result.dropped;
      if (offenders.size() < 10) offenders.push_back(fmt::format("{} (event {})", ev.name, i));
      continue;
    }

    const std::uint32_t resource = evaluate(rule->resource, ev, path);
    if (const auto* state = std::get_if<HostState>(&rule->target)) {
      ranks.insert(resource);
      result.trace.host_records.push_back({resource, *state, ev.span});
    } else {
      devices.insert(resource);
      DeviceRecord rec;
      rec.device = resource;
      rec.kind = std::get<DeviceActivityKind>(rule->target);
      if (rule->stream) rec.stream = evaluate(*rule->stream, ev, path);
      rec.interval = ev.span;
      result.trace.device_records.push_back(rec);
    }
  }

  if (result.dropped > 0) {
    const std::string listed = fmt::format("{}", fmt::join(offenders, ", "));
    const std::string more =
        result.dropped > offenders.size() ? fmt::format(" and {} more", result.dropped - offenders.size()) : "";
    if (mapping.default_policy == DefaultPolicy::kError) {
      throw ImportError(fmt::format("{} event(s) matched no mapping rule: {}{}", result.dropped,
                                    listed, more),
                        std::move(offenders));
    }
    result.warnings.push_back(fmt::format("dropped {} event(s) that matched no mapping rule: {}{}",
                                          result.dropped, listed, more));
  }

  result.trace.host_processes.assign(ranks.begin(), ranks.end());
  for (DeviceId d : devices) result.trace.devices.push_back({d, std::nullopt});
  return result;
}

}  // namespace hetpop
