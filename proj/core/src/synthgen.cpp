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

#include "hetpop/synthgen.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "json_util.hpp"

namespace hetpop {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct RankState {
  RankId rank = 0;
  Nanos host = 0;    // host cursor
  Nanos device = 0;  // device busy-until
  bool async_pending = false;
};

class Simulator {
 public:
  explicit Simulator(const ScenarioSpec& spec) : spec_(spec) {}

  Trace run() {
    check_spec();
    const std::size_t k = spec_.ranks.size();
    std::vector<RankState> states(k);
    for (std::size_t r = 0; r < k; ++r) states[r].rank = static_cast<RankId>(r);

    // Positions of each program, advanced one barrier segment at a time.
    std::vector<std::size_t> pc(k, 0);
    for (std::size_t segment = 0; segment < segments_; ++segment) {
      for (std::size_t r = 0; r < k; ++r) {
        const auto& program = spec_.ranks[r];
        while (pc[r] < program.size() && !std::holds_alternative<phase::Barrier>(program[pc[r]])) {
          step(states[r], program[pc[r]], pc[r]);
          ++pc[r];
        }
        ++pc[r];  // the barrier itself, or one past the end
      }
      synchronize(states);
    }

    for (const RankState& s : states) {
      if (s.async_pending) {
        throw ScenarioError(fmt::format(
            "rank {}: asynchronous kernel launch is never followed by WaitDevice", s.rank));
      }
    }

    for (std::size_t r = 0; r < k; ++r) {
      trace_.host_processes.push_back(static_cast<RankId>(r));
      trace_.devices.push_back({static_cast<DeviceId>(r), static_cast<RankId>(r)});
    }
    return std::move(trace_);
  }

 private:
  void check_spec() {
    if (spec_.ranks.empty()) throw ScenarioError("a scenario needs at least one rank");
    std::vector<std::size_t> barriers;
    for (std::size_t r = 0; r < spec_.ranks.size(); ++r) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < spec_.ranks[r].size(); ++i) {
        const Phase& p = spec_.ranks[r][i];
        if (std::holds_alternative<phase::Barrier>(p)) ++count;
        const Nanos d = std::visit(
            Overloaded{[](const phase::WaitDevice&) -> Nanos { return 1; },
                       [](const phase::Barrier&) -> Nanos { return 1; },
                       [](const auto& timed) -> Nanos { return timed.duration; }},
            p);
        if (d == 0) {
          throw ScenarioError(fmt::format("rank {} phase {}: duration must be positive", r, i));
        }
      }
      barriers.push_back(count);
    }
    if (std::adjacent_find(barriers.begin(), barriers.end(), std::not_equal_to<>()) !=
        barriers.end()) {
      throw ScenarioError("all ranks must execute the same number of barriers");
    }
    segments_ = barriers.front() + 1;
  }

  void host(RankState& s, HostState state, Nanos end) {
    if (end > s.host) trace_.host_records.push_back({s.rank, state, {s.host, end}});
    s.host = end;
  }

  // Queues `d` ns of device work no earlier than `ready`; returns its end.
  Nanos device(RankState& s, DeviceActivityKind kind, Nanos ready, Nanos d) {
    const Nanos start = std::max(ready, s.device);
    const Nanos end = checked_add(start, d);
    DeviceRecord rec;
    rec.device = s.rank;
    rec.kind = kind;
    rec.interval = {start, end};
    trace_.device_records.push_back(rec);
    s.device = end;
    return end;
  }

  void step(RankState& s, const Phase& p, std::size_t index) {
    const Nanos o = spec_.launch_overhead;
    std::visit(
        Overloaded{
            [&](const phase::CpuCompute& c) {
              host(s, HostState::kUseful, checked_add(s.host, c.duration));
            },
            [&](const phase::OffloadKernelSync& c) {
              const Nanos end =
                  device(s, DeviceActivityKind::kKernel, checked_add(s.host, o), c.duration);
              host(s, HostState::kOffload, end);
            },
            [&](const phase::OffloadKernelAsync& c) {
              const Nanos launched = checked_add(s.host, o);
              device(s, DeviceActivityKind::kKernel, launched, c.duration);
              host(s, HostState::kOffload, launched);
              s.async_pending = true;
            },
            [&](const phase::WaitDevice&) {
              if (!s.async_pending) {
                throw ScenarioError(fmt::format(
                    "rank {} phase {}: WaitDevice with no pending asynchronous work", s.rank,
                    index));
              }
              s.async_pending = false;
              if (s.device > s.host) host(s, HostState::kOffload, s.device);
            },
            [&](const phase::Memcpy& c) {
              const Nanos end =
                  device(s, DeviceActivityKind::kMemory, checked_add(s.host, o), c.duration);
              host(s, HostState::kOffload, end);
            },
            [](const phase::Barrier&) {},
        },
        p);
  }

  void synchronize(std::vector<RankState>& states) {
    Nanos target = 0;
    for (const RankState& s : states) target = std::max(target, s.host);
    for (RankState& s : states) host(s, HostState::kMpi, target);
  }

  const ScenarioSpec& spec_;
  std::size_t segments_ = 1;
  Trace trace_;
};

constexpr Nanos kUnit = 1000;  // 1 us

constexpr std::array<PresetInfo, 8> kPresets{{
    {"usecase1", "loaded GPUs, underutilized CPUs, well balanced"},
    {"usecase2", "loaded CPUs, underutilized GPUs, well balanced"},
    {"usecase3", "loaded GPUs, imbalanced GPU computation, underutilized CPUs"},
    {"usecase4", "imbalanced GPUs and CPUs, CPUs more loaded than GPUs"},
    {"usecase5", "imbalanced CPU load, same global load on CPU and GPU"},
    {"usecase6", "even distribution of work, large host-device data movement"},
    {"usecase7a", "CPU work twice the GPU work, executed one after the other"},
    {"usecase7b", "CPU work twice the GPU work, overlapped with an async launch"},
}};

}  // namespace

Trace build(const ScenarioSpec& spec) { return Simulator(spec).run(); }

std::span<const PresetInfo> presets() { return kPresets; }

ScenarioSpec preset(std::string_view name, Nanos scale) {
  if (scale == 0) throw ScenarioError("preset scale must be a positive integer");
  const Nanos u = checked_mul(kUnit, scale);
  auto cpu = [&](Nanos n) -> Phase { return phase::CpuCompute{checked_mul(n, u)}; };
  auto sync = [&](Nanos n) -> Phase { return phase::OffloadKernelSync{checked_mul(n, u)}; };
  auto async = [&](Nanos n) -> Phase { return phase::OffloadKernelAsync{checked_mul(n, u)}; };
  auto copy = [&](Nanos n) -> Phase { return phase::Memcpy{checked_mul(n, u)}; };
  const Phase wait = phase::WaitDevice{};

  ScenarioSpec s;
  if (name == "usecase1") {
    // GPU work ~10x the CPU work on both ranks.
    s.ranks = {{sync(10), cpu(1)}, {sync(10), cpu(1)}};
  } else if (name == "usecase2") {
    // CPU work ~10x the GPU work on both ranks.
    s.ranks = {{cpu(10), sync(1)}, {cpu(10), sync(1)}};
  } else if (name == "usecase3") {
    // GPU0 gets 10x the kernel time of GPU1; CPU work is equal.
    s.ranks = {{sync(10), cpu(1)}, {sync(1), cpu(1)}};
  } else if (name == "usecase4") {
    // Rank 0 offloads a long kernel and then computes for long; rank 1 has a
    // tenth of both and waits in MPI.
    s.ranks = {{sync(10), cpu(20)}, {sync(1), cpu(2)}};
  } else if (name == "usecase5") {
    // Equal kernels, then an imbalanced CPU phase.
    s.ranks = {{sync(10), cpu(20)}, {sync(10), cpu(2)}};
  } else if (name == "usecase6") {
    // Identical compute and kernels; only rank 0 copies a large buffer back.
    s.ranks = {{cpu(4), sync(9), copy(16)}, {cpu(4), sync(9)}};
  } else if (name == "usecase7a" || name == "usecase7b") {
    // CPU work is twice the GPU work. 7a runs them back to back, 7b launches
    // the kernel asynchronously and computes while it runs. The 0.6 us launch
    // overhead keeps the host's offload share visible in both.
    const bool overlap = name == "usecase7b";
    const std::vector<Phase> program =
        overlap ? std::vector<Phase>{async(10), cpu(20), wait} : std::vector<Phase>{sync(10), cpu(20)};
    s.ranks = {program, program};
    s.launch_overhead = checked_mul(600, scale);
  } else {
    throw ScenarioError(fmt::format("unknown preset \"{}\"", name));
  }
  return s;
}

ScenarioSpec scaled(ScenarioSpec spec, Nanos k) {
  if (k == 0) throw ScenarioError("scale must be a positive integer");
  for (auto& program : spec.ranks) {
    for (Phase& p : program) {
      std::visit(Overloaded{[](phase::WaitDevice&) {}, [](phase::Barrier&) {},
                            [k](auto& timed) { timed.duration = checked_mul(timed.duration, k); }},
                 p);
    }
  }
  spec.launch_overhead = checked_mul(spec.launch_overhead, k);
  return spec;
}

ScenarioSpec read_scenario(std::string_view document) {
  using json_util::child;
  const json_util::Json root = json_util::parse(document);
  json_util::expect_object(root, "", {"version", "ranks"}, {"launch_overhead_ns"});
  const std::int64_t version = json_util::expect_int(root.at("version"), "/version");
  if (version != 1) {
    throw ParseError("/version", fmt::format("unsupported scenario format version {}", version));
  }

  ScenarioSpec spec;
  if (root.contains("launch_overhead_ns")) {
    spec.launch_overhead = json_util::expect_uint(root.at("launch_overhead_ns"),
                                                  "/launch_overhead_ns", UINT64_MAX, "duration");
  }
  const auto& ranks = json_util::expect_array(root.at("ranks"), "/ranks");
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    const std::string rpath = child("/ranks", r);
    const auto& program = json_util::expect_array(ranks[r], rpath);
    std::vector<Phase> phases;
    for (std::size_t i = 0; i < program.size(); ++i) {
      const std::string path = child(rpath, i);
      const auto& p = program[i];
      if (!p.is_object() || !p.contains("phase")) {
        json_util::expect_object(p, path, {"phase"}, {"duration_ns"});
      }
      const std::string kind = json_util::expect_string(p.at("phase"), child(path, "phase"));
      auto duration = [&] {
        json_util::expect_object(p, path, {"phase", "duration_ns"});
        return json_util::expect_uint(p.at("duration_ns"), child(path, "duration_ns"), UINT64_MAX,
                                      "duration");
      };
      auto bare = [&] { json_util::expect_object(p, path, {"phase"}); };
      if (kind == "cpu_compute") {
        phases.push_back(phase::CpuCompute{duration()});
      } else if (kind == "offload_kernel_sync") {
        phases.push_back(phase::OffloadKernelSync{duration()});
      } else if (kind == "offload_kernel_async") {
        phases.push_back(phase::OffloadKernelAsync{duration()});
      } else if (kind == "memcpy") {
        phases.push_back(phase::Memcpy{duration()});
      } else if (kind == "wait_device") {
        bare();
        phases.push_back(phase::WaitDevice{});
      } else if (kind == "barrier") {
        bare();
        phases.push_back(phase::Barrier{});
      } else {
        throw ParseError(child(path, "phase"), "unknown phase \"" + kind + "\"");
      }
    }
    spec.ranks.push_back(std::move(phases));
  }
  return spec;
}

}  // namespace hetpop
