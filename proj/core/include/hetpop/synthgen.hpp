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

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hetpop/trace.hpp"

namespace hetpop {

// Phases of a rank program. Durations are nanoseconds and must be positive.
namespace phase {
struct CpuCompute { Nanos duration = 0; };
// Launch a kernel and block until it finishes.
struct OffloadKernelSync { Nanos duration = 0; };
// Launch a kernel and return after the launch overhead.
struct OffloadKernelAsync { Nanos duration = 0; };
// Block until the rank's device has drained all queued work.
struct WaitDevice {};
// Blocking host<->device copy.
struct Memcpy { Nanos duration = 0; };
struct Barrier {};
}  // namespace phase

using Phase = std::variant<phase::CpuCompute, phase::OffloadKernelSync, phase::OffloadKernelAsync,
                           phase::WaitDevice, phase::Memcpy, phase::Barrier>;

// One program per rank; rank r drives device r.
struct ScenarioSpec {
  std::vector<std::vector<Phase>> ranks;
  Nanos launch_overhead = 0;
};

// Simulates the programs and records what a tracer would have seen.
//
// Each rank keeps a host cursor and each device a busy-until cursor. Device
// work starts at max(host cursor + launch overhead, device cursor). At a
// Barrier every rank that arrives early waits in MPI until the last one
// arrives; the end of every program is an implicit Barrier.
//
// Throws ScenarioError for zero durations, a WaitDevice with nothing pending,
// an async launch never waited on, or ranks with different barrier counts.
Trace build(const ScenarioSpec& spec);

struct PresetInfo {
  std::string_view name;
  std::string_view summary;
};

// The named scenarios usecase1 .. usecase6, usecase7a and usecase7b.
std::span<const PresetInfo> presets();

// Base unit of the presets is 1 us; `scale` multiplies every duration,
// including launch overhead. Throws ScenarioError for unknown names or a
// zero scale.
ScenarioSpec preset(std::string_view name, Nanos scale = 1);

// Multiplies every duration of `spec`, including launch overhead, by `k`.
ScenarioSpec scaled(ScenarioSpec spec, Nanos k);

// Scenario documents for `hetpop generate --spec` (see docs/scenario_format.md).
ScenarioSpec read_scenario(std::string_view document);

}  // namespace hetpop
