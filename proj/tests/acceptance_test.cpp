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

// Acceptance gate. Runs every acceptance criterion and prints one PASS/FAIL
// line per criterion. Exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <array>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hetpop/ingest.hpp"
#include "hetpop/interval.hpp"
#include "hetpop/metrics.hpp"
#include "hetpop/render.hpp"
#include "hetpop/synthgen.hpp"
#include "support/random_trace.hpp"
#include "support/reference_metrics.hpp"
#include "support/sweep_oracle.hpp"

namespace hetpop {
namespace {

namespace fs = std::filesystem;
using testing::Rng;
using testing::uniform;

// Pinned tolerances and budgets.
constexpr long double kIdentityTolerance = 1e-12L;
constexpr double kIdentityBudgetSeconds = 10.0;
constexpr double kOracleBudgetSeconds = 30.0;
constexpr double kUseCase3LoadBalance = 0.55;
constexpr double kUseCase3Tolerance = 0.005;
constexpr double kOverlapOrchestration = 0.50;
constexpr double kOverlapTolerance = 0.02;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string& name) { return slurp(fs::path(HETPOP_GOLDEN_DIR) / name); }

// Flattened view of every metric leaf and parent, in a fixed order.
std::vector<std::optional<double>> all_metrics(const MetricsReport& r) {
  std::vector<std::optional<double>> v;
  if (r.host) {
    v.insert(v.end(), {r.host->parallel_efficiency, r.host->mpi_parallel_efficiency,
                       r.host->mpi_communication_efficiency, r.host->mpi_load_balance,
                       r.host->device_offload_efficiency});
  } else {
    v.insert(v.end(), 5, std::nullopt);
  }
  if (r.device) {
    v.insert(v.end(), {r.device->parallel_efficiency, r.device->load_balance,
                       r.device->communication_efficiency, r.device->orchestration_efficiency});
  } else {
    v.insert(v.end(), 4, std::nullopt);
  }
  return v;
}

bool identity_holds(const std::optional<double>& lhs, std::initializer_list<std::optional<double>> factors) {
  if (!lhs) return true;
  long double product = 1;
  for (const auto& f : factors) {
    if (!f) return true;
    product *= *f;
  }
  return oracle::close(*lhs, product, kIdentityTolerance);
}

Outcome multiplicative_identities() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1);
  testing::TraceShape shape;
  for (int i = 0; i < 1000; ++i) {
    shape.device_overrun = i % 4 == 0 ? 0.2 : 0.0;
    const MetricsReport r = compute_report(testing::random_trace(rng, shape));
    if (r.host) {
      const HostMetrics& h = *r.host;
      if (!identity_holds(h.parallel_efficiency, {h.mpi_parallel_efficiency, h.device_offload_efficiency}))
        o.fail("PE_host != MPI_PE * OE_host on trace " + std::to_string(i));
      if (!identity_holds(h.mpi_parallel_efficiency, {h.mpi_communication_efficiency, h.mpi_load_balance}))
        o.fail("MPI_PE != CE * LB on trace " + std::to_string(i));
    }
    if (r.device) {
      const DeviceMetrics& d = *r.device;
      if (!identity_holds(d.parallel_efficiency,
                          {d.load_balance, d.communication_efficiency, d.orchestration_efficiency}))
        o.fail("PE_dev != LB * CE * OE on trace " + std::to_string(i));
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= kIdentityBudgetSeconds) o.fail("took " + std::to_string(secs) + " s");
  if (o.ok) o.detail = "1000 traces in " + std::to_string(secs) + " s";
  return o;
}

std::vector<Interval> random_intervals(Rng& rng, Nanos limit) {
  std::vector<Interval> v(uniform(rng, 0, 40));
  for (Interval& iv : v) {
    const Nanos a = uniform(rng, 0, limit - 1);
    iv = {a, std::min(limit, a + uniform(rng, 0, limit / 8))};
  }
  return v;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Nanos limit = uniform(rng, 2, 9999);
    const auto ra = random_intervals(rng, limit);
    const auto rb = random_intervals(rng, limit);
    const FlatSet a = flatten(ra);
    const FlatSet b = flatten(rb);
    const oracle::Bitmap ma = oracle::mark(ra, limit);
    const oracle::Bitmap mb = oracle::mark(rb, limit);
    auto same = [&](const FlatSet& got, const oracle::Bitmap& want) {
      const auto iv = got.intervals();
      return std::vector<Interval>(iv.begin(), iv.end()) == oracle::runs(want) &&
             total_duration(got) == oracle::count(want);
    };
    oracle::Bitmap diff(limit), both(limit), either(limit), outside(limit);
    const Nanos lo = uniform(rng, 0, limit - 1);
    const Nanos hi = uniform(rng, lo, limit);
    for (Nanos t = 0; t < limit; ++t) {
      diff[t] = ma[t] && !mb[t];
      both[t] = ma[t] && mb[t];
      either[t] = ma[t] || mb[t];
      outside[t] = t >= lo && t < hi && !ma[t];
    }
    if (!same(a, ma)) o.fail("flatten differs on instance " + std::to_string(i));
    if (!same(subtract(a, b), diff)) o.fail("subtract differs on instance " + std::to_string(i));
    if (!same(intersect(a, b), both)) o.fail("intersect differs on instance " + std::to_string(i));
    if (!same(unite(a, b), either)) o.fail("unite differs on instance " + std::to_string(i));
    if (!same(complement(a, {lo, hi}), outside)) o.fail("complement differs on instance " + std::to_string(i));
  }
  const double secs = seconds_since(t0);
  if (secs >= kOracleBudgetSeconds) o.fail("took " + std::to_string(secs) + " s");
  if (o.ok) o.detail = "1000 instances in " + std::to_string(secs) + " s";
  return o;
}

Outcome fixed_preset_values() {
  Outcome o;
  const MetricsReport uc3 = compute_report(build(preset("usecase3")));
  const std::optional<double> lb = uc3.device ? uc3.device->load_balance : std::nullopt;
  if (!lb || std::fabs(*lb - kUseCase3LoadBalance) > kUseCase3Tolerance)
    o.fail("usecase3 device load balance " + (lb ? std::to_string(*lb) : std::string("n/a")));

  const MetricsReport uc1 = compute_report(build(preset("usecase1")));
  if (!uc1.host || !uc1.device) {
    o.fail("usecase1 lacks a host or device tree");
    return o;
  }
  const std::vector<std::pair<const char*, std::optional<double>>> ones{
      {"mpi_parallel_efficiency", uc1.host->mpi_parallel_efficiency},
      {"mpi_load_balance", uc1.host->mpi_load_balance},
      {"mpi_communication_efficiency", uc1.host->mpi_communication_efficiency},
      {"device load_balance", uc1.device->load_balance},
      {"device communication_efficiency", uc1.device->communication_efficiency}};
  for (const auto& [name, v] : ones) {
    if (v != 1.0) o.fail(std::string("usecase1 ") + name + " is not exactly 1");
  }
  if (o.ok) o.detail = "usecase3 LB " + std::to_string(*lb);
  return o;
}

enum class Leaf { kHostComm, kHostLb, kHostOffload, kDevLb, kDevComm, kDevOrch };

const char* leaf_name(Leaf l) {
  switch (l) {
    case Leaf::kHostComm: return "host communication";
    case Leaf::kHostLb: return "host load balance";
    case Leaf::kHostOffload: return "host device offload";
    case Leaf::kDevLb: return "device load balance";
    case Leaf::kDevComm: return "device communication";
    case Leaf::kDevOrch: return "device orchestration";
  }
  return "?";
}

template <std::size_t N>
Leaf lowest(const std::array<std::pair<Leaf, std::optional<double>>, N>& leaves) {
  auto best = leaves.front();
  for (const auto& l : leaves) {
    if (l.second.value_or(2.0) < best.second.value_or(2.0)) best = l;
  }
  return best.first;
}

Outcome use_case_seven() {
  Outcome o;
  const MetricsReport a = compute_report(build(preset("usecase7a")));
  const MetricsReport b = compute_report(build(preset("usecase7b")));
  if (!a.host || !a.device || !b.host || !b.device) {
    o.fail("usecase7 lacks a host or device tree");
    return o;
  }
  const std::vector<std::pair<const char*, std::pair<std::optional<double>, std::optional<double>>>> leaves{
      {"mpi_communication_efficiency", {a.host->mpi_communication_efficiency, b.host->mpi_communication_efficiency}},
      {"mpi_load_balance", {a.host->mpi_load_balance, b.host->mpi_load_balance}},
      {"device_offload_efficiency", {a.host->device_offload_efficiency, b.host->device_offload_efficiency}},
      {"device load_balance", {a.device->load_balance, b.device->load_balance}},
      {"device communication_efficiency", {a.device->communication_efficiency, b.device->communication_efficiency}},
      {"orchestration_efficiency", {a.device->orchestration_efficiency, b.device->orchestration_efficiency}}};
  std::vector<std::string> changed;
  for (const auto& [name, pair] : leaves) {
    if (pair.first != pair.second) changed.push_back(name);
  }
  if (changed != std::vector<std::string>{"device_offload_efficiency", "orchestration_efficiency"}) {
    std::string list;
    for (const auto& c : changed) list += " " + c;
    o.fail("changed leaves:" + list);
  }
  if (!(b.host->device_offload_efficiency > a.host->device_offload_efficiency))
    o.fail("device_offload_efficiency does not increase under overlap");
  if (!(b.device->orchestration_efficiency > a.device->orchestration_efficiency))
    o.fail("orchestration_efficiency does not increase under overlap");
  const double orch = b.device->orchestration_efficiency.value_or(-1);
  if (std::fabs(orch - kOverlapOrchestration) > kOverlapTolerance)
    o.fail("overlapped orchestration " + std::to_string(orch));

  // Lowest leaf in each tree, as the use-case narratives identify it.
  const std::vector<std::tuple<const char*, Leaf, Leaf>> expected{
      {"usecase1", Leaf::kHostOffload, Leaf::kDevOrch}, {"usecase2", Leaf::kHostOffload, Leaf::kDevOrch},
      {"usecase3", Leaf::kHostOffload, Leaf::kDevLb},   {"usecase4", Leaf::kHostLb, Leaf::kDevOrch},
      {"usecase5", Leaf::kHostOffload, Leaf::kDevOrch}, {"usecase6", Leaf::kHostOffload, Leaf::kDevComm}};
  for (const auto& [name, host_leaf, dev_leaf] : expected) {
    const MetricsReport r = compute_report(build(preset(name)));
    const Leaf h = lowest(std::array<std::pair<Leaf, std::optional<double>>, 3>{
        {{Leaf::kHostComm, r.host->mpi_communication_efficiency},
         {Leaf::kHostLb, r.host->mpi_load_balance},
         {Leaf::kHostOffload, r.host->device_offload_efficiency}}});
    const Leaf d = lowest(std::array<std::pair<Leaf, std::optional<double>>, 3>{
        {{Leaf::kDevLb, r.device->load_balance},
         {Leaf::kDevComm, r.device->communication_efficiency},
         {Leaf::kDevOrch, r.device->orchestration_efficiency}}});
    if (h != host_leaf) o.fail(std::string(name) + " host bottleneck is " + leaf_name(h));
    if (d != dev_leaf) o.fail(std::string(name) + " device bottleneck is " + leaf_name(d));
  }
  if (o.ok) o.detail = "overlapped orchestration " + std::to_string(orch);
  return o;
}

Outcome device_partition() {
  Outcome o;
  Rng rng(5);
  std::vector<Trace> traces;
  for (const PresetInfo& p : presets()) traces.push_back(build(preset(p.name)));
  testing::TraceShape shape;
  shape.device_overrun = 0.2;
  for (int i = 0; i < 1000; ++i) traces.push_back(testing::random_trace(rng, shape));
  std::size_t checked = 0;
  for (const Trace& t : traces) {
    const MetricsReport r = compute_report(t);
    for (const DeviceSummary& d : r.device_summaries) {
      ++checked;
      const auto sum = static_cast<unsigned __int128>(d.kernel) + d.memory + d.idle;
      if (sum != r.elapsed) o.fail("device " + std::to_string(d.device) + " does not partition E");
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " devices";
  return o;
}

Outcome stream_obliviousness() {
  Outcome o;
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    Trace t = testing::random_trace(rng);
    const MetricsReport before = compute_report(t);
    for (DeviceRecord& r : t.device_records) {
      r.stream = testing::coin(rng, 0.2) ? std::nullopt
                                         : std::optional<StreamId>(static_cast<StreamId>(uniform(rng, 0, 1000)));
    }
    const MetricsReport after = compute_report(t);
    if (all_metrics(before) != all_metrics(after) || before.elapsed != after.elapsed)
      o.fail("metrics changed on trace " + std::to_string(i));
  }
  if (o.ok) o.detail = "100 traces";
  return o;
}

Outcome scale_invariance() {
  Outcome o;
  for (const PresetInfo& p : presets()) {
    const MetricsReport base = compute_report(build(preset(p.name, 1)));
    for (std::uint64_t k : {7u, 1000u}) {
      const MetricsReport r = compute_report(build(preset(p.name, k)));
      if (all_metrics(r) != all_metrics(base)) o.fail(std::string(p.name) + " differs at k=" + std::to_string(k));
      if (r.elapsed != base.elapsed * k) o.fail(std::string(p.name) + " elapsed does not scale at k=" + std::to_string(k));
    }
  }
  if (o.ok) o.detail = std::to_string(presets().size()) + " presets";
  return o;
}

Outcome round_trip() {
  Outcome o;
  Rng rng(8);
  testing::TraceShape shape;
  shape.device_overrun = 0.1;
  for (int i = 0; i < 500; ++i) {
    const Trace t = testing::random_trace(rng, shape);
    const std::string doc = write_trace(t);
    if (read_trace(doc) != t) o.fail("read(write(t)) != t on trace " + std::to_string(i));
    if (write_trace(t) != doc) o.fail("write_trace not deterministic on trace " + std::to_string(i));
    const MetricsReport r = compute_report(t);
    RenderOptions raw;
    raw.show_raw = true;
    if (render_json(r, raw) != render_json(compute_report(read_trace(doc)), raw))
      o.fail("render_json not deterministic on trace " + std::to_string(i));
  }
  const Trace uc1 = build(preset("usecase1"));
  const MetricsReport r = compute_report(uc1);
  if (write_trace(uc1) != golden("usecase1.trace.json")) o.fail("usecase1 trace differs from golden");
  if (render_text(r) != golden("usecase1.report.txt")) o.fail("usecase1 text report differs from golden");
  if (render_json(r) != golden("usecase1.report.json")) o.fail("usecase1 JSON report differs from golden");
  if (o.ok) o.detail = "500 traces, 3 golden files";
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HETPOP_CLI_PATH + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end() {
  Outcome o;
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("hetpop-acceptance-" + std::to_string(rd()));
  fs::create_directories(dir);
  const std::string trace = (dir / "uc1.json").string();
  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };

  if (run_cli("generate --preset usecase1 --out " + q(trace)) != 0) o.fail("generate did not exit 0");
  if (run_cli("analyze " + q(trace) + " > " + q(dir / "r.txt")) != 0) o.fail("analyze did not exit 0");
  if (run_cli("analyze " + q(trace) + " --format json --out " + q(dir / "r.json")) != 0)
    o.fail("analyze --format json did not exit 0");
  if (run_cli("validate " + q(trace) + " > " + q(dir / "v.txt")) != 0) o.fail("validate did not exit 0");
  if (slurp(trace) != golden("usecase1.trace.json")) o.fail("generated trace differs from golden");
  if (slurp(dir / "r.txt") != golden("usecase1.report.txt")) o.fail("text report differs from golden");
  if (slurp(dir / "r.json") != golden("usecase1.report.json")) o.fail("JSON report differs from golden");

  const std::string doc = slurp(trace);
  std::ofstream(dir / "truncated.json") << doc.substr(0, doc.size() / 2);
  if (run_cli("analyze " + q(dir / "truncated.json")) != 2) o.fail("truncated trace did not exit 2");
  if (run_cli("analyze " + q(dir / "missing.json")) != 2) o.fail("missing trace did not exit 2");

  Trace bad = build(preset("usecase1"));
  bad.host_records.push_back({0, HostState::kMpi, {1, 3}});
  std::ofstream(dir / "overlap.json") << write_trace(bad);
  if (run_cli("analyze " + q(dir / "overlap.json")) != 1) o.fail("overlapping trace did not exit 1 on analyze");
  if (run_cli("validate " + q(dir / "overlap.json") + " > /dev/null") != 1)
    o.fail("overlapping trace did not exit 1 on validate");

  fs::remove_all(dir);
  if (o.ok) o.detail = "pipeline and exit codes 0, 1, 2";
  return o;
}

}  // namespace
}  // namespace hetpop

int main() {
  using namespace hetpop;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"multiplicative identities", multiplicative_identities},
      {"interval algebra matches sweep oracle", oracle_equivalence},
      {"fixed use-case values", fixed_preset_values},
      {"overlap changes only offload and orchestration", use_case_seven},
      {"device time partitions elapsed", device_partition},
      {"stream ids do not affect metrics", stream_obliviousness},
      {"scale invariance", scale_invariance},
      {"round trip and determinism", round_trip},
      {"end-to-end CLI", end_to_end},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << " (" << o.detail << ")" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
