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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hetpop/ingest.hpp"
#include "hetpop/metrics.hpp"
#include "hetpop/render.hpp"
#include "hetpop/synthgen.hpp"

namespace hetpop::cli {

namespace {

// Failure already reported to the error stream; carries the exit code.
struct Exit {
  int code;
};

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "hetpop: cannot open " << path << "\n";
    throw Exit{kIoError};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    err << "hetpop: error reading " << path << "\n";
    throw Exit{kIoError};
  }
  return buf.str();
}

void write_output(const std::string& path, const std::string& payload, std::ostream& out,
                  std::ostream& err) {
  if (path == "-") {
    out << payload;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << payload;
  f.close();
  if (!f) {
    err << "hetpop: cannot write " << path << "\n";
    throw Exit{kIoError};
  }
}

template <class F>
auto parsing(const std::string& what, std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    err << "hetpop: " << what << ": " << e.what() << "\n";
    throw Exit{kIoError};
  }
}

void print_findings(const ValidationReport& report, std::ostream& os) {
  for (const Finding& f : report.errors) {
    os << "error [" << to_string(f.code) << "]: " << f.message << "\n";
  }
  for (const Finding& f : report.warnings) {
    os << "warning [" << to_string(f.code) << "]: " << f.message << "\n";
  }
}

struct AnalyzeArgs {
  std::string trace;
  std::string format = "text";
  int precision = 2;
  bool show_raw = false;
  bool ascii = false;
  std::string out = "-";
};

int analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const std::string doc = read_file(a.trace, err);
  const Trace trace = parsing(a.trace, err, [&] { return read_trace(doc); });

  MetricsReport report;
  try {
    report = compute_report(trace);
  } catch (const ValidationFailed& e) {
    err << "hetpop: " << a.trace << " failed validation\n";
    print_findings(e.report(), err);
    return kInvalidInput;
  } catch (const ZeroElapsed& e) {
    err << "hetpop: " << a.trace << ": " << e.what() << "\n";
    return kInvalidInput;
  }

  RenderOptions opts;
  opts.format = a.format == "json" ? RenderOptions::Format::kJson : RenderOptions::Format::kText;
  opts.precision = a.precision;
  opts.show_raw = a.show_raw;
  opts.ascii = a.ascii;
  write_output(a.out, render(report, opts), out, err);
  return kSuccess;
}

struct GenerateArgs {
  std::string preset;
  std::string spec;
  std::uint64_t scale = 1;
  std::string out;
};

int generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.preset.empty() == a.spec.empty()) {
    err << "hetpop generate: give exactly one of --preset or --spec\n";
    return kUsageError;
  }
  if (!a.preset.empty()) {
    const auto known = presets();
    if (std::none_of(known.begin(), known.end(),
                     [&](const PresetInfo& p) { return p.name == a.preset; })) {
      err << "hetpop generate: unknown preset \"" << a.preset << "\"; known presets:";
      for (const PresetInfo& p : known) err << " " << p.name;
      err << "\n";
      return kUsageError;
    }
  }

  try {
    ScenarioSpec spec;
    if (!a.preset.empty()) {
      spec = preset(a.preset, a.scale);
    } else {
      const std::string doc = read_file(a.spec, err);
      spec = scaled(parsing(a.spec, err, [&] { return read_scenario(doc); }), a.scale);
    }
    write_output(a.out, write_trace(build(spec)), out, err);
  } catch (const ScenarioError& e) {
    err << "hetpop generate: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ArithmeticOverflow& e) {
    err << "hetpop generate: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kSuccess;
}

int validate_cmd(const std::string& path, std::ostream& out, std::ostream& err) {
  const std::string doc = read_file(path, err);
  const Trace trace = parsing(path, err, [&] { return read_trace(doc); });
  const ValidationReport report = validate(trace);
  print_findings(report, out);
  out << path << ": " << report.errors.size() << " error(s), " << report.warnings.size()
      << " warning(s)\n";
  return report.ok() ? kSuccess : kInvalidInput;
}

struct ImportArgs {
  std::string events;
  std::string map;
  std::string out;
};

int import_cmd(const ImportArgs& a, std::ostream& out, std::ostream& err) {
  const std::string mapping_doc = read_file(a.map, err);
  const CategoryMapping mapping = parsing(a.map, err, [&] { return read_mapping(mapping_doc); });
  const std::string events_doc = read_file(a.events, err);
  ImportResult result;
  try {
    result = parsing(a.events, err, [&] { return import_mapped(events_doc, mapping); });
  } catch (const ImportError& e) {
    err << "hetpop import: " << e.what() << "\n";
    return kInvalidInput;
  }
  for (const std::string& w : result.warnings) err << "hetpop import: warning: " << w << "\n";
  write_output(a.out, write_trace(result.trace), out, err);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Host and device efficiency metrics for heterogeneous MPI traces", "hetpop"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute the efficiency metric trees of a trace");
  analyze_cmd->add_option("trace", analyze_args.trace, "Native trace file")->required();
  analyze_cmd->add_option("--format", analyze_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  analyze_cmd->add_option("--precision", analyze_args.precision, "Decimal places in text output")
      ->check(CLI::Range(0, 6));
  analyze_cmd->add_flag("--show-raw", analyze_args.show_raw, "Include per-resource durations");
  analyze_cmd->add_flag("--ascii", analyze_args.ascii, "ASCII tree glyphs");
  analyze_cmd->add_option("--out", analyze_args.out, "Output path, - for stdout");

  GenerateArgs generate_args;
  auto* generate_cmd = app.add_subcommand("generate", "Build a synthetic scenario trace");
  generate_cmd->add_option("--preset", generate_args.preset, "Named scenario (see `presets`)");
  generate_cmd->add_option("--spec", generate_args.spec, "Scenario document");
  generate_cmd->add_option("--scale", generate_args.scale, "Duration multiplier")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_option("--out", generate_args.out, "Output path, - for stdout")->required();

  std::string validate_path;
  auto* validate_sub = app.add_subcommand("validate", "Check a trace's structural invariants");
  validate_sub->add_option("trace", validate_path, "Native trace file")->required();

  ImportArgs import_args;
  auto* import_sub = app.add_subcommand("import", "Convert a trace-event timeline via a mapping");
  import_sub->add_option("events", import_args.events, "Trace-event JSON file")->required();
  import_sub->add_option("--map", import_args.map, "Mapping document")->required();
  import_sub->add_option("--out", import_args.out, "Output path, - for stdout")->required();

  auto* presets_sub = app.add_subcommand("presets", "List the generator presets");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? kSuccess : kUsageError;
  }

  try {
    if (*analyze_cmd) return analyze(analyze_args, out, err);
    if (*generate_cmd) return generate(generate_args, out, err);
    if (*validate_sub) return validate_cmd(validate_path, out, err);
    if (*import_sub) return import_cmd(import_args, out, err);
    if (*presets_sub) {
      for (const PresetInfo& p : presets()) out << p.name << "\t" << p.summary << "\n";
      return kSuccess;
    }
  } catch (const Exit& e) {
    return e.code;
  } catch (const Error& e) {
    err << "hetpop: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kUsageError;
}

}  // namespace hetpop::cli
