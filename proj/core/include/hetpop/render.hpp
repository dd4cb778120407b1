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

#include "hetpop/metrics.hpp"

namespace hetpop {

struct RenderOptions {
  enum class Format { kText, kJson };

  Format format = Format::kText;
  int precision = 2;  // decimal places in text output, 0..6
  bool show_raw = false;
  bool ascii = false;  // plain ASCII tree glyphs in text output
};

inline constexpr int kReportFormatVersion = 1;

// Host and Device metric trees in the TALP table layout. Undefined metrics
// print as "n/a"; values are rounded half-to-even at `precision`.
std::string render_text(const MetricsReport& report, const RenderOptions& opts = {});

// Machine-readable report (docs/report_format.md). Metrics are written at full
// precision and undefined ones as null.
std::string render_json(const MetricsReport& report, const RenderOptions& opts = {});

// Dispatches on opts.format. Throws Error for a precision outside 0..6.
std::string render(const MetricsReport& report, const RenderOptions& opts);

}  // namespace hetpop
