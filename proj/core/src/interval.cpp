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

#include "hetpop/interval.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hetpop/error.hpp"

namespace hetpop {

// Appends intervals in start order, coalescing with the tail when they touch
// or overlap. Inputs must already be sorted by start and non-empty.
class FlatSetBuilder {
 public:
  void push(Interval iv) {
    if (iv.empty()) return;
    if (!out_.empty() && iv.start <= out_.back().end) {
      out_.back().end = std::max(out_.back().end, iv.end);
      return;
    }
    out_.push_back(iv);
  }

  FlatSet finish() && { return FlatSet(std::move(out_)); }

 private:
  std::vector<Interval> out_;
};

FlatSet flatten(std::span<const Interval> raw) {
  std::vector<Interval> sorted;
  sorted.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Interval& iv = raw[i];
    if (iv.start > iv.end) {
      throw MalformedInterval(i, "interval " + std::to_string(i) + " has start " +
                                     std::to_string(iv.start) + " > end " +
                                     std::to_string(iv.end));
    }
    if (!iv.empty()) sorted.push_back(iv);
  }
  std::sort(sorted.begin(), sorted.end());

  FlatSetBuilder b;
  for (const Interval& iv : sorted) b.push(iv);
  return std::move(b).finish();
}

FlatSet subtract(const FlatSet& a, const FlatSet& b) {
  FlatSetBuilder out;
  auto rhs = b.intervals();
  std::size_t j = 0;
  for (Interval cur : a.intervals()) {
    // Skip subtrahends that end before this interval starts.
    while (j < rhs.size() && rhs[j].end <= cur.start) ++j;
    std::size_t k = j;
    while (k < rhs.size() && rhs[k].start < cur.end) {
      if (rhs[k].start > cur.start) out.push({cur.start, rhs[k].start});
      cur.start = std::max(cur.start, rhs[k].end);
      if (cur.start >= cur.end) break;
      ++k;
    }
    out.push(cur);
  }
  return std::move(out).finish();
}

FlatSet unite(const FlatSet& a, const FlatSet& b) {
  auto lhs = a.intervals();
  auto rhs = b.intervals();
  FlatSetBuilder out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < lhs.size() || j < rhs.size()) {
    if (j == rhs.size() || (i < lhs.size() && lhs[i].start <= rhs[j].start)) {
      out.push(lhs[i++]);
    } else {
      out.push(rhs[j++]);
    }
  }
  return std::move(out).finish();
}

FlatSet intersect(const FlatSet& a, const FlatSet& b) {
  auto lhs = a.intervals();
  auto rhs = b.intervals();
  FlatSetBuilder out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < lhs.size() && j < rhs.size()) {
    const Nanos lo = std::max(lhs[i].start, rhs[j].start);
    const Nanos hi = std::min(lhs[i].end, rhs[j].end);
    if (lo < hi) out.push({lo, hi});
    if (lhs[i].end < rhs[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return std::move(out).finish();
}

FlatSet complement(const FlatSet& a, Interval bounds) {
  if (bounds.start > bounds.end) {
    throw MalformedInterval(0, "complement bounds have start " +
                                   std::to_string(bounds.start) + " > end " +
                                   std::to_string(bounds.end));
  }
  FlatSetBuilder out;
  Nanos cursor = bounds.start;
  for (const Interval& iv : a.intervals()) {
    if (iv.end <= cursor) continue;
    if (iv.start >= bounds.end) break;
    if (iv.start > cursor) out.push({cursor, iv.start});
    cursor = iv.end;
    if (cursor >= bounds.end) break;
  }
  if (cursor < bounds.end) out.push({cursor, bounds.end});
  return std::move(out).finish();
}

Nanos total_duration(const FlatSet& a) {
  Nanos sum = 0;
  for (const Interval& iv : a.intervals()) sum = checked_add(sum, iv.length());
  return sum;
}

Nanos checked_add(Nanos a, Nanos b) {
  if (b > std::numeric_limits<Nanos>::max() - a) {
    throw ArithmeticOverflow("duration sum exceeds the 64-bit nanosecond range");
  }
  return a + b;
}

Nanos checked_mul(Nanos a, Nanos b) {
  if (a != 0 && b > std::numeric_limits<Nanos>::max() / a) {
    throw ArithmeticOverflow("product exceeds the 64-bit nanosecond range");
  }
  return a * b;
}

}  // namespace hetpop
