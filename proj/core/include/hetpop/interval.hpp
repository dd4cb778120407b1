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

#include <cstdint>
#include <span>
#include <vector>

namespace hetpop {

// Nanoseconds since the trace epoch. Every resource in a trace shares the
// same epoch.
using Nanos = std::uint64_t;

// Half-open time span [start, end).
struct Interval {
  Nanos start = 0;
  Nanos end = 0;

  constexpr Nanos length() const { return end > start ? end - start : 0; }
  constexpr bool empty() const { return end <= start; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
  friend constexpr auto operator<=>(const Interval&, const Interval&) = default;
};

// A normalized interval set: sorted, pairwise disjoint, non-adjacent, with no
// zero-length members. Only the algebra below can produce one, so every
// FlatSet in the program satisfies those invariants.
class FlatSet {
 public:
  FlatSet() = default;

  std::span<const Interval> intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  friend bool operator==(const FlatSet&, const FlatSet&) = default;

 private:
  friend class FlatSetBuilder;
  explicit FlatSet(std::vector<Interval> v) : intervals_(std::move(v)) {}

  std::vector<Interval> intervals_;
};

// Merges overlapping and touching intervals into their union. Zero-length
// inputs vanish. Throws MalformedInterval (carrying the index) if any input
// has start > end.
FlatSet flatten(std::span<const Interval> raw);

// Points of `a` that are not in `b`.
FlatSet subtract(const FlatSet& a, const FlatSet& b);

// Points of `a` or `b`.
FlatSet unite(const FlatSet& a, const FlatSet& b);

// Points of `a` that are also in `b`.
FlatSet intersect(const FlatSet& a, const FlatSet& b);

// Points inside `bounds` not covered by `a`. Parts of `a` outside `bounds`
// are ignored. Throws MalformedInterval if bounds.start > bounds.end.
FlatSet complement(const FlatSet& a, Interval bounds);

// Sum of member lengths. Throws ArithmeticOverflow instead of wrapping.
Nanos total_duration(const FlatSet& a);

// Overflow-checked helpers shared by the accounting code.
Nanos checked_add(Nanos a, Nanos b);
Nanos checked_mul(Nanos a, Nanos b);

}  // namespace hetpop
