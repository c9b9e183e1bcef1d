// dovetail/timeline.cc

// Copyright 2026  The dovetail authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dovetail/timeline.h"

#include <algorithm>

#include "dovetail/common.h"

namespace dovetail {

std::vector<int64_t> Boundaries(const std::vector<Hypothesis>& hyps) {
  for (size_t i = 1; i < hyps.size(); ++i) {
    if (hyps[i].recording_id != hyps[0].recording_id) {
      throw DataError("mixed recording ids: '" + hyps[0].recording_id +
                      "' vs '" + hyps[i].recording_id + "'");
    }
  }
  std::vector<int64_t> b;
  for (const Hypothesis& hyp : hyps) {
    for (const Turn& t : hyp.turns) {
      b.push_back(t.onset_ms);
      b.push_back(t.offset_ms());
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

std::vector<Region> DecomposeRegions(const std::vector<Hypothesis>& hyps) {
  std::vector<int64_t> bounds = Boundaries(hyps);
  std::vector<Region> regions;
  if (bounds.size() < 2) return regions;

  // Per hypothesis cursor into its sorted turns; each elementary interval is
  // queried once, left to right.
  std::vector<size_t> cursor(hyps.size(), 0);
  for (size_t bi = 0; bi + 1 < bounds.size(); ++bi) {
    Region region;
    region.onset_ms = bounds[bi];
    region.offset_ms = bounds[bi + 1];
    if (region.onset_ms >= region.offset_ms) continue;
    for (size_t h = 0; h < hyps.size(); ++h) {
      const std::vector<Turn>& turns = hyps[h].turns;
      while (cursor[h] < turns.size() &&
             turns[cursor[h]].offset_ms() <= region.onset_ms) {
        ++cursor[h];
      }
      if (cursor[h] < turns.size() &&
          turns[cursor[h]].onset_ms <= region.onset_ms &&
          region.offset_ms <= turns[cursor[h]].offset_ms()) {
        region.labels.emplace_back(static_cast<int>(h), turns[cursor[h]].speaker);
      }
    }
    if (!region.labels.empty()) regions.push_back(std::move(region));
  }
  return regions;
}

int64_t OverlapDuration(const Hypothesis& a, const std::string& label_a,
                        const Hypothesis& b, const std::string& label_b) {
  if (!a.HasLabel(label_a)) {
    throw DataError("unknown label '" + label_a + "' in recording '" +
                    a.recording_id + "'");
  }
  if (!b.HasLabel(label_b)) {
    throw DataError("unknown label '" + label_b + "' in recording '" +
                    b.recording_id + "'");
  }
  // Both turn lists are sorted and internally non-overlapping.
  int64_t total = 0;
  size_t i = 0, j = 0;
  while (i < a.turns.size() && j < b.turns.size()) {
    const Turn& ta = a.turns[i];
    const Turn& tb = b.turns[j];
    int64_t lo = std::max(ta.onset_ms, tb.onset_ms);
    int64_t hi = std::min(ta.offset_ms(), tb.offset_ms());
    if (lo < hi && ta.speaker == label_a && tb.speaker == label_b) {
      total += hi - lo;
    }
    if (ta.offset_ms() <= tb.offset_ms()) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

}  // namespace dovetail
