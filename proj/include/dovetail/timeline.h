// dovetail/timeline.h

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

#ifndef DOVETAIL_TIMELINE_H_
#define DOVETAIL_TIMELINE_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dovetail/turns.h"

namespace dovetail {

// Maximal interval on which no hypothesis changes its label. `labels` holds
// (hypothesis position, label) pairs, at most one per hypothesis, ordered by
// position. Regions where nobody speaks are never materialized.
struct Region {
  int64_t onset_ms = 0;
  int64_t offset_ms = 0;
  std::vector<std::pair<int, std::string>> labels;

  int64_t duration_ms() const { return offset_ms - onset_ms; }
};

// Sorted deduplicated union of all turn onsets and offsets. Throws DataError
// when hypotheses carry different recording ids.
std::vector<int64_t> Boundaries(const std::vector<Hypothesis>& hyps);

// Cuts the shared timeline at every boundary and keeps the regions where at
// least one hypothesis has a label. Zero-length regions are dropped.
std::vector<Region> DecomposeRegions(const std::vector<Hypothesis>& hyps);

// Total time where `a` says `label_a` and `b` says `label_b`. Throws
// DataError when either label is unknown to its hypothesis.
int64_t OverlapDuration(const Hypothesis& a, const std::string& label_a,
                        const Hypothesis& b, const std::string& label_b);

}  // namespace dovetail

#endif  // DOVETAIL_TIMELINE_H_
