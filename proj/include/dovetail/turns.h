// dovetail/turns.h

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

#ifndef DOVETAIL_TURNS_H_
#define DOVETAIL_TURNS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace dovetail {

// One speaker turn. Times are integer milliseconds.
struct Turn {
  int64_t onset_ms = 0;
  int64_t duration_ms = 0;
  std::string speaker;
  std::string recording_id;
  int source_id = 0;

  int64_t offset_ms() const { return onset_ms + duration_ms; }
};

// All turns of one system (or the reference) for one recording. A normalized
// hypothesis is sorted by onset and contains no overlap at all: touching or
// overlapping turns with the same label are merged, overlap between distinct
// labels is rejected at construction.
struct Hypothesis {
  std::string recording_id;
  std::vector<Turn> turns;

  // Sorted unique speaker labels.
  std::vector<std::string> Labels() const;
  bool HasLabel(const std::string& label) const;
  int64_t TotalSpeechMs() const;
  int64_t EndMs() const;
};

// Sorts, merges same-label touching or overlapping turns, drops zero-length
// turns, and throws DataError when two distinct labels overlap.
void NormalizeHypothesis(Hypothesis& hyp);

Hypothesis MakeHypothesis(const std::string& recording_id,
                          const std::vector<Turn>& turns);

}  // namespace dovetail

#endif  // DOVETAIL_TURNS_H_
