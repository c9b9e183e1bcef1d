// dovetail/turns.cc

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

#include "dovetail/turns.h"

#include <algorithm>

#include "dovetail/common.h"

namespace dovetail {

std::vector<std::string> Hypothesis::Labels() const {
  std::vector<std::string> out;
  for (const Turn& t : turns) out.push_back(t.speaker);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Hypothesis::HasLabel(const std::string& label) const {
  for (const Turn& t : turns) {
    if (t.speaker == label) return true;
  }
  return false;
}

int64_t Hypothesis::TotalSpeechMs() const {
  // Normalized turns never overlap, so the union is the plain sum.
  int64_t total = 0;
  for (const Turn& t : turns) total += t.duration_ms;
  return total;
}

int64_t Hypothesis::EndMs() const {
  int64_t end = 0;
  for (const Turn& t : turns) end = std::max(end, t.offset_ms());
  return end;
}

void NormalizeHypothesis(Hypothesis& hyp) {
  std::vector<Turn>& turns = hyp.turns;
  turns.erase(std::remove_if(turns.begin(), turns.end(),
                             [](const Turn& t) { return t.duration_ms <= 0; }),
              turns.end());
  std::sort(turns.begin(), turns.end(), [](const Turn& a, const Turn& b) {
    if (a.onset_ms != b.onset_ms) return a.onset_ms < b.onset_ms;
    if (a.offset_ms() != b.offset_ms()) return a.offset_ms() < b.offset_ms();
    return a.speaker < b.speaker;
  });
  std::vector<Turn> merged;
  for (const Turn& t : turns) {
    if (!merged.empty()) {
      Turn& prev = merged.back();
      if (t.onset_ms < prev.offset_ms() && t.speaker != prev.speaker) {
        throw DataError("overlap between speakers '" + prev.speaker + "' and '" +
                        t.speaker + "' in recording '" + hyp.recording_id +
                        "' at " + SecondsFixed3(t.onset_ms) + "s");
      }
      if (t.onset_ms <= prev.offset_ms() && t.speaker == prev.speaker) {
        prev.duration_ms = std::max(prev.offset_ms(), t.offset_ms()) - prev.onset_ms;
        continue;
      }
    }
    merged.push_back(t);
    merged.back().recording_id = hyp.recording_id;
  }
  turns = std::move(merged);
}

Hypothesis MakeHypothesis(const std::string& recording_id,
                          const std::vector<Turn>& turns) {
  Hypothesis hyp;
  hyp.recording_id = recording_id;
  hyp.turns = turns;
  for (Turn& t : hyp.turns) t.recording_id = recording_id;
  NormalizeHypothesis(hyp);
  return hyp;
}

}  // namespace dovetail
