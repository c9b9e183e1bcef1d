// tests/oracles.h

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

// Brute-force reference implementations the tests and the acceptance gate
// compare against. Everything here trades speed for obviousness: exhaustive
// search over assignments, per-millisecond rasterization for time math.

#ifndef DOVETAIL_TESTS_ORACLES_H_
#define DOVETAIL_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dovetail/assign.h"
#include "dovetail/rng.h"
#include "dovetail/turns.h"

namespace dovetail::oracle {

// Best assignment total by exhaustive search: rows in order, each one paired
// with an unused column or left out. Negative cells are never profitable
// because leaving the row out contributes zero, matching the zero-padded
// Hungarian formulation.
inline int64_t BestFrom(const OverlapMatrix& m, int r, std::vector<char>& used) {
  const int rows = static_cast<int>(m.row_labels.size());
  const int cols = static_cast<int>(m.col_labels.size());
  if (r == rows) return 0;
  int64_t best = BestFrom(m, r + 1, used);
  for (int c = 0; c < cols; ++c) {
    if (used[c]) continue;
    used[c] = 1;
    best = std::max(best, m.At(r, c) + BestFrom(m, r + 1, used));
    used[c] = 0;
  }
  return best;
}

inline int64_t BestAssignmentTotal(const OverlapMatrix& m) {
  std::vector<char> used(m.col_labels.size(), 0);
  return BestFrom(m, 0, used);
}

// First pair list in (row, column) lexicographic order that reaches the
// optimum using only positive cells. This is the same tie-break
// OptimalAssignment documents, derived independently.
inline std::vector<std::pair<int, int>> LexOptimalPairs(const OverlapMatrix& m) {
  const int rows = static_cast<int>(m.row_labels.size());
  const int cols = static_cast<int>(m.col_labels.size());
  const int64_t best = BestAssignmentTotal(m);
  std::vector<char> used(m.col_labels.size(), 0);
  std::vector<std::pair<int, int>> pairs;
  int64_t fixed = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (used[c] || m.At(r, c) <= 0) continue;
      used[c] = 1;
      if (fixed + m.At(r, c) + BestFrom(m, r + 1, used) == best) {
        fixed += m.At(r, c);
        pairs.emplace_back(r, c);
        break;
      }
      used[c] = 0;
    }
  }
  return pairs;
}

struct RasterReport {
  int64_t ref_speech_ms = 0;
  int64_t missed_ms = 0;
  int64_t false_alarm_ms = 0;
  int64_t speaker_error_ms = 0;
};

// Per-millisecond re-derivation of the DER components. The speaker mapping
// is the lex-min optimum over a raster-counted full-timeline overlap matrix,
// so nothing here shares code with the production scorer beyond the Turn
// containers.
inline RasterReport RasterScore(const Hypothesis& ref, const Hypothesis& hyp,
                                int64_t collar_ms) {
  const int64_t end = std::max(ref.EndMs(), hyp.EndMs());
  const std::vector<std::string> ref_labels = ref.Labels();
  const std::vector<std::string> hyp_labels = hyp.Labels();
  auto index_of = [](const std::vector<std::string>& v, const std::string& s) {
    return static_cast<int>(std::find(v.begin(), v.end(), s) - v.begin());
  };

  std::vector<int> rl(end, -1), hl(end, -1);
  for (const Turn& t : ref.turns) {
    int idx = index_of(ref_labels, t.speaker);
    for (int64_t ms = t.onset_ms; ms < t.offset_ms(); ++ms) rl[ms] = idx;
  }
  for (const Turn& t : hyp.turns) {
    int idx = index_of(hyp_labels, t.speaker);
    for (int64_t ms = t.onset_ms; ms < t.offset_ms(); ++ms) hl[ms] = idx;
  }

  OverlapMatrix m;
  m.row_labels = hyp_labels;
  m.col_labels = ref_labels;
  m.cells.assign(hyp_labels.size() * ref_labels.size(), 0);
  for (int64_t ms = 0; ms < end; ++ms) {
    if (hl[ms] >= 0 && rl[ms] >= 0) ++m.At(hl[ms], rl[ms]);
  }
  std::vector<int> hyp_to_ref(hyp_labels.size(), -1);
  for (const auto& [h, r] : LexOptimalPairs(m)) hyp_to_ref[h] = r;

  std::vector<char> collar(end, 0);
  if (collar_ms > 0) {
    for (const Turn& t : ref.turns) {
      for (int64_t b : {t.onset_ms, t.offset_ms()}) {
        int64_t lo = std::max<int64_t>(0, b - collar_ms);
        int64_t hi = std::min(end, b + collar_ms);
        for (int64_t ms = lo; ms < hi; ++ms) collar[ms] = 1;
      }
    }
  }

  RasterReport out;
  for (int64_t ms = 0; ms < end; ++ms) {
    if (collar[ms]) continue;
    int r = rl[ms];
    // Unmapped hypothesis labels become unique ids below -1 so they can
    // never count as correct.
    int h = -1;
    if (hl[ms] >= 0) {
      h = hyp_to_ref[hl[ms]] >= 0 ? hyp_to_ref[hl[ms]] : -2 - hl[ms];
    }
    if (r >= 0) ++out.ref_speech_ms;
    if (r >= 0 && h == -1) ++out.missed_ms;
    if (r < 0 && h != -1) ++out.false_alarm_ms;
    if (r >= 0 && h != -1 && h != r) ++out.speaker_error_ms;
  }
  return out;
}

// Random non-overlapping hypothesis for fixture building. Gaps of zero are
// possible, so same-label coalescing does get exercised.
inline Hypothesis RandomHypothesis(Rng& rng, const std::string& recording_id,
                                   int max_speakers, int max_turns,
                                   int64_t max_len_ms = 2000,
                                   int64_t max_gap_ms = 500) {
  std::vector<Turn> turns;
  int n = 1 + static_cast<int>(rng.Below(max_turns));
  int64_t t = static_cast<int64_t>(rng.Below(max_gap_ms + 1));
  for (int i = 0; i < n; ++i) {
    Turn turn;
    turn.onset_ms = t;
    turn.duration_ms = 1 + static_cast<int64_t>(rng.Below(max_len_ms));
    turn.speaker = "s" + std::to_string(rng.Below(max_speakers));
    turn.recording_id = recording_id;
    t = turn.offset_ms() + static_cast<int64_t>(rng.Below(max_gap_ms + 1));
    turns.push_back(turn);
  }
  return MakeHypothesis(recording_id, turns);
}

}  // namespace dovetail::oracle

#endif  // DOVETAIL_TESTS_ORACLES_H_
