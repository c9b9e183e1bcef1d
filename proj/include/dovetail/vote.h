// dovetail/vote.h

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

#ifndef DOVETAIL_VOTE_H_
#define DOVETAIL_VOTE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dovetail/turns.h"

namespace dovetail {

enum class InputOrder {
  kGiven,    // process hypotheses as passed
  kShuffle,  // seeded random processing order
};

struct VotePolicy {
  // Per-hypothesis weights in input order; empty means all 1.0.
  std::vector<double> weights;
  // A region is speech when the voted weight reaches this fraction of the
  // total ensemble weight. Must be in (0, 1].
  double speech_threshold_fraction = 0.5;
  InputOrder order = InputOrder::kGiven;
  uint64_t shuffle_seed = 1;
};

// One candidate label in a region. `first_pos` is the smallest processing
// position among the hypotheses that voted for it.
struct LabelVote {
  std::string label;
  double weight = 0.0;
  int first_pos = 0;
};

// Votes of one region plus the weight of the whole ensemble, including the
// hypotheses that stayed silent there.
struct VoteTally {
  std::vector<LabelVote> votes;
  double total_weight = 0.0;
};

// Winning label, or nullopt when the region falls below the speech
// threshold. Weight ties go to the label whose hypothesis comes first in
// processing order.
std::optional<std::string> VoteRegion(const VoteTally& tally,
                                      const VotePolicy& policy);

// Full combination: order the ensemble, agree on labels incrementally,
// decompose the shared timeline, vote each region, and coalesce adjacent
// regions that elected the same label. Throws DataError for an empty
// ensemble, mixed recording ids, a weight count mismatch, or a threshold
// outside (0, 1].
Hypothesis DoverCombine(const std::vector<Hypothesis>& hyps,
                        const VotePolicy& policy);

}  // namespace dovetail

#endif  // DOVETAIL_VOTE_H_
