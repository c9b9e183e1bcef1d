// dovetail/vote.cc

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

#include "dovetail/vote.h"

#include <numeric>

#include "dovetail/assign.h"
#include "dovetail/common.h"
#include "dovetail/rng.h"
#include "dovetail/timeline.h"

namespace dovetail {

namespace {

void CheckPolicy(const VotePolicy& policy, size_t ensemble_size) {
  if (!(policy.speech_threshold_fraction > 0.0) ||
      policy.speech_threshold_fraction > 1.0) {
    throw DataError("speech threshold fraction must be in (0, 1]");
  }
  if (!policy.weights.empty() && policy.weights.size() != ensemble_size) {
    throw DataError("got " + std::to_string(policy.weights.size()) +
                    " weights for " + std::to_string(ensemble_size) +
                    " hypotheses");
  }
  for (double w : policy.weights) {
    if (!(w > 0.0)) throw DataError("hypothesis weights must be positive");
  }
}

}  // namespace

std::optional<std::string> VoteRegion(const VoteTally& tally,
                                      const VotePolicy& policy) {
  if (!(policy.speech_threshold_fraction > 0.0) ||
      policy.speech_threshold_fraction > 1.0) {
    throw DataError("speech threshold fraction must be in (0, 1]");
  }
  double speech = 0.0;
  for (const LabelVote& v : tally.votes) speech += v.weight;
  // Strictly below the threshold means nonspeech; exactly at it is speech.
  if (speech < policy.speech_threshold_fraction * tally.total_weight) {
    return std::nullopt;
  }
  const LabelVote* best = nullptr;
  for (const LabelVote& v : tally.votes) {
    if (!best || v.weight > best->weight ||
        (v.weight == best->weight && v.first_pos < best->first_pos)) {
      best = &v;
    }
  }
  if (!best) return std::nullopt;
  return best->label;
}

Hypothesis DoverCombine(const std::vector<Hypothesis>& hyps,
                        const VotePolicy& policy) {
  if (hyps.empty()) throw DataError("cannot combine an empty ensemble");
  CheckPolicy(policy, hyps.size());

  std::vector<int> order(hyps.size());
  std::iota(order.begin(), order.end(), 0);
  if (policy.order == InputOrder::kShuffle) {
    Rng rng(policy.shuffle_seed);
    rng.Shuffle(order);
  }

  std::vector<Hypothesis> ordered;
  std::vector<double> weights;
  ordered.reserve(hyps.size());
  for (int idx : order) {
    ordered.push_back(hyps[idx]);
    weights.push_back(policy.weights.empty() ? 1.0 : policy.weights[idx]);
  }
  double total_weight = 0.0;
  for (double w : weights) total_weight += w;

  std::vector<Hypothesis> mapped = MapIncremental(ordered);
  std::vector<Region> regions = DecomposeRegions(mapped);

  std::vector<Turn> turns;
  for (const Region& region : regions) {
    VoteTally tally;
    tally.total_weight = total_weight;
    // region.labels is ordered by hypothesis position, so the first
    // occurrence of a label is also its earliest voter.
    for (const auto& [pos, label] : region.labels) {
      LabelVote* found = nullptr;
      for (LabelVote& v : tally.votes) {
        if (v.label == label) {
          found = &v;
          break;
        }
      }
      if (found) {
        found->weight += weights[pos];
      } else {
        tally.votes.push_back(LabelVote{label, weights[pos], pos});
      }
    }
    std::optional<std::string> winner = VoteRegion(tally, policy);
    if (!winner) continue;
    Turn t;
    t.onset_ms = region.onset_ms;
    t.duration_ms = region.duration_ms();
    t.speaker = *winner;
    turns.push_back(std::move(t));
  }
  // MakeHypothesis re-normalizes, which coalesces adjacent regions that
  // elected the same label.
  return MakeHypothesis(hyps[0].recording_id, turns);
}

}  // namespace dovetail
