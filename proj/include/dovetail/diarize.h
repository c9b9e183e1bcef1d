// dovetail/diarize.h

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

#ifndef DOVETAIL_DIARIZE_H_
#define DOVETAIL_DIARIZE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dovetail/features.h"
#include "dovetail/gmm.h"
#include "dovetail/rng.h"
#include "dovetail/turns.h"

namespace dovetail {

struct Hyperparams {
  double stream_weight = 0.5;      // w, share of stream 2 in the combined score
  int init_clusters = 16;          // K
  int init_gaussians = 5;          // g, stream-1 components per initial cluster
  double second_best_prob = 0.3;   // p
  double second_best_window = 1.0; // L, relative gap that keeps runner-ups eligible
  int64_t min_duration_ms = 2500;
  int em_iters = 5;
  uint64_t seed = 1;
  // Self-transition probability of the terminal state of each cluster chain
  // during resegmentation. Exit probability is split evenly over the other
  // clusters.
  double self_loop = 0.9;
};

// One cluster of the agglomeration: its frames, one GMM per stream, the
// component budgets it has accumulated through merges, and the combined log
// likelihood of its own frames under its own models.
struct ClusterModel {
  int id = 0;
  std::vector<int> frames;  // sorted frame indices
  GmmModel stream1;
  GmmModel stream2;
  int g1 = 0;
  int g2 = 0;
  double own_loglik = 0.0;
};

// (1 - w) * ll(stream1) + w / channel_count * ll(stream2) over the given
// frames, under the cluster's models.
double CombinedLoglik(const ClusterModel& cluster,
                      const FeatureSequence& features,
                      const std::vector<int>& frames,
                      const Hyperparams& hp);

// Merge gain of one cluster pair: log likelihood of the pooled, EM-refined
// union model on the union of frames, minus the clusters' own scores.
// Symmetric by construction; arguments are processed in id order.
double MergeDelta(const ClusterModel& x, const ClusterModel& y,
                  const FeatureSequence& features, const Hyperparams& hp);

// Candidate scores of one agglomeration round. a and b are positions in the
// cluster list with a < b; positions follow ascending cluster ids.
struct PairDelta {
  int a = 0;
  int b = 0;
  double delta = 0.0;
};

struct MergeChoice {
  bool stop = true;
  int a = 0;
  int b = 0;
};

// Picks the merge to perform. Candidates sort by (delta desc, a, b); a
// non-positive best delta stops the agglomeration. With p > 0, when the
// runner-up also has positive delta and sits within the window
// (d1 - d2) / |d1| <= L, one uniform draw replaces the best pair with the
// runner-up with probability p. p = 0 consumes no randomness.
MergeChoice SelectMerge(std::vector<PairDelta> deltas, const Hyperparams& hp,
                        Rng& rng);

// Best-first selection with the randomization branch compiled out. Consumes
// no randomness and never looks at p or L.
MergeChoice SelectMergeBestFirst(std::vector<PairDelta> deltas);

// Uniform contiguous blocks, remainder to the last. Stream 1 gets hp.g
// Gaussians per cluster, stream 2 starts with one.
std::vector<ClusterModel> InitClusters(const FeatureSequence& features,
                                       const Hyperparams& hp);

// Viterbi over per-frame per-cluster emissions (row-major T x K) with a
// min-duration chain per cluster. Returns the cluster position per frame.
std::vector<int> ViterbiResegment(const std::vector<double>& emissions, int T,
                                  int K, int min_frames, double self_loop);

struct DiarizeResult {
  Hypothesis hypothesis;
  int cluster_count = 0;
  // Final cluster ordinal per frame; ordinals follow first-frame order and
  // match the spk<ordinal> labels of the hypothesis.
  std::vector<int> frame_labels;
};

// Full agglomeration: init, merge until the best delta is non-positive,
// resegment and retrain all clusters after every merge. The run's RNG is
// seeded from hp.seed and consumed only by SelectMerge.
DiarizeResult Diarize(const FeatureSequence& features, const Hyperparams& hp);

// Same loop instantiated with SelectMergeBestFirst, so the randomized branch
// does not exist in the compiled code path. Used to pin down that p = 0 and
// best-first are bit-identical.
DiarizeResult DiarizeBestFirst(const FeatureSequence& features,
                               const Hyperparams& hp);

}  // namespace dovetail

#endif  // DOVETAIL_DIARIZE_H_
