// dovetail/synth.h

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

#ifndef DOVETAIL_SYNTH_H_
#define DOVETAIL_SYNTH_H_

#include <cstdint>
#include <string>

#include "dovetail/features.h"
#include "dovetail/turns.h"

namespace dovetail {

// Synthetic meeting generator. Speakers are well separated diagonal
// Gaussians; within each speaker, frames scatter over a small fixed set of
// modes so that one Gaussian per speaker underfits and merged clusters of
// the same speaker genuinely explain the data better. Speakers take turns
// round-robin with the order reshuffled every round, which keeps speaking
// time balanced. Frames near turn edges get inflated variance, mimicking
// transition noise.
struct SynthConfig {
  int speakers = 3;
  double duration_s = 180.0;
  int64_t frame_period_ms = 10;
  int stream1_dim = 4;
  int stream2_dim = 2;
  int channel_count = 1;
  double separation = 6.0;       // distance between speaker centroids
  int modes_per_speaker = 3;
  double mode_scale = 2.0;       // stddev of mode offsets around the centroid
  double var_lo = 0.5;           // per-dimension variance range of each mode
  double var_hi = 1.5;
  double turn_min_s = 3.0;
  double turn_max_s = 30.0;
  int edge_frames = 20;          // frames at each turn edge with boosted variance
  double edge_boost = 4.0;
  uint64_t seed = 1;
  std::string recording_id = "synth";
};

struct SynthOutput {
  FeatureSequence features;
  Hypothesis reference;
};

// Deterministic for a fixed config. Draw order: mode offsets (speaker, mode,
// dimension), mode variances (same order), the turn schedule (per round one
// shuffle, then one length per turn), then per frame one mode index followed
// by one normal per dimension.
SynthOutput Synthesize(const SynthConfig& config);

// key=value lines, '#' starts a comment. Unknown keys raise DataError.
SynthConfig LoadSynthConfig(const std::string& path);
SynthConfig ParseSynthConfig(const std::string& text, const std::string& name);

}  // namespace dovetail

#endif  // DOVETAIL_SYNTH_H_
