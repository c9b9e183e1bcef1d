// dovetail/synth.cc

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

#include "dovetail/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dovetail/common.h"
#include "dovetail/rng.h"

namespace dovetail {

namespace {

void Validate(const SynthConfig& c) {
  if (c.speakers < 1) throw DataError("speakers must be positive");
  if (!(c.duration_s > 0.0)) throw DataError("duration must be positive");
  if (c.frame_period_ms < 1) throw DataError("frame period must be positive");
  if (c.stream1_dim < 1 || c.stream2_dim < 1) {
    throw DataError("stream dims must be positive");
  }
  if (c.channel_count < 1) throw DataError("channel count must be positive");
  if (c.modes_per_speaker < 1) throw DataError("modes_per_speaker must be positive");
  if (!(c.var_lo > 0.0) || c.var_hi < c.var_lo) {
    throw DataError("variance range must satisfy 0 < var_lo <= var_hi");
  }
  if (!(c.turn_min_s > 0.0) || c.turn_max_s < c.turn_min_s) {
    throw DataError("turn length range must satisfy 0 < turn_min_s <= turn_max_s");
  }
  if (c.edge_frames < 0) throw DataError("edge_frames must be non-negative");
  if (!(c.edge_boost > 0.0)) throw DataError("edge_boost must be positive");
}

struct ScheduledTurn {
  int begin = 0;  // frames
  int end = 0;
  int speaker = 0;
};

}  // namespace

SynthOutput Synthesize(const SynthConfig& c) {
  Validate(c);
  const int T = static_cast<int>(
      static_cast<int64_t>(std::llround(c.duration_s * 1000.0)) /
      c.frame_period_ms);
  if (T < 1) throw DataError("duration shorter than one frame");
  const int d1 = c.stream1_dim;
  const int d2 = c.stream2_dim;
  const int d = d1 + d2;
  const int S = c.speakers;
  const int M = c.modes_per_speaker;

  // One separated dimension per speaker, cycling through both streams.
  std::vector<double> mu(static_cast<size_t>(S) * d, 0.0);
  for (int s = 0; s < S; ++s) {
    mu[static_cast<size_t>(s) * d + s % d1] = c.separation * (1 + s / d1);
    mu[static_cast<size_t>(s) * d + d1 + s % d2] = c.separation * (1 + s / d2);
  }

  Rng rng(c.seed);

  // Fixed per-speaker mode set: every turn of a speaker scatters over the
  // same few lumps, so a single Gaussian underfits the speaker while the
  // merged model of two same-speaker clusters genuinely fits better.
  std::vector<double> moff(static_cast<size_t>(S) * M * d);
  for (double& v : moff) v = rng.Normal() * c.mode_scale;
  for (int s = 0; s < S; ++s) {
    for (int dim = 0; dim < d; ++dim) {
      double m = 0.0;
      for (int k = 0; k < M; ++k) {
        m += moff[(static_cast<size_t>(s) * M + k) * d + dim];
      }
      m /= M;
      for (int k = 0; k < M; ++k) {
        moff[(static_cast<size_t>(s) * M + k) * d + dim] -= m;
      }
    }
  }
  std::vector<double> var(static_cast<size_t>(S) * M * d);
  for (double& v : var) v = rng.Uniform(c.var_lo, c.var_hi);

  // Round-robin schedule, order reshuffled each round. A tail shorter than
  // one minimum turn is absorbed into the final turn.
  const int min_turn_frames = static_cast<int>(
      static_cast<int64_t>(std::llround(c.turn_min_s * 1000.0)) /
      c.frame_period_ms);
  std::vector<ScheduledTurn> schedule;
  std::vector<int> order(S);
  std::iota(order.begin(), order.end(), 0);
  int t = 0;
  while (t < T) {
    rng.Shuffle(order);
    for (int s : order) {
      if (t >= T) break;
      int len = std::max<int>(
          1, static_cast<int>(static_cast<int64_t>(std::llround(
                                  rng.Uniform(c.turn_min_s, c.turn_max_s) *
                                  1000.0)) /
                              c.frame_period_ms));
      if (T - (t + len) < min_turn_frames) len = T - t;
      schedule.push_back(ScheduledTurn{t, std::min(t + len, T), s});
      t += len;
    }
  }

  FeatureSequence f;
  f.recording_id = c.recording_id;
  f.frame_period_ms = c.frame_period_ms;
  f.channel_count = c.channel_count;
  f.streams = {FeatureStream{"stream1", d1}, FeatureStream{"stream2", d2}};
  f.frame_count = T;
  f.data.resize(static_cast<size_t>(T) * d);

  for (const ScheduledTurn& turn : schedule) {
    const int s = turn.speaker;
    for (int tt = turn.begin; tt < turn.end; ++tt) {
      const int mode = static_cast<int>(rng.Below(static_cast<uint64_t>(M)));
      const bool edge = (tt - turn.begin < c.edge_frames) ||
                        (turn.end - tt <= c.edge_frames);
      const double boost = edge ? c.edge_boost : 1.0;
      double* row = &f.data[static_cast<size_t>(tt) * d];
      const double* center = &mu[static_cast<size_t>(s) * d];
      const double* offset = &moff[(static_cast<size_t>(s) * M + mode) * d];
      const double* v = &var[(static_cast<size_t>(s) * M + mode) * d];
      for (int dim = 0; dim < d; ++dim) {
        row[dim] = rng.Normal(center[dim] + offset[dim], std::sqrt(v[dim] * boost));
      }
    }
  }

  std::vector<Turn> ref_turns;
  for (const ScheduledTurn& turn : schedule) {
    Turn rt;
    rt.onset_ms = static_cast<int64_t>(turn.begin) * c.frame_period_ms;
    rt.duration_ms = static_cast<int64_t>(turn.end - turn.begin) * c.frame_period_ms;
    rt.speaker = "spk" + std::to_string(turn.speaker);
    ref_turns.push_back(std::move(rt));
  }

  SynthOutput out;
  out.features = std::move(f);
  out.reference = MakeHypothesis(c.recording_id, ref_turns);
  return out;
}

SynthConfig ParseSynthConfig(const std::string& text, const std::string& name) {
  SynthConfig c;
  std::vector<std::string> lines = Split(text, '\n');
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    std::string where = name + " line " + std::to_string(i + 1);
    if (eq == std::string::npos) {
      throw DataError(where + ": expected key=value, got '" + line + "'");
    }
    std::string key = Trim(line.substr(0, eq));
    std::string val = Trim(line.substr(eq + 1));
    if (key == "speakers") {
      c.speakers = static_cast<int>(ParseInt(val, where));
    } else if (key == "duration_s") {
      c.duration_s = ParseDouble(val, where);
    } else if (key == "frame_period_ms") {
      c.frame_period_ms = ParseInt(val, where);
    } else if (key == "stream1_dim") {
      c.stream1_dim = static_cast<int>(ParseInt(val, where));
    } else if (key == "stream2_dim") {
      c.stream2_dim = static_cast<int>(ParseInt(val, where));
    } else if (key == "channel_count") {
      c.channel_count = static_cast<int>(ParseInt(val, where));
    } else if (key == "separation") {
      c.separation = ParseDouble(val, where);
    } else if (key == "modes_per_speaker") {
      c.modes_per_speaker = static_cast<int>(ParseInt(val, where));
    } else if (key == "mode_scale") {
      c.mode_scale = ParseDouble(val, where);
    } else if (key == "var_lo") {
      c.var_lo = ParseDouble(val, where);
    } else if (key == "var_hi") {
      c.var_hi = ParseDouble(val, where);
    } else if (key == "turn_min_s") {
      c.turn_min_s = ParseDouble(val, where);
    } else if (key == "turn_max_s") {
      c.turn_max_s = ParseDouble(val, where);
    } else if (key == "edge_frames") {
      c.edge_frames = static_cast<int>(ParseInt(val, where));
    } else if (key == "edge_boost") {
      c.edge_boost = ParseDouble(val, where);
    } else if (key == "seed") {
      c.seed = static_cast<uint64_t>(ParseInt(val, where));
    } else if (key == "recording_id") {
      c.recording_id = val;
    } else {
      throw DataError(where + ": unknown key '" + key + "'");
    }
  }
  Validate(c);
  return c;
}

SynthConfig LoadSynthConfig(const std::string& path) {
  return ParseSynthConfig(ReadTextFile(path), path);
}

}  // namespace dovetail
