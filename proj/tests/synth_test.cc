// tests/synth_test.cc

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

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include "doctest.h"
#include "dovetail/common.h"
#include "dovetail/rttm.h"

namespace dovetail {
namespace {

SynthConfig QuickConfig() {
  SynthConfig c;
  c.speakers = 3;
  c.duration_s = 60.0;
  c.stream1_dim = 3;
  c.stream2_dim = 2;
  c.turn_min_s = 3.0;
  c.turn_max_s = 10.0;
  c.seed = 11;
  c.recording_id = "m";
  return c;
}

TEST_CASE("the same config reproduces the meeting bit for bit") {
  SynthConfig c = QuickConfig();
  SynthOutput a = Synthesize(c);
  SynthOutput b = Synthesize(c);
  REQUIRE(a.features.data.size() == b.features.data.size());
  CHECK(std::memcmp(a.features.data.data(), b.features.data.data(),
                    a.features.data.size() * sizeof(double)) == 0);
  CHECK(EmitRttm(a.reference) == EmitRttm(b.reference));

  c.seed = 12;
  SynthOutput other = Synthesize(c);
  CHECK(std::memcmp(a.features.data.data(), other.features.data.data(),
                    a.features.data.size() * sizeof(double)) != 0);
}

TEST_CASE("output dimensions follow the config") {
  SynthConfig c = QuickConfig();
  c.channel_count = 8;
  SynthOutput out = Synthesize(c);
  const FeatureSequence& f = out.features;
  CHECK(f.recording_id == "m");
  CHECK(f.frame_count == 6000);
  CHECK(f.frame_period_ms == 10);
  CHECK(f.channel_count == 8);
  REQUIRE(f.streams.size() == 2);
  CHECK(f.streams[0].name == "stream1");
  CHECK(f.streams[0].dim == 3);
  CHECK(f.streams[1].name == "stream2");
  CHECK(f.streams[1].dim == 2);
  CHECK(f.data.size() == 6000u * 5u);
  CHECK(out.reference.recording_id == "m");
}

TEST_CASE("the reference tiles the whole recording") {
  SynthConfig c = QuickConfig();
  for (uint64_t seed : {1, 2, 3}) {
    c.seed = seed;
    SynthOutput out = Synthesize(c);
    const Hypothesis& ref = out.reference;
    const int64_t total_ms = 60000;
    const int64_t min_ms = 3000;
    // Round robin with at most two schedule turns fused at a round seam,
    // plus one absorbed tail.
    const int64_t max_ms = 2 * 10000 + 3000;

    REQUIRE_FALSE(ref.turns.empty());
    CHECK(ref.turns.front().onset_ms == 0);
    int64_t speech = 0;
    std::map<std::string, int64_t> per_speaker;
    for (size_t i = 0; i < ref.turns.size(); ++i) {
      const Turn& t = ref.turns[i];
      if (i > 0) {
        CHECK(t.onset_ms ==
              ref.turns[i - 1].onset_ms + ref.turns[i - 1].duration_ms);
        CHECK(t.speaker != ref.turns[i - 1].speaker);
      }
      if (i + 1 < ref.turns.size()) CHECK(t.duration_ms >= min_ms);
      CHECK(t.duration_ms <= max_ms);
      speech += t.duration_ms;
      per_speaker[t.speaker] += t.duration_ms;
    }
    CHECK(speech == total_ms);
    CHECK(ref.EndMs() == total_ms);
    REQUIRE(per_speaker.size() == 3);
    for (const auto& [speaker, ms] : per_speaker) {
      CAPTURE(speaker);
      CHECK(ms > total_ms / 18);  // round robin keeps shares non-degenerate
    }
  }
}

TEST_CASE("a single centered mode reproduces its moments") {
  SynthConfig c;
  c.speakers = 1;
  c.duration_s = 30.0;
  c.stream1_dim = 2;
  c.stream2_dim = 1;
  c.modes_per_speaker = 1;  // the offset of a lone mode is centered away
  c.var_lo = 0.8;
  c.var_hi = 0.8;
  c.edge_frames = 0;  // no variance boost anywhere
  c.separation = 6.0;
  c.turn_min_s = 5.0;
  c.turn_max_s = 10.0;
  c.seed = 21;
  SynthOutput out = Synthesize(c);
  const FeatureSequence& f = out.features;
  REQUIRE(f.frame_count == 3000);
  REQUIRE(out.reference.Labels() == std::vector<std::string>{"spk0"});

  // Speaker 0 sits at separation in dimension 0 of each stream.
  const double want_mean[3] = {6.0, 0.0, 6.0};
  for (int dim = 0; dim < 3; ++dim) {
    double mean = 0.0, sq = 0.0;
    for (int t = 0; t < f.frame_count; ++t) {
      double v = f.data[static_cast<size_t>(t) * 3 + dim];
      mean += v;
      sq += v * v;
    }
    mean /= f.frame_count;
    double var = sq / f.frame_count - mean * mean;
    CHECK(std::abs(mean - want_mean[dim]) < 0.1);
    CHECK(std::abs(var - 0.8) < 0.1);
  }
}

TEST_CASE("edge frames widen the scatter near turn boundaries") {
  SynthConfig c = QuickConfig();
  c.speakers = 1;
  c.duration_s = 120.0;
  c.modes_per_speaker = 1;
  c.var_lo = 1.0;
  c.var_hi = 1.0;
  c.edge_frames = 25;
  c.edge_boost = 16.0;
  SynthOutput out = Synthesize(c);

  // With one speaker every turn fuses into a single reference turn, but the
  // schedule still marks edges internally; measure spread around the global
  // mean in the first dimension.
  const FeatureSequence& f = out.features;
  int n = f.frame_count;
  double mean = 0.0;
  for (int t = 0; t < n; ++t) mean += f.data[static_cast<size_t>(t) * 5];
  mean /= n;
  double var = 0.0;
  for (int t = 0; t < n; ++t) {
    double d = f.data[static_cast<size_t>(t) * 5] - mean;
    var += d * d;
  }
  var /= n;
  CHECK(var > 1.2);  // well above the base variance of 1.0
}

TEST_CASE("config parsing") {
  const char* text =
      "# comment only\n"
      "speakers = 4\n"
      "duration_s = 42.5   # trailing comment\n"
      "frame_period_ms = 20\n"
      "stream1_dim = 6\n"
      "stream2_dim = 3\n"
      "channel_count = 5\n"
      "separation = 7.25\n"
      "modes_per_speaker = 2\n"
      "mode_scale = 1.5\n"
      "var_lo = 0.25\n"
      "var_hi = 2.0\n"
      "turn_min_s = 4\n"
      "turn_max_s = 12\n"
      "edge_frames = 7\n"
      "edge_boost = 2.5\n"
      "seed = 99\n"
      "recording_id = meeting7\n";
  SynthConfig c = ParseSynthConfig(text, "cfg");
  CHECK(c.speakers == 4);
  CHECK(c.duration_s == 42.5);
  CHECK(c.frame_period_ms == 20);
  CHECK(c.stream1_dim == 6);
  CHECK(c.stream2_dim == 3);
  CHECK(c.channel_count == 5);
  CHECK(c.separation == 7.25);
  CHECK(c.modes_per_speaker == 2);
  CHECK(c.mode_scale == 1.5);
  CHECK(c.var_lo == 0.25);
  CHECK(c.var_hi == 2.0);
  CHECK(c.turn_min_s == 4.0);
  CHECK(c.turn_max_s == 12.0);
  CHECK(c.edge_frames == 7);
  CHECK(c.edge_boost == 2.5);
  CHECK(c.seed == 99);
  CHECK(c.recording_id == "meeting7");

  CHECK_THROWS_WITH_AS(ParseSynthConfig("speakers = 2\nwidth = 3\n", "cfg"),
                       doctest::Contains("cfg line 2: unknown key 'width'"),
                       DataError);
  CHECK_THROWS_WITH_AS(ParseSynthConfig("speakers\n", "cfg"),
                       doctest::Contains("expected key=value"), DataError);
  CHECK_THROWS_AS(ParseSynthConfig("speakers = 0\n", "cfg"), DataError);
  CHECK_THROWS_AS(ParseSynthConfig("var_lo = 2\nvar_hi = 1\n", "cfg"),
                  DataError);
  CHECK_THROWS_AS(ParseSynthConfig("turn_min_s = 0\n", "cfg"), DataError);
  CHECK_THROWS_AS(ParseSynthConfig("duration_s = -1\n", "cfg"), DataError);
  CHECK_THROWS_AS(ParseSynthConfig("speakers = x\n", "cfg"), DataError);
}

TEST_CASE("config loading from a file") {
  const char* path = "/tmp/dovetail_synth_cfg.txt";
  {
    std::ofstream out(path);
    out << "speakers = 2\nduration_s = 5\nseed = 3\n";
  }
  SynthConfig c = LoadSynthConfig(path);
  CHECK(c.speakers == 2);
  CHECK(c.duration_s == 5.0);
  CHECK(c.seed == 3);
  CHECK_THROWS_AS(LoadSynthConfig("/tmp/dovetail_no_such_cfg.txt"), DataError);
}

TEST_CASE("degenerate durations are rejected") {
  SynthConfig c = QuickConfig();
  c.duration_s = 0.005;  // rounds below one frame
  CHECK_THROWS_WITH_AS(Synthesize(c),
                       doctest::Contains("duration shorter than one frame"),
                       DataError);
}

}  // namespace
}  // namespace dovetail
