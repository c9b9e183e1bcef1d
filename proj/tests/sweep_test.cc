// tests/sweep_test.cc

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

#include "dovetail/sweep.h"

#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "dovetail/common.h"
#include "dovetail/rttm.h"
#include "dovetail/synth.h"

namespace dovetail {
namespace {

namespace fs = std::filesystem;

const char* kFullConfig =
    "# hyperparameter sweep\n"
    "axis = init_gaussians\n"
    "mode = axis\n"
    "values = 2, 3, 5\n"
    "collar = 0.25\n"
    "workers = 3\n"
    "run_dir = /tmp/dovetail_sweep_cfgdir\n"
    "dover_order = shuffle\n"
    "dover_seed = 7\n"
    "dover_threshold = 0.4\n"
    "dover_weights = 1, 2, 1\n"
    "base_stream_weight = 0.35\n"
    "base_init_clusters = 12\n"
    "base_init_gaussians = 4\n"
    "base_p = 0.2\n"
    "base_L = 0.8\n"
    "base_min_duration_s = 2\n"
    "base_em_iters = 4\n"
    "base_seed = 21\n"
    "base_self_loop = 0.85\n"
    "recording = /tmp/a.feats|/tmp/a.rttm\n"
    "recording = /tmp/b.feats | /tmp/b.rttm\n";

TEST_CASE("sweep config parsing") {
  SweepConfig c = ParseSweepConfig(kFullConfig, "cfg");
  CHECK(c.axis == SweepAxis::kInitGaussians);
  CHECK_FALSE(c.randomized);
  CHECK(c.values == std::vector<double>{2.0, 3.0, 5.0});
  CHECK(c.collar_ms == 250);
  CHECK(c.workers == 3);
  CHECK(c.run_dir == "/tmp/dovetail_sweep_cfgdir");
  CHECK(c.dover_policy.order == InputOrder::kShuffle);
  CHECK(c.dover_policy.shuffle_seed == 7);
  CHECK(c.dover_policy.speech_threshold_fraction == 0.4);
  CHECK(c.dover_policy.weights == std::vector<double>{1.0, 2.0, 1.0});
  CHECK(c.base.stream_weight == 0.35);
  CHECK(c.base.init_clusters == 12);
  CHECK(c.base.init_gaussians == 4);
  CHECK(c.base.second_best_prob == 0.2);
  CHECK(c.base.second_best_window == 0.8);
  CHECK(c.base.min_duration_ms == 2000);
  CHECK(c.base.em_iters == 4);
  CHECK(c.base.seed == 21);
  CHECK(c.base.self_loop == 0.85);
  REQUIRE(c.recordings.size() == 2);
  CHECK(c.recordings[0].features_path == "/tmp/a.feats");
  CHECK(c.recordings[0].ref_path == "/tmp/a.rttm");
  CHECK(c.recordings[1].features_path == "/tmp/b.feats");
  CHECK(c.recordings[1].ref_path == "/tmp/b.rttm");

  CHECK(ParseSweepConfig("mode = randomized\nvalues = 1\n"
                         "recording = f|r\n",
                         "cfg")
            .randomized);
}

TEST_CASE("sweep config errors") {
  CHECK_THROWS_WITH_AS(ParseSweepConfig("recording = f|r\n", "cfg"),
                       doctest::Contains("no values"), DataError);
  CHECK_THROWS_WITH_AS(ParseSweepConfig("values = 1\n", "cfg"),
                       doctest::Contains("no recordings"), DataError);
  CHECK_THROWS_WITH_AS(
      ParseSweepConfig("axis = turns\n", "cfg"),
      doctest::Contains("cfg line 1: unknown axis 'turns'"), DataError);
  CHECK_THROWS_WITH_AS(ParseSweepConfig("mode = both\n", "cfg"),
                       doctest::Contains("unknown mode"), DataError);
  CHECK_THROWS_WITH_AS(ParseSweepConfig("recording = only_features\n", "cfg"),
                       doctest::Contains("expected recording="), DataError);
  CHECK_THROWS_WITH_AS(ParseSweepConfig("values = 1\nbudget = 2\n", "cfg"),
                       doctest::Contains("line 2: unknown key 'budget'"),
                       DataError);
  CHECK_THROWS_WITH_AS(ParseSweepConfig("just words\n", "cfg"),
                       doctest::Contains("expected key=value"), DataError);
}

TEST_CASE("config digest is stable and sensitive") {
  SweepConfig a = ParseSweepConfig(kFullConfig, "cfg");
  std::string d = ConfigDigest(a);
  CHECK(d.size() == 16);
  CHECK(d.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(ConfigDigest(a) == d);

  SweepConfig b = a;
  b.values.push_back(7.0);
  CHECK(ConfigDigest(b) != d);
  SweepConfig c = a;
  c.axis = SweepAxis::kSeed;
  CHECK(ConfigDigest(c) != d);
  SweepConfig e = a;
  e.recordings.pop_back();
  CHECK(ConfigDigest(e) != d);
  SweepConfig f = a;
  f.base.seed = 22;
  CHECK(ConfigDigest(f) != d);
}

TEST_CASE("run seeds separate rows and recordings") {
  SweepConfig c = ParseSweepConfig(kFullConfig, "cfg");
  CHECK(RunSeed(c, 2.0, "a") == RunSeed(c, 2.0, "a"));
  CHECK(RunSeed(c, 2.0, "a") != RunSeed(c, 2.0, "b"));
  CHECK(RunSeed(c, 2.0, "a") != RunSeed(c, 3.0, "a"));

  // Off the seed axis, the base seed participates.
  SweepConfig other = c;
  other.base.seed = 99;
  CHECK(RunSeed(other, 2.0, "a") != RunSeed(c, 2.0, "a"));

  // On the seed axis, the value replaces the base seed entirely.
  c.axis = SweepAxis::kSeed;
  other.axis = SweepAxis::kSeed;
  CHECK(RunSeed(other, 2.0, "a") == RunSeed(c, 2.0, "a"));
}

TEST_CASE("result tables format rates and failures") {
  ResultTable t;
  t.rows.push_back(ResultRow{"best-first", 7.0, 21.5, false});
  t.rows.push_back(ResultRow{"1", 4.1, 18.2, false});
  t.rows.push_back(ResultRow{"2", 0.0, 0.0, true});
  t.rows.push_back(ResultRow{"DOVER", 2.1, 15.0, false});

  CHECK(TableCsv(t) ==
        "value,spk_err,der\n"
        "best-first,7.000,21.500\n"
        "1,4.100,18.200\n"
        "2,failed,failed\n"
        "DOVER,2.100,15.000\n");
  CHECK(TableText(t) ==
        "value       spk_err      der\n"
        "best-first      7.0     21.5\n"
        "1               4.1     18.2\n"
        "2            failed   failed\n"
        "DOVER           2.1     15.0\n");
}

struct MiniMeeting {
  std::string features_path;
  std::string ref_path;
};

MiniMeeting WriteMiniMeeting() {
  SynthConfig sc;
  sc.speakers = 2;
  sc.duration_s = 20.0;
  sc.stream1_dim = 2;
  sc.stream2_dim = 1;
  sc.separation = 8.0;
  sc.turn_min_s = 3.0;
  sc.turn_max_s = 6.0;
  sc.seed = 5;
  sc.recording_id = "mini";
  SynthOutput out = Synthesize(sc);
  MiniMeeting m;
  m.features_path = "/tmp/dovetail_sweep_mini.feats";
  m.ref_path = "/tmp/dovetail_sweep_mini.rttm";
  SaveFeatures(out.features, m.features_path);
  WriteRttmFile(out.reference, m.ref_path);
  return m;
}

SweepConfig MiniSweep(const MiniMeeting& m, const std::string& dir) {
  SweepConfig c;
  c.axis = SweepAxis::kInitClusters;
  c.values = {3.0, 4.0};
  c.collar_ms = 0;
  c.recordings = {{m.features_path, m.ref_path}};
  c.run_dir = dir;
  c.workers = 2;
  c.base.init_gaussians = 2;
  c.base.second_best_prob = 0.0;
  c.base.em_iters = 3;
  c.base.seed = 1;
  return c;
}

TEST_CASE("a small sweep runs, stores artifacts, and repeats byte for byte") {
  MiniMeeting m = WriteMiniMeeting();
  const std::string dir = "/tmp/dovetail_sweep_run";
  fs::remove_all(dir);
  SweepConfig c = MiniSweep(m, dir);

  ResultTable t = RunSweep(c);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].value == "3");
  CHECK(t.rows[1].value == "4");
  CHECK(t.rows[2].value == "DOVER");
  for (const ResultRow& r : t.rows) {
    CAPTURE(r.value);
    CHECK_FALSE(r.failed);
    CHECK(r.der >= 0.0);
    CHECK(r.der <= 100.0);
  }
  CHECK(fs::exists(dir + "/config.txt"));
  CHECK(fs::exists(dir + "/run_3/mini.rttm"));
  CHECK(fs::exists(dir + "/run_4/mini.rttm"));
  CHECK(fs::exists(dir + "/run_DOVER/mini.rttm"));
  std::string snapshot = ReadTextFile(dir + "/config.txt");
  CHECK(snapshot.find("axis=init_clusters") != std::string::npos);
  CHECK(snapshot.find("values=3,4") != std::string::npos);

  std::string csv = TableCsv(t);
  std::string art3 = ReadTextFile(dir + "/run_3/mini.rttm");
  std::string dover = ReadTextFile(dir + "/run_DOVER/mini.rttm");

  ResultTable again = RunSweep(c);
  CHECK(TableCsv(again) == csv);
  CHECK(ReadTextFile(dir + "/run_3/mini.rttm") == art3);
  CHECK(ReadTextFile(dir + "/run_DOVER/mini.rttm") == dover);
}

TEST_CASE("a single-value sweep makes DOVER the unanimous input") {
  MiniMeeting m = WriteMiniMeeting();
  const std::string dir = "/tmp/dovetail_sweep_single";
  fs::remove_all(dir);
  SweepConfig c = MiniSweep(m, dir);
  c.values = {4.0};

  ResultTable t = RunSweep(c);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].value == "4");
  CHECK(t.rows[1].value == "DOVER");
  CHECK(t.rows[0].spk_err == t.rows[1].spk_err);
  CHECK(t.rows[0].der == t.rows[1].der);
  CHECK(ReadTextFile(dir + "/run_4/mini.rttm") ==
        ReadTextFile(dir + "/run_DOVER/mini.rttm"));
}

TEST_CASE("a failing row is reported but does not sink the sweep") {
  MiniMeeting m = WriteMiniMeeting();
  const std::string dir = "/tmp/dovetail_sweep_fail";
  fs::remove_all(dir);
  SweepConfig c = MiniSweep(m, dir);
  c.values = {4.0, 4000.0};  // more clusters than frames

  ResultTable t = RunSweep(c);
  REQUIRE(t.rows.size() == 3);
  CHECK_FALSE(t.rows[0].failed);
  CHECK(t.rows[1].failed);
  CHECK_FALSE(t.rows[2].failed);  // consensus of the surviving run
  CHECK(t.rows[2].spk_err == t.rows[0].spk_err);
  CHECK(t.rows[2].der == t.rows[0].der);
  CHECK_FALSE(fs::exists(dir + "/run_4000/mini.rttm"));
  CHECK(TableCsv(t).find("4000,failed,failed\n") != std::string::npos);
}

TEST_CASE("randomized mode prepends the best-first baseline") {
  MiniMeeting m = WriteMiniMeeting();
  const std::string dir = "/tmp/dovetail_sweep_rand";
  fs::remove_all(dir);
  SweepConfig c = MiniSweep(m, dir);
  c.values = {1.0, 2.0};
  c.axis = SweepAxis::kSeed;
  c.base.init_clusters = 4;
  c.base.second_best_prob = 0.3;

  ResultTable t = RunRandomized(c);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].value == "best-first");
  CHECK(t.rows[1].value == "1");
  CHECK(t.rows[2].value == "2");
  CHECK(t.rows[3].value == "DOVER");
  for (const ResultRow& r : t.rows) {
    CAPTURE(r.value);
    CHECK_FALSE(r.failed);
  }
  CHECK(fs::exists(dir + "/run_best-first/mini.rttm"));
  CHECK(fs::exists(dir + "/run_1/mini.rttm"));
  CHECK(fs::exists(dir + "/run_2/mini.rttm"));
}

TEST_CASE("a missing features file fails the whole sweep") {
  MiniMeeting m = WriteMiniMeeting();
  SweepConfig c = MiniSweep(m, "/tmp/dovetail_sweep_missing");
  c.recordings.push_back({"/tmp/dovetail_no_such.feats", m.ref_path});
  CHECK_THROWS_AS(RunSweep(c), DataError);
}

}  // namespace
}  // namespace dovetail
