// dovetail/score.cc

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

#include "dovetail/score.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "dovetail/common.h"
#include "dovetail/timeline.h"

namespace dovetail {

namespace {

struct Interval {
  int64_t lo = 0;
  int64_t hi = 0;
};

// Sorted union of [b - collar, b + collar) around every turn boundary.
std::vector<Interval> CollarZones(const Hypothesis& ref, int64_t collar_ms) {
  std::vector<Interval> zones;
  if (collar_ms <= 0) return zones;
  for (const Turn& t : ref.turns) {
    zones.push_back({std::max<int64_t>(0, t.onset_ms - collar_ms),
                     t.onset_ms + collar_ms});
    zones.push_back({std::max<int64_t>(0, t.offset_ms() - collar_ms),
                     t.offset_ms() + collar_ms});
  }
  std::sort(zones.begin(), zones.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& z : zones) {
    if (!merged.empty() && z.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, z.hi);
    } else {
      merged.push_back(z);
    }
  }
  return merged;
}

// Walks sorted non-overlapping turns left to right and reports the label
// covering each queried interval, or nullptr.
class TurnCursor {
 public:
  explicit TurnCursor(const std::vector<Turn>& turns) : turns_(turns) {}

  const std::string* LabelAt(int64_t lo, int64_t hi) {
    while (i_ < turns_.size() && turns_[i_].offset_ms() <= lo) ++i_;
    if (i_ < turns_.size() && turns_[i_].onset_ms <= lo &&
        hi <= turns_[i_].offset_ms()) {
      return &turns_[i_].speaker;
    }
    return nullptr;
  }

 private:
  const std::vector<Turn>& turns_;
  size_t i_ = 0;
};

}  // namespace

LabelMapping SpeakerMapping(const Hypothesis& ref, const Hypothesis& hyp) {
  return MapPairwise(hyp, ref);
}

ScoreReport ScoreHypothesis(const Hypothesis& ref, const Hypothesis& hyp,
                            int64_t collar_ms) {
  if (collar_ms < 0) throw DataError("negative collar");
  if (!hyp.turns.empty() && ref.recording_id != hyp.recording_id) {
    throw DataError("recording id mismatch: ref '" + ref.recording_id +
                    "' vs hyp '" + hyp.recording_id + "'");
  }

  // The speaker map is decided on the full timeline; the collar only blanks
  // out time when errors are counted.
  LabelMapping mapping = SpeakerMapping(ref, hyp);
  std::set<std::string> ref_labels;
  for (const std::string& l : ref.Labels()) ref_labels.insert(l);

  Hypothesis renamed = hyp;
  for (Turn& t : renamed.turns) {
    const std::string* target = mapping.Target(t.speaker);
    if (target) {
      t.speaker = *target;
    } else {
      // Keep unmatched labels distinct from every reference label so they
      // can never score as correct.
      std::string name = t.speaker + "@hyp";
      while (ref_labels.count(name)) name += "x";
      t.speaker = name;
    }
  }

  std::vector<Interval> zones = CollarZones(ref, collar_ms);

  std::vector<int64_t> points;
  points.push_back(0);
  for (const Turn& t : ref.turns) {
    points.push_back(t.onset_ms);
    points.push_back(t.offset_ms());
  }
  for (const Turn& t : renamed.turns) {
    points.push_back(t.onset_ms);
    points.push_back(t.offset_ms());
  }
  for (const Interval& z : zones) {
    points.push_back(z.lo);
    points.push_back(z.hi);
  }
  int64_t end = std::max(ref.EndMs(), renamed.EndMs());
  points.erase(std::remove_if(points.begin(), points.end(),
                              [end](int64_t p) { return p > end; }),
               points.end());
  points.push_back(end);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  ScoreReport report;
  report.collar_ms = collar_ms;
  TurnCursor ref_cursor(ref.turns);
  TurnCursor hyp_cursor(renamed.turns);
  size_t zi = 0;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    int64_t lo = points[i], hi = points[i + 1];
    const std::string* rl = ref_cursor.LabelAt(lo, hi);
    const std::string* hl = hyp_cursor.LabelAt(lo, hi);
    while (zi < zones.size() && zones[zi].hi <= lo) ++zi;
    bool in_collar = zi < zones.size() && zones[zi].lo <= lo && hi <= zones[zi].hi;
    if (in_collar) continue;
    int64_t d = hi - lo;
    if (rl) report.ref_speech_ms += d;
    if (rl && !hl) report.missed_ms += d;
    if (!rl && hl) report.false_alarm_ms += d;
    if (rl && hl && *rl != *hl) report.speaker_error_ms += d;
  }

  if (report.ref_speech_ms == 0) {
    throw DataError(
        "reference contributes no speech to the evaluated timeline; "
        "error rates are undefined");
  }
  report.der =
      static_cast<double>(report.missed_ms + report.false_alarm_ms +
                          report.speaker_error_ms) /
      static_cast<double>(report.ref_speech_ms);
  report.speaker_error_rate = static_cast<double>(report.speaker_error_ms) /
                              static_cast<double>(report.ref_speech_ms);
  return report;
}

std::string ReportKeyValue(const ScoreReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "ref_speech=%s\n"
                "missed=%s\n"
                "false_alarm=%s\n"
                "speaker_error=%s\n"
                "DER=%.3f\n"
                "speaker_error_rate=%.3f\n"
                "collar=%s\n",
                SecondsFixed3(r.ref_speech_ms).c_str(),
                SecondsFixed3(r.missed_ms).c_str(),
                SecondsFixed3(r.false_alarm_ms).c_str(),
                SecondsFixed3(r.speaker_error_ms).c_str(), r.der,
                r.speaker_error_rate, SecondsFixed3(r.collar_ms).c_str());
  return buf;
}

std::string ReportCsv(const ScoreReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "ref_speech,missed,false_alarm,speaker_error,der,"
                "speaker_error_rate,collar\n%s,%s,%s,%s,%.6f,%.6f,%s\n",
                SecondsFixed3(r.ref_speech_ms).c_str(),
                SecondsFixed3(r.missed_ms).c_str(),
                SecondsFixed3(r.false_alarm_ms).c_str(),
                SecondsFixed3(r.speaker_error_ms).c_str(), r.der,
                r.speaker_error_rate, SecondsFixed3(r.collar_ms).c_str());
  return buf;
}

}  // namespace dovetail
