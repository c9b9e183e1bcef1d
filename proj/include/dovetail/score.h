// dovetail/score.h

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

#ifndef DOVETAIL_SCORE_H_
#define DOVETAIL_SCORE_H_

#include <cstdint>
#include <string>

#include "dovetail/assign.h"
#include "dovetail/turns.h"

namespace dovetail {

// Diarization error components in milliseconds over the evaluated timeline,
// which excludes a collar around every reference turn boundary.
struct ScoreReport {
  int64_t ref_speech_ms = 0;
  int64_t missed_ms = 0;
  int64_t false_alarm_ms = 0;
  int64_t speaker_error_ms = 0;
  int64_t collar_ms = 0;
  double der = 0.0;                 // (missed + fa + spk_err) / ref_speech
  double speaker_error_rate = 0.0;  // spk_err / ref_speech
};

// Optimal overlap mapping of hypothesis labels onto reference labels,
// computed over the full timeline before any collar is applied.
LabelMapping SpeakerMapping(const Hypothesis& ref, const Hypothesis& hyp);

// Scores `hyp` against `ref`. Throws DataError when recording ids differ or
// when the reference contributes no speech to the evaluated timeline (the
// rates would be undefined).
ScoreReport ScoreHypothesis(const Hypothesis& ref, const Hypothesis& hyp,
                            int64_t collar_ms = 0);

// "key=value" lines, one per report field. DER is printed as "DER=%.3f".
std::string ReportKeyValue(const ScoreReport& report);

// Two CSV lines: header and values.
std::string ReportCsv(const ScoreReport& report);

}  // namespace dovetail

#endif  // DOVETAIL_SCORE_H_
