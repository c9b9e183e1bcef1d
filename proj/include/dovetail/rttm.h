// dovetail/rttm.h

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

#ifndef DOVETAIL_RTTM_H_
#define DOVETAIL_RTTM_H_

#include <string>
#include <vector>

#include "dovetail/turns.h"

namespace dovetail {

// Parses RTTM text into one normalized Hypothesis per recording id, ordered
// by first appearance. Only SPEAKER records are read; other record types,
// blank lines and ";;" comments are skipped. Onset and duration are rounded
// to whole milliseconds. Malformed numeric fields, negative onsets,
// non-positive durations, and durations that round to zero raise DataError
// with the line number. `name` prefixes error messages, `source_id` is
// stamped on every turn.
std::vector<Hypothesis> ParseRttm(const std::string& text,
                                  const std::string& name = "rttm",
                                  int source_id = 0);

std::vector<Hypothesis> ParseRttmFile(const std::string& path,
                                      int source_id = 0);

// Like ParseRttmFile but requires exactly one recording in the file.
Hypothesis ParseRttmSingle(const std::string& path, int source_id = 0);

// SPEAKER lines with %.3f times, one per turn, in onset order.
std::string EmitRttm(const Hypothesis& hyp);

void WriteRttmFile(const Hypothesis& hyp, const std::string& path);

}  // namespace dovetail

#endif  // DOVETAIL_RTTM_H_
