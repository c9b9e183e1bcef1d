// dovetail/rttm.cc

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

#include "dovetail/rttm.h"

#include <cstdio>
#include <map>
#include <sstream>

#include "dovetail/common.h"

namespace dovetail {

namespace {

std::string LinePrefix(const std::string& name, int line_no) {
  return name + " line " + std::to_string(line_no);
}

}  // namespace

std::vector<Hypothesis> ParseRttm(const std::string& text,
                                  const std::string& name, int source_id) {
  std::vector<Hypothesis> hyps;
  std::map<std::string, size_t> index;  // recording id -> position in hyps

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = Trim(line);
    if (stripped.empty() || stripped.rfind(";;", 0) == 0) continue;
    std::vector<std::string> f = SplitWhitespace(stripped);
    if (f[0] != "SPEAKER") continue;
    if (f.size() < 8) {
      throw DataError(LinePrefix(name, line_no) + ": SPEAKER record with " +
                      std::to_string(f.size()) + " fields, need at least 8");
    }
    const std::string& recording = f[1];
    double tbeg = ParseDouble(f[3], LinePrefix(name, line_no) + ": onset");
    double tdur = ParseDouble(f[4], LinePrefix(name, line_no) + ": duration");
    if (tdur <= 0.0) {
      throw DataError(LinePrefix(name, line_no) + ": non-positive duration " + f[4]);
    }
    if (tbeg < 0.0) {
      throw DataError(LinePrefix(name, line_no) + ": negative onset " + f[3]);
    }
    Turn t;
    t.onset_ms = MsFromSeconds(tbeg);
    t.duration_ms = MsFromSeconds(tdur);
    if (t.duration_ms == 0) {
      throw DataError(LinePrefix(name, line_no) +
                      ": duration rounds to zero at millisecond resolution");
    }
    t.speaker = f[7];
    t.recording_id = recording;
    t.source_id = source_id;

    auto it = index.find(recording);
    if (it == index.end()) {
      index.emplace(recording, hyps.size());
      hyps.push_back(Hypothesis{recording, {}});
      it = index.find(recording);
    }
    hyps[it->second].turns.push_back(std::move(t));
  }
  for (Hypothesis& hyp : hyps) {
    try {
      NormalizeHypothesis(hyp);
    } catch (const DataError& e) {
      throw DataError(name + ": " + e.what());
    }
  }
  return hyps;
}

std::vector<Hypothesis> ParseRttmFile(const std::string& path, int source_id) {
  return ParseRttm(ReadTextFile(path), path, source_id);
}

Hypothesis ParseRttmSingle(const std::string& path, int source_id) {
  std::vector<Hypothesis> hyps = ParseRttmFile(path, source_id);
  if (hyps.empty()) throw DataError(path + ": no SPEAKER records");
  if (hyps.size() > 1) {
    throw DataError(path + ": expected one recording, found " +
                    std::to_string(hyps.size()));
  }
  return std::move(hyps[0]);
}

std::string EmitRttm(const Hypothesis& hyp) {
  std::string out;
  char buf[256];
  for (const Turn& t : hyp.turns) {
    std::snprintf(buf, sizeof(buf),
                  "SPEAKER %s 1 %s %s <NA> <NA> %s <NA> <NA>\n",
                  hyp.recording_id.c_str(), SecondsFixed3(t.onset_ms).c_str(),
                  SecondsFixed3(t.duration_ms).c_str(), t.speaker.c_str());
    out += buf;
  }
  return out;
}

void WriteRttmFile(const Hypothesis& hyp, const std::string& path) {
  WriteTextFile(path, EmitRttm(hyp));
}

}  // namespace dovetail
