// dovetail/sweep.h

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

#ifndef DOVETAIL_SWEEP_H_
#define DOVETAIL_SWEEP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dovetail/diarize.h"
#include "dovetail/vote.h"

namespace dovetail {

enum class SweepAxis {
  kStreamWeight,
  kInitClusters,
  kInitGaussians,
  kSeed,
};

struct SweepRecording {
  std::string features_path;
  std::string ref_path;
};

// One sweep: a base hyperparameter set, one axis with its values, and the
// recordings to run. In randomized mode the axis is implicitly the seed and
// a best-first baseline row is prepended. Per-run RTTMs land under
// `run_dir` (default "sweep-<digest>"), so the consensus can be rebuilt from
// the stored artifacts.
struct SweepConfig {
  Hyperparams base;
  SweepAxis axis = SweepAxis::kStreamWeight;
  std::vector<double> values;
  VotePolicy dover_policy;
  int64_t collar_ms = 250;
  std::vector<SweepRecording> recordings;
  std::string run_dir;  // empty: derived from the config digest
  int workers = 1;
  bool randomized = false;
};

// One table row. Rates are percentages aggregated over recordings, weighted
// by evaluated reference speech time. A failed row keeps the run alive; its
// cells print as "failed".
struct ResultRow {
  std::string value;
  double spk_err = 0.0;
  double der = 0.0;
  bool failed = false;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

SweepConfig LoadSweepConfig(const std::string& path);
SweepConfig ParseSweepConfig(const std::string& text, const std::string& name);

// Stable digest of the resolved config, names the default run directory.
std::string ConfigDigest(const SweepConfig& config);

// Seed for one (axis value, recording) run: a pure hash of the base seed,
// the canonical value string, and the recording id. On the seed axis the
// value replaces the base seed before hashing.
uint64_t RunSeed(const SweepConfig& config, double value,
                 const std::string& recording_id);

// Axis sweep: one row per value plus a final DOVER row. The consensus row is
// computed per recording from the stored per-value RTTMs, re-read from disk,
// then aggregated like any other row.
ResultTable RunSweep(const SweepConfig& config);

// Randomized mode: best-first baseline row (p forced to 0), one row per seed
// value with the base p, then the DOVER row over the seed runs.
ResultTable RunRandomized(const SweepConfig& config);

// Header "value,spk_err,der", one row per ResultRow, DOVER last.
std::string TableCsv(const ResultTable& table);

// Aligned columns for the terminal, rates with one decimal.
std::string TableText(const ResultTable& table);

}  // namespace dovetail

#endif  // DOVETAIL_SWEEP_H_
