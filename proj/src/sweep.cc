// dovetail/sweep.cc

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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "dovetail/common.h"
#include "dovetail/rttm.h"
#include "dovetail/score.h"

namespace dovetail {

namespace {

namespace fs = std::filesystem;

std::string FormatValue(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string AxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kStreamWeight: return "stream_weight";
    case SweepAxis::kInitClusters: return "init_clusters";
    case SweepAxis::kInitGaussians: return "init_gaussians";
    case SweepAxis::kSeed: return "seed";
  }
  return "?";
}

SweepAxis AxisFromName(const std::string& name, const std::string& where) {
  if (name == "stream_weight") return SweepAxis::kStreamWeight;
  if (name == "init_clusters") return SweepAxis::kInitClusters;
  if (name == "init_gaussians") return SweepAxis::kInitGaussians;
  if (name == "seed") return SweepAxis::kSeed;
  throw DataError(where + ": unknown axis '" + name + "'");
}

std::string SanitizeName(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return out;
}

// The digest input doubles as the stored config snapshot, so the run
// directory name and the on-disk record always agree.
std::string Snapshot(const SweepConfig& c) {
  std::ostringstream out;
  out << "axis=" << AxisName(c.axis) << "\n";
  out << "randomized=" << (c.randomized ? 1 : 0) << "\n";
  out << "values=";
  for (size_t i = 0; i < c.values.size(); ++i) {
    out << (i ? "," : "") << FormatValue(c.values[i]);
  }
  out << "\n";
  out << "collar_ms=" << c.collar_ms << "\n";
  out << "dover_order="
      << (c.dover_policy.order == InputOrder::kShuffle ? "shuffle" : "given")
      << "\n";
  out << "dover_seed=" << c.dover_policy.shuffle_seed << "\n";
  out << "dover_threshold="
      << FormatValue(c.dover_policy.speech_threshold_fraction) << "\n";
  out << "dover_weights=";
  for (size_t i = 0; i < c.dover_policy.weights.size(); ++i) {
    out << (i ? "," : "") << FormatValue(c.dover_policy.weights[i]);
  }
  out << "\n";
  const Hyperparams& b = c.base;
  out << "base_stream_weight=" << FormatValue(b.stream_weight) << "\n";
  out << "base_init_clusters=" << b.init_clusters << "\n";
  out << "base_init_gaussians=" << b.init_gaussians << "\n";
  out << "base_p=" << FormatValue(b.second_best_prob) << "\n";
  out << "base_L=" << FormatValue(b.second_best_window) << "\n";
  out << "base_min_duration_ms=" << b.min_duration_ms << "\n";
  out << "base_em_iters=" << b.em_iters << "\n";
  out << "base_seed=" << b.seed << "\n";
  out << "base_self_loop=" << FormatValue(b.self_loop) << "\n";
  for (const SweepRecording& r : c.recordings) {
    out << "recording=" << r.features_path << "|" << r.ref_path << "\n";
  }
  return out.str();
}

Hyperparams ApplyAxis(const SweepConfig& c, double value) {
  Hyperparams hp = c.base;
  switch (c.axis) {
    case SweepAxis::kStreamWeight:
      hp.stream_weight = value;
      break;
    case SweepAxis::kInitClusters:
      hp.init_clusters = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::kInitGaussians:
      hp.init_gaussians = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::kSeed:
      break;  // injected per run below
  }
  return hp;
}

uint64_t SeedFor(const SweepConfig& c, const std::string& label, double value,
                 bool seed_semantics, const std::string& recording_id) {
  uint64_t base = seed_semantics ? static_cast<uint64_t>(std::llround(value))
                                 : c.base.seed;
  uint64_t h = Fnv1a64(&base, sizeof(base));
  std::string tag = label + "|" + recording_id;
  return Fnv1a64(tag.data(), tag.size(), h);
}

struct RunOutcome {
  bool ok = false;
  int64_t ref_speech_ms = 0;
  int64_t speaker_error_ms = 0;
  int64_t error_ms = 0;  // missed + false alarm + speaker error
};

RunOutcome OutcomeFrom(const ScoreReport& rep) {
  RunOutcome o;
  o.ok = true;
  o.ref_speech_ms = rep.ref_speech_ms;
  o.speaker_error_ms = rep.speaker_error_ms;
  o.error_ms = rep.missed_ms + rep.false_alarm_ms + rep.speaker_error_ms;
  return o;
}

ResultRow AggregateRow(const std::string& label,
                       const std::vector<RunOutcome>& outcomes) {
  ResultRow row;
  row.value = label;
  int64_t ref = 0, spk = 0, err = 0;
  for (const RunOutcome& o : outcomes) {
    if (!o.ok) {
      row.failed = true;
      return row;
    }
    ref += o.ref_speech_ms;
    spk += o.speaker_error_ms;
    err += o.error_ms;
  }
  if (ref == 0) {
    row.failed = true;
    return row;
  }
  row.spk_err = 100.0 * static_cast<double>(spk) / static_cast<double>(ref);
  row.der = 100.0 * static_cast<double>(err) / static_cast<double>(ref);
  return row;
}

struct RunPlan {
  std::string label;
  Hyperparams hp;            // seed overwritten per recording
  double value = 0.0;
  bool seed_semantics = false;
};

// Runs the planned rows, writes artifacts, aggregates, then builds the DOVER
// row per recording from the stored RTTMs of the rows listed in
// dover_sources.
ResultTable ExecutePlan(const SweepConfig& c, const std::vector<RunPlan>& plan,
                        const std::vector<size_t>& dover_sources) {
  if (c.values.empty()) throw DataError("sweep has no values");
  if (c.recordings.empty()) throw DataError("sweep has no recordings");

  const fs::path dir = c.run_dir.empty()
                           ? fs::path("sweep-" + ConfigDigest(c))
                           : fs::path(c.run_dir);
  fs::create_directories(dir);
  WriteTextFile((dir / "config.txt").string(), Snapshot(c));

  std::vector<FeatureSequence> features;
  std::vector<Hypothesis> refs;
  for (const SweepRecording& rec : c.recordings) {
    features.push_back(LoadFeatures(rec.features_path));
    refs.push_back(ParseRttmSingle(rec.ref_path));
  }

  const size_t n_rec = c.recordings.size();
  std::vector<std::vector<RunOutcome>> outcomes(
      plan.size(), std::vector<RunOutcome>(n_rec));
  std::vector<std::string> artifact(plan.size() * n_rec);

  struct Job {
    size_t row;
    size_t rec;
  };
  std::vector<Job> jobs;
  for (size_t pi = 0; pi < plan.size(); ++pi) {
    fs::create_directories(dir / ("run_" + SanitizeName(plan[pi].label)));
    for (size_t ri = 0; ri < n_rec; ++ri) jobs.push_back(Job{pi, ri});
  }
  for (const Job& job : jobs) {
    const RunPlan& p = plan[job.row];
    artifact[job.row * n_rec + job.rec] =
        (dir / ("run_" + SanitizeName(p.label)) /
         (SanitizeName(features[job.rec].recording_id) + ".rttm"))
            .string();
    // A stale artifact from an aborted earlier run must not leak into the
    // DOVER inputs when this run fails.
    fs::remove(artifact[job.row * n_rec + job.rec]);
  }

  const int job_count = static_cast<int>(jobs.size());
  const int workers = std::max(1, c.workers);
#pragma omp parallel for schedule(dynamic) num_threads(workers) \
    if (workers > 1)
  for (int ji = 0; ji < job_count; ++ji) {
    const Job& job = jobs[ji];
    const RunPlan& p = plan[job.row];
    RunOutcome& o = outcomes[job.row][job.rec];
    try {
      Hyperparams hp = p.hp;
      hp.seed = SeedFor(c, p.label, p.value, p.seed_semantics,
                        features[job.rec].recording_id);
      DiarizeResult result = Diarize(features[job.rec], hp);
      WriteRttmFile(result.hypothesis, artifact[job.row * n_rec + job.rec]);
      o = OutcomeFrom(
          ScoreHypothesis(refs[job.rec], result.hypothesis, c.collar_ms));
    } catch (const std::exception&) {
      o.ok = false;  // the row shows up as failed; the sweep keeps going
    }
  }

  ResultTable table;
  for (size_t pi = 0; pi < plan.size(); ++pi) {
    table.rows.push_back(AggregateRow(plan[pi].label, outcomes[pi]));
  }

  // Consensus of the stored per-row RTTMs, re-read from disk.
  fs::create_directories(dir / "run_DOVER");
  std::vector<RunOutcome> dover_outcomes(n_rec);
  for (size_t ri = 0; ri < n_rec; ++ri) {
    try {
      std::vector<Hypothesis> inputs;
      std::vector<double> weights;
      for (size_t k = 0; k < dover_sources.size(); ++k) {
        const std::string& path = artifact[dover_sources[k] * n_rec + ri];
        if (!fs::exists(path)) continue;  // that run failed, skip its vote
        inputs.push_back(
            ParseRttmSingle(path, static_cast<int>(inputs.size())));
        if (!c.dover_policy.weights.empty()) {
          weights.push_back(c.dover_policy.weights[k]);
        }
      }
      VotePolicy policy = c.dover_policy;
      policy.weights = weights;
      Hypothesis consensus = DoverCombine(inputs, policy);
      WriteRttmFile(consensus,
                    (dir / "run_DOVER" /
                     (SanitizeName(features[ri].recording_id) + ".rttm"))
                        .string());
      dover_outcomes[ri] =
          OutcomeFrom(ScoreHypothesis(refs[ri], consensus, c.collar_ms));
    } catch (const std::exception&) {
      dover_outcomes[ri].ok = false;
    }
  }
  table.rows.push_back(AggregateRow("DOVER", dover_outcomes));
  return table;
}

}  // namespace

std::string ConfigDigest(const SweepConfig& config) {
  std::string snap = Snapshot(config);
  return HexDigest(Fnv1a64(snap.data(), snap.size()));
}

uint64_t RunSeed(const SweepConfig& config, double value,
                 const std::string& recording_id) {
  bool seed_semantics = config.axis == SweepAxis::kSeed || config.randomized;
  return SeedFor(config, FormatValue(value), value, seed_semantics,
                 recording_id);
}

ResultTable RunSweep(const SweepConfig& config) {
  SweepConfig c = config;
  c.randomized = false;
  std::vector<RunPlan> plan;
  std::vector<size_t> dover_sources;
  for (double v : c.values) {
    RunPlan p;
    p.label = FormatValue(v);
    p.hp = ApplyAxis(c, v);
    p.value = v;
    p.seed_semantics = c.axis == SweepAxis::kSeed;
    dover_sources.push_back(plan.size());
    plan.push_back(std::move(p));
  }
  return ExecutePlan(c, plan, dover_sources);
}

ResultTable RunRandomized(const SweepConfig& config) {
  SweepConfig c = config;
  c.randomized = true;
  std::vector<RunPlan> plan;
  std::vector<size_t> dover_sources;

  RunPlan baseline;
  baseline.label = "best-first";
  baseline.hp = c.base;
  baseline.hp.second_best_prob = 0.0;
  baseline.value = 0.0;
  baseline.seed_semantics = false;
  plan.push_back(std::move(baseline));

  for (double v : c.values) {
    RunPlan p;
    p.label = FormatValue(v);
    p.hp = c.base;  // keeps the configured p, the value only moves the seed
    p.value = v;
    p.seed_semantics = true;
    dover_sources.push_back(plan.size());
    plan.push_back(std::move(p));
  }
  return ExecutePlan(c, plan, dover_sources);
}

std::string TableCsv(const ResultTable& table) {
  std::string out = "value,spk_err,der\n";
  char buf[128];
  for (const ResultRow& r : table.rows) {
    if (r.failed) {
      out += r.value + ",failed,failed\n";
    } else {
      std::snprintf(buf, sizeof(buf), "%s,%.3f,%.3f\n", r.value.c_str(),
                    r.spk_err, r.der);
      out += buf;
    }
  }
  return out;
}

std::string TableText(const ResultTable& table) {
  size_t valw = 5;  // "value"
  for (const ResultRow& r : table.rows) valw = std::max(valw, r.value.size());
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-*s  %7s  %7s\n", static_cast<int>(valw),
                "value", "spk_err", "der");
  out << buf;
  for (const ResultRow& r : table.rows) {
    if (r.failed) {
      std::snprintf(buf, sizeof(buf), "%-*s  %7s  %7s\n",
                    static_cast<int>(valw), r.value.c_str(), "failed",
                    "failed");
    } else {
      std::snprintf(buf, sizeof(buf), "%-*s  %7.1f  %7.1f\n",
                    static_cast<int>(valw), r.value.c_str(), r.spk_err, r.der);
    }
    out << buf;
  }
  return out.str();
}

SweepConfig ParseSweepConfig(const std::string& text, const std::string& name) {
  SweepConfig c;
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
    if (key == "axis") {
      c.axis = AxisFromName(val, where);
    } else if (key == "mode") {
      if (val == "randomized") {
        c.randomized = true;
      } else if (val == "axis") {
        c.randomized = false;
      } else {
        throw DataError(where + ": unknown mode '" + val + "'");
      }
    } else if (key == "values") {
      c.values.clear();
      for (const std::string& tok : Split(val, ',')) {
        c.values.push_back(ParseDouble(Trim(tok), where));
      }
    } else if (key == "collar") {
      c.collar_ms = MsFromSeconds(ParseDouble(val, where));
    } else if (key == "workers") {
      c.workers = static_cast<int>(ParseInt(val, where));
    } else if (key == "run_dir") {
      c.run_dir = val;
    } else if (key == "dover_order") {
      if (val == "given") {
        c.dover_policy.order = InputOrder::kGiven;
      } else if (val == "shuffle") {
        c.dover_policy.order = InputOrder::kShuffle;
      } else {
        throw DataError(where + ": unknown order '" + val + "'");
      }
    } else if (key == "dover_seed") {
      c.dover_policy.shuffle_seed = static_cast<uint64_t>(ParseInt(val, where));
    } else if (key == "dover_threshold") {
      c.dover_policy.speech_threshold_fraction = ParseDouble(val, where);
    } else if (key == "dover_weights") {
      c.dover_policy.weights.clear();
      for (const std::string& tok : Split(val, ',')) {
        c.dover_policy.weights.push_back(ParseDouble(Trim(tok), where));
      }
    } else if (key == "base_stream_weight") {
      c.base.stream_weight = ParseDouble(val, where);
    } else if (key == "base_init_clusters") {
      c.base.init_clusters = static_cast<int>(ParseInt(val, where));
    } else if (key == "base_init_gaussians") {
      c.base.init_gaussians = static_cast<int>(ParseInt(val, where));
    } else if (key == "base_p") {
      c.base.second_best_prob = ParseDouble(val, where);
    } else if (key == "base_L") {
      c.base.second_best_window = ParseDouble(val, where);
    } else if (key == "base_min_duration_s") {
      c.base.min_duration_ms = MsFromSeconds(ParseDouble(val, where));
    } else if (key == "base_em_iters") {
      c.base.em_iters = static_cast<int>(ParseInt(val, where));
    } else if (key == "base_seed") {
      c.base.seed = static_cast<uint64_t>(ParseInt(val, where));
    } else if (key == "base_self_loop") {
      c.base.self_loop = ParseDouble(val, where);
    } else if (key == "recording") {
      std::vector<std::string> parts = Split(val, '|');
      if (parts.size() != 2) {
        throw DataError(where + ": expected recording=<features>|<ref>");
      }
      c.recordings.push_back(SweepRecording{Trim(parts[0]), Trim(parts[1])});
    } else {
      throw DataError(where + ": unknown key '" + key + "'");
    }
  }
  if (c.values.empty()) throw DataError(name + ": no values given");
  if (c.recordings.empty()) throw DataError(name + ": no recordings given");
  return c;
}

SweepConfig LoadSweepConfig(const std::string& path) {
  return ParseSweepConfig(ReadTextFile(path), path);
}

}  // namespace dovetail
