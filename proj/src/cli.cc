// dovetail/cli.cc

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

#include "dovetail/cli.h"

#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dovetail/common.h"
#include "dovetail/diarize.h"
#include "dovetail/features.h"
#include "dovetail/rttm.h"
#include "dovetail/score.h"
#include "dovetail/sweep.h"
#include "dovetail/synth.h"
#include "dovetail/vote.h"

namespace dovetail {
namespace {

std::vector<double> ParseWeightList(const std::string& csv) {
  std::vector<double> weights;
  if (Trim(csv).empty()) return weights;
  for (const std::string& tok : Split(csv, ',')) {
    weights.push_back(ParseDouble(Trim(tok), "--weights"));
  }
  return weights;
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"dovetail: diarization ensembles, scoring, sweeps"};
  app.require_subcommand(1);

  auto* dover =
      app.add_subcommand("dover", "Combine hypothesis RTTMs by weighted vote");
  std::vector<std::string> dover_inputs;
  std::string dover_weights;
  std::string dover_order = "given";
  std::string dover_output;
  uint64_t dover_seed = 1;
  double dover_threshold = 0.5;
  dover->add_option("--inputs", dover_inputs,
                    "Input RTTM files, one recording each")
      ->required()
      ->expected(-1);
  dover->add_option("--weights", dover_weights,
                    "Comma-separated weights, one per input (default all 1)");
  dover->add_option("--order", dover_order, "Processing order")
      ->check(CLI::IsMember({"given", "shuffle"}))
      ->capture_default_str();
  dover->add_option("--seed", dover_seed, "Shuffle seed")
      ->capture_default_str();
  dover
      ->add_option("--threshold", dover_threshold,
                   "Speech threshold fraction, in (0, 1]")
      ->capture_default_str();
  dover->add_option("--output", dover_output,
                    "Output RTTM path (default: stdout)");
  dover->callback([&] {
    std::vector<Hypothesis> inputs;
    for (size_t i = 0; i < dover_inputs.size(); ++i) {
      inputs.push_back(ParseRttmSingle(dover_inputs[i], static_cast<int>(i)));
    }
    VotePolicy policy;
    policy.weights = ParseWeightList(dover_weights);
    policy.speech_threshold_fraction = dover_threshold;
    policy.order =
        dover_order == "shuffle" ? InputOrder::kShuffle : InputOrder::kGiven;
    policy.shuffle_seed = dover_seed;
    Hypothesis consensus = DoverCombine(inputs, policy);
    if (dover_output.empty()) {
      out << EmitRttm(consensus);
    } else {
      WriteRttmFile(consensus, dover_output);
    }
  });

  auto* score =
      app.add_subcommand("score", "Diarization error rate of hyp against ref");
  std::string score_ref;
  std::string score_hyp;
  double score_collar_s = 0.25;
  score->add_option("--ref", score_ref, "Reference RTTM")->required();
  score->add_option("--hyp", score_hyp, "Hypothesis RTTM")->required();
  score
      ->add_option("--collar", score_collar_s,
                   "No-score collar around reference boundaries, seconds")
      ->capture_default_str();
  score->callback([&] {
    Hypothesis ref = ParseRttmSingle(score_ref);
    Hypothesis hyp = ParseRttmSingle(score_hyp, 1);
    ScoreReport report =
        ScoreHypothesis(ref, hyp, MsFromSeconds(score_collar_s));
    out << ReportKeyValue(report);
    out << ReportCsv(report);
  });

  auto* diarize = app.add_subcommand(
      "diarize", "Agglomerative GMM diarization of a feature file");
  std::string diar_features;
  std::string diar_output;
  std::string diar_recording;
  Hyperparams hp;
  double diar_min_duration_s = 2.5;
  diarize->add_option("--features", diar_features, "Feature file")->required();
  diarize->add_option("--output", diar_output,
                      "Output RTTM path (default: stdout)");
  diarize->add_option("--recording-id", diar_recording,
                      "Override the recording id from the feature file");
  diarize
      ->add_option("--stream-weight", hp.stream_weight,
                   "Stream-2 share of the combined log likelihood")
      ->capture_default_str();
  diarize->add_option("--clusters", hp.init_clusters, "Initial cluster count")
      ->capture_default_str();
  diarize
      ->add_option("--gaussians", hp.init_gaussians,
                   "Initial stream-1 Gaussians per cluster")
      ->capture_default_str();
  diarize
      ->add_option("--p", hp.second_best_prob,
                   "Probability of merging the second-best pair")
      ->capture_default_str();
  diarize
      ->add_option("--L", hp.second_best_window,
                   "Relative delta gap that keeps the second-best eligible")
      ->capture_default_str();
  diarize
      ->add_option("--min-duration", diar_min_duration_s,
                   "Minimum segment duration, seconds")
      ->capture_default_str();
  diarize
      ->add_option("--em-iters", hp.em_iters, "EM iterations per model fit")
      ->capture_default_str();
  diarize->add_option("--seed", hp.seed, "Merge randomization seed")
      ->capture_default_str();
  diarize
      ->add_option("--self-loop", hp.self_loop,
                   "Terminal state self-transition probability")
      ->capture_default_str();
  diarize->callback([&] {
    FeatureSequence features = LoadFeatures(diar_features);
    if (!diar_recording.empty()) features.recording_id = diar_recording;
    hp.min_duration_ms = MsFromSeconds(diar_min_duration_s);
    DiarizeResult result = Diarize(features, hp);
    if (diar_output.empty()) {
      out << EmitRttm(result.hypothesis);
    } else {
      WriteRttmFile(result.hypothesis, diar_output);
      out << "clusters=" << result.cluster_count << "\n";
    }
  });

  auto* sweep = app.add_subcommand(
      "sweep", "Run a hyperparameter sweep and DOVER-combine the runs");
  std::string sweep_config;
  std::string sweep_out;
  std::string sweep_run_dir;
  bool sweep_randomized = false;
  sweep->add_option("--config", sweep_config, "Sweep config file")->required();
  sweep->add_option("--out", sweep_out, "Result table CSV path")->required();
  sweep->add_option("--run-dir", sweep_run_dir,
                    "Artifact directory (default: sweep-<config digest>)");
  sweep->add_flag("--randomized", sweep_randomized,
                  "Seed trials with a best-first baseline row");
  sweep->callback([&] {
    SweepConfig config = LoadSweepConfig(sweep_config);
    if (!sweep_run_dir.empty()) config.run_dir = sweep_run_dir;
    if (sweep_randomized) config.randomized = true;
    ResultTable table =
        config.randomized ? RunRandomized(config) : RunSweep(config);
    WriteTextFile(sweep_out, TableCsv(table));
    out << TableText(table);
  });

  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic meeting: features plus reference RTTM");
  std::string synth_config_path;
  std::string synth_out_features;
  std::string synth_out_ref;
  SynthConfig synth_defaults;
  uint64_t synth_seed = synth_defaults.seed;
  int synth_speakers = synth_defaults.speakers;
  double synth_duration = synth_defaults.duration_s;
  double synth_separation = synth_defaults.separation;
  std::string synth_recording = synth_defaults.recording_id;
  synth->add_option("--config", synth_config_path,
                    "Generator config file (flags override it)");
  synth->add_option("--seed", synth_seed, "Generator seed")
      ->capture_default_str();
  synth->add_option("--speakers", synth_speakers, "Speaker count")
      ->capture_default_str();
  synth->add_option("--duration", synth_duration, "Meeting length, seconds")
      ->capture_default_str();
  synth
      ->add_option("--separation", synth_separation,
                   "Distance between speaker centroids")
      ->capture_default_str();
  synth->add_option("--recording-id", synth_recording, "Recording id")
      ->capture_default_str();
  synth->add_option("--out-features", synth_out_features, "Feature file path")
      ->required();
  synth->add_option("--out-ref", synth_out_ref, "Reference RTTM path")
      ->required();
  synth->callback([&] {
    SynthConfig config;
    if (!synth_config_path.empty()) config = LoadSynthConfig(synth_config_path);
    if (synth->count("--seed")) config.seed = synth_seed;
    if (synth->count("--speakers")) config.speakers = synth_speakers;
    if (synth->count("--duration")) config.duration_s = synth_duration;
    if (synth->count("--separation")) config.separation = synth_separation;
    if (synth->count("--recording-id")) config.recording_id = synth_recording;
    SynthOutput output = Synthesize(config);
    SaveFeatures(output.features, synth_out_features);
    WriteRttmFile(output.reference, synth_out_ref);
    out << "frames=" << output.features.frame_count
        << " turns=" << output.reference.turns.size() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace dovetail
