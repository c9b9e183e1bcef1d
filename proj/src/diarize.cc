// dovetail/diarize.cc

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

#include "dovetail/diarize.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dovetail/common.h"

namespace dovetail {

namespace {

// Whole-file contiguous copy of one stream plus its variance floor. All
// cluster work gathers from here instead of the interleaved feature rows.
struct StreamData {
  int dim = 0;
  int n = 0;
  std::vector<double> all;
  std::vector<double> floor;
};

StreamData ExtractStream(const FeatureSequence& f, int stream) {
  StreamData sd;
  sd.dim = f.streams[stream].dim;
  sd.n = f.frame_count;
  std::vector<int> frames(f.frame_count);
  std::iota(frames.begin(), frames.end(), 0);
  GatherStream(f, stream, frames, &sd.all);
  sd.floor = VarianceFloor(sd.all.data(), sd.n, sd.dim);
  return sd;
}

void Gather(const StreamData& sd, const std::vector<int>& frames,
            std::vector<double>* out) {
  out->resize(frames.size() * sd.dim);
  double* dst = out->data();
  for (int frame : frames) {
    const double* src = sd.all.data() + static_cast<size_t>(frame) * sd.dim;
    std::copy(src, src + sd.dim, dst);
    dst += sd.dim;
  }
}

GmmModel TrainOn(const StreamData& sd, const std::vector<int>& frames, int g,
                 int em_iters) {
  std::vector<double> buf;
  Gather(sd, frames, &buf);
  return TrainGmm(buf.data(), static_cast<int>(frames.size()), sd.dim, g,
                  em_iters, sd.floor);
}

double StreamLoglik(const GmmModel& m, const StreamData& sd,
                    const std::vector<int>& frames) {
  std::vector<double> buf;
  Gather(sd, frames, &buf);
  return LogLikelihood(m, buf.data(), static_cast<int>(frames.size()));
}

struct Weights {
  double w1 = 0.5;
  double w2 = 0.5;
};

Weights CombineWeights(const Hyperparams& hp, int channel_count) {
  return {1.0 - hp.stream_weight,
          hp.stream_weight / static_cast<double>(channel_count)};
}

double OwnLoglik(const ClusterModel& c, const StreamData& s1,
                 const StreamData& s2, const Weights& w) {
  return w.w1 * StreamLoglik(c.stream1, s1, c.frames) +
         w.w2 * StreamLoglik(c.stream2, s2, c.frames);
}

void ValidateHyperparams(const Hyperparams& hp, const FeatureSequence& f) {
  if (f.streams.size() != 2) {
    throw DataError("diarizer expects exactly two feature streams, got " +
                    std::to_string(f.streams.size()));
  }
  if (f.frame_count < 1) throw DataError("no frames to diarize");
  if (!(hp.stream_weight >= 0.0 && hp.stream_weight <= 1.0)) {
    throw DataError("stream weight must be in [0, 1]");
  }
  if (hp.init_clusters < 1) throw DataError("init_clusters must be positive");
  if (hp.init_clusters > f.frame_count) {
    throw DataError("more initial clusters than frames");
  }
  if (hp.init_gaussians < 1) throw DataError("init_gaussians must be positive");
  if (!(hp.second_best_prob >= 0.0 && hp.second_best_prob <= 1.0)) {
    throw DataError("second-best probability must be in [0, 1]");
  }
  if (!(hp.second_best_window >= 0.0)) {
    throw DataError("second-best window must be non-negative");
  }
  if (hp.min_duration_ms < f.frame_period_ms) {
    throw DataError("min duration is shorter than one frame");
  }
  if (hp.em_iters < 1) throw DataError("em_iters must be positive");
  if (!(hp.self_loop > 0.0 && hp.self_loop < 1.0)) {
    throw DataError("self loop probability must be inside (0, 1)");
  }
}

// Union frames and the pair's pooled, re-estimated models. Processing in id
// order makes the result independent of the argument order.
struct MergedPair {
  std::vector<int> frames;
  GmmModel stream1;
  GmmModel stream2;
  double loglik = 0.0;
};

MergedPair MergeModels(const ClusterModel& x, const ClusterModel& y,
                       const StreamData& s1, const StreamData& s2,
                       const Hyperparams& hp, const Weights& w) {
  const ClusterModel& lo = x.id <= y.id ? x : y;
  const ClusterModel& hi = x.id <= y.id ? y : x;
  MergedPair out;
  out.frames.resize(lo.frames.size() + hi.frames.size());
  std::merge(lo.frames.begin(), lo.frames.end(), hi.frames.begin(),
             hi.frames.end(), out.frames.begin());

  int64_t nlo = static_cast<int64_t>(lo.frames.size());
  int64_t nhi = static_cast<int64_t>(hi.frames.size());
  int nu = static_cast<int>(out.frames.size());

  std::vector<double> buf;
  Gather(s1, out.frames, &buf);
  out.stream1 = EmTrain(PoolModels(lo.stream1, nlo, hi.stream1, nhi),
                        buf.data(), nu, hp.em_iters, s1.floor);
  double ll1 = LogLikelihood(out.stream1, buf.data(), nu);
  Gather(s2, out.frames, &buf);
  out.stream2 = EmTrain(PoolModels(lo.stream2, nlo, hi.stream2, nhi),
                        buf.data(), nu, hp.em_iters, s2.floor);
  double ll2 = LogLikelihood(out.stream2, buf.data(), nu);
  out.loglik = w.w1 * ll1 + w.w2 * ll2;
  return out;
}

std::vector<ClusterModel> BuildInitialClusters(const FeatureSequence& f,
                                               const Hyperparams& hp,
                                               const StreamData& s1,
                                               const StreamData& s2,
                                               const Weights& w) {
  const int n = f.frame_count;
  const int k = hp.init_clusters;
  const int base = n / k;  // remainder goes to the last block
  std::vector<ClusterModel> clusters(k);
  for (int i = 0; i < k; ++i) {
    ClusterModel& c = clusters[i];
    c.id = i;
    int lo = i * base;
    int hi = (i + 1 == k) ? n : (i + 1) * base;
    c.frames.resize(hi - lo);
    std::iota(c.frames.begin(), c.frames.end(), lo);
    c.g1 = hp.init_gaussians;
    c.g2 = 1;
    c.stream1 = TrainOn(s1, c.frames, c.g1, hp.em_iters);
    c.stream2 = TrainOn(s2, c.frames, c.g2, hp.em_iters);
    c.own_loglik = OwnLoglik(c, s1, s2, w);
  }
  return clusters;
}

void SortDeltas(std::vector<PairDelta>& deltas) {
  std::sort(deltas.begin(), deltas.end(),
            [](const PairDelta& x, const PairDelta& y) {
              if (x.delta != y.delta) return x.delta > y.delta;
              if (x.a != y.a) return x.a < y.a;
              return x.b < y.b;
            });
}

template <bool kRandomized>
MergeChoice PickMerge(std::vector<PairDelta>& deltas, const Hyperparams& hp,
                      Rng& rng) {
  if constexpr (kRandomized) {
    return SelectMerge(std::move(deltas), hp, rng);
  } else {
    (void)hp;
    (void)rng;
    return SelectMergeBestFirst(std::move(deltas));
  }
}

template <bool kRandomized>
DiarizeResult RunAgglomeration(const FeatureSequence& f, const Hyperparams& hp) {
  ValidateHyperparams(hp, f);
  const int n = f.frame_count;
  const int64_t want_frames =
      std::max<int64_t>(1, hp.min_duration_ms / f.frame_period_ms);
  const int min_frames = static_cast<int>(std::min<int64_t>(want_frames, n));

  StreamData s1 = ExtractStream(f, 0);
  StreamData s2 = ExtractStream(f, 1);
  Weights w = CombineWeights(hp, f.channel_count);

  std::vector<ClusterModel> clusters = BuildInitialClusters(f, hp, s1, s2, w);
  int next_id = hp.init_clusters;
  Rng rng(hp.seed);

  while (clusters.size() >= 2) {
    const int kc = static_cast<int>(clusters.size());
    std::vector<PairDelta> deltas;
    deltas.reserve(static_cast<size_t>(kc) * (kc - 1) / 2);
    for (int i = 0; i < kc; ++i) {
      for (int j = i + 1; j < kc; ++j) deltas.push_back(PairDelta{i, j, 0.0});
    }
    const int pair_count = static_cast<int>(deltas.size());
    // Candidate evaluations are independent; each writes only its own slot.
#pragma omp parallel for schedule(dynamic)
    for (int pi = 0; pi < pair_count; ++pi) {
      const ClusterModel& a = clusters[deltas[pi].a];
      const ClusterModel& b = clusters[deltas[pi].b];
      MergedPair merged = MergeModels(a, b, s1, s2, hp, w);
      deltas[pi].delta = merged.loglik - a.own_loglik - b.own_loglik;
    }

    MergeChoice choice = PickMerge<kRandomized>(deltas, hp, rng);
    if (choice.stop) break;

    ClusterModel merged;
    {
      const ClusterModel& a = clusters[choice.a];
      const ClusterModel& b = clusters[choice.b];
      MergedPair mp = MergeModels(a, b, s1, s2, hp, w);
      merged.id = next_id++;
      merged.frames = std::move(mp.frames);
      merged.stream1 = std::move(mp.stream1);
      merged.stream2 = std::move(mp.stream2);
      merged.g1 = a.g1 + b.g1;
      merged.g2 = a.g2 + b.g2;
      merged.own_loglik = mp.loglik;
    }
    clusters.erase(clusters.begin() + choice.b);
    clusters.erase(clusters.begin() + choice.a);
    clusters.push_back(std::move(merged));

    // Resegment every frame against the surviving models.
    const int rk = static_cast<int>(clusters.size());
    std::vector<double> emissions(static_cast<size_t>(n) * rk);
    std::vector<double> ld1(n), ld2(n);
    for (int k = 0; k < rk; ++k) {
      kernels::LogDensity(clusters[k].stream1, s1.all.data(), n, ld1.data());
      kernels::LogDensity(clusters[k].stream2, s2.all.data(), n, ld2.data());
      for (int t = 0; t < n; ++t) {
        emissions[static_cast<size_t>(t) * rk + k] =
            w.w1 * ld1[t] + w.w2 * ld2[t];
      }
    }
    std::vector<int> path =
        ViterbiResegment(emissions, n, rk, min_frames, hp.self_loop);

    for (ClusterModel& c : clusters) c.frames.clear();
    for (int t = 0; t < n; ++t) clusters[path[t]].frames.push_back(t);
    clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                  [](const ClusterModel& c) {
                                    return c.frames.empty();
                                  }),
                   clusters.end());

    // Fresh models for everyone: every cluster is re-estimated from its new
    // frames, not just the pair that merged.
    for (ClusterModel& c : clusters) {
      c.stream1 = TrainOn(s1, c.frames, c.g1, hp.em_iters);
      c.stream2 = TrainOn(s2, c.frames, c.g2, hp.em_iters);
      c.own_loglik = OwnLoglik(c, s1, s2, w);
    }
  }

  // Emit clusters ordered by first frame, labeled spk0, spk1, ...
  std::vector<int> order(clusters.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return clusters[a].frames.front() < clusters[b].frames.front();
  });

  DiarizeResult result;
  result.cluster_count = static_cast<int>(clusters.size());
  result.frame_labels.assign(n, -1);
  for (size_t ord = 0; ord < order.size(); ++ord) {
    for (int frame : clusters[order[ord]].frames) {
      result.frame_labels[frame] = static_cast<int>(ord);
    }
  }

  std::vector<Turn> turns;
  int run_start = 0;
  for (int t = 1; t <= n; ++t) {
    if (t == n || result.frame_labels[t] != result.frame_labels[run_start]) {
      Turn turn;
      turn.onset_ms = run_start * f.frame_period_ms;
      turn.duration_ms = (t - run_start) * f.frame_period_ms;
      turn.speaker = "spk" + std::to_string(result.frame_labels[run_start]);
      turns.push_back(std::move(turn));
      run_start = t;
    }
  }
  result.hypothesis = MakeHypothesis(f.recording_id, turns);
  return result;
}

}  // namespace

double CombinedLoglik(const ClusterModel& cluster, const FeatureSequence& f,
                      const std::vector<int>& frames, const Hyperparams& hp) {
  if (f.streams.size() != 2) {
    throw DataError("combined loglik expects two feature streams");
  }
  Weights w = CombineWeights(hp, f.channel_count);
  std::vector<double> buf;
  GatherStream(f, 0, frames, &buf);
  double ll1 = LogLikelihood(cluster.stream1, buf.data(),
                             static_cast<int>(frames.size()));
  GatherStream(f, 1, frames, &buf);
  double ll2 = LogLikelihood(cluster.stream2, buf.data(),
                             static_cast<int>(frames.size()));
  return w.w1 * ll1 + w.w2 * ll2;
}

double MergeDelta(const ClusterModel& x, const ClusterModel& y,
                  const FeatureSequence& f, const Hyperparams& hp) {
  if (f.streams.size() != 2) {
    throw DataError("merge delta expects two feature streams");
  }
  StreamData s1 = ExtractStream(f, 0);
  StreamData s2 = ExtractStream(f, 1);
  Weights w = CombineWeights(hp, f.channel_count);
  const ClusterModel& lo = x.id <= y.id ? x : y;
  const ClusterModel& hi = x.id <= y.id ? y : x;
  MergedPair merged = MergeModels(lo, hi, s1, s2, hp, w);
  return merged.loglik - lo.own_loglik - hi.own_loglik;
}

MergeChoice SelectMerge(std::vector<PairDelta> deltas, const Hyperparams& hp,
                        Rng& rng) {
  if (deltas.empty()) return MergeChoice{};
  SortDeltas(deltas);
  if (!(deltas[0].delta > 0.0)) return MergeChoice{};
  MergeChoice choice{false, deltas[0].a, deltas[0].b};
  if (hp.second_best_prob > 0.0 && deltas.size() >= 2) {
    double d1 = deltas[0].delta;
    double d2 = deltas[1].delta;
    if (d2 > 0.0 && (d1 - d2) / std::abs(d1) <= hp.second_best_window) {
      // The draw happens only when the runner-up is eligible, so disabling
      // the feature leaves the random stream untouched.
      if (rng.Uniform01() < hp.second_best_prob) {
        choice.a = deltas[1].a;
        choice.b = deltas[1].b;
      }
    }
  }
  return choice;
}

MergeChoice SelectMergeBestFirst(std::vector<PairDelta> deltas) {
  if (deltas.empty()) return MergeChoice{};
  SortDeltas(deltas);
  if (!(deltas[0].delta > 0.0)) return MergeChoice{};
  return MergeChoice{false, deltas[0].a, deltas[0].b};
}

std::vector<ClusterModel> InitClusters(const FeatureSequence& f,
                                       const Hyperparams& hp) {
  ValidateHyperparams(hp, f);
  StreamData s1 = ExtractStream(f, 0);
  StreamData s2 = ExtractStream(f, 1);
  Weights w = CombineWeights(hp, f.channel_count);
  return BuildInitialClusters(f, hp, s1, s2, w);
}

std::vector<int> ViterbiResegment(const std::vector<double>& emissions, int T,
                                  int K, int min_frames, double self_loop) {
  if (T < 1 || K < 1) throw DataError("empty resegmentation problem");
  if (emissions.size() != static_cast<size_t>(T) * K) {
    throw DataError("emission matrix size mismatch");
  }
  if (min_frames < 1) throw DataError("min_frames must be positive");
  if (!(self_loop > 0.0 && self_loop < 1.0)) {
    throw DataError("self loop probability must be inside (0, 1)");
  }
  if (K == 1) return std::vector<int>(T, 0);

  const int D = std::min(min_frames, T);
  const double kNeg = -1e300;
  const double sl = std::log(self_loop);
  const double sw = std::log1p(-self_loop) - std::log(static_cast<double>(K - 1));

  auto idx = [D](int k, int s) { return static_cast<size_t>(k) * D + s; };
  std::vector<double> dp(static_cast<size_t>(K) * D, kNeg);
  std::vector<double> ndp(static_cast<size_t>(K) * D, kNeg);
  for (int k = 0; k < K; ++k) dp[idx(k, 0)] = emissions[k];

  // Decisions happen only on chain entry and at the terminal state, so two
  // compact backpointer planes reconstruct the full path.
  std::vector<int16_t> bp_enter(static_cast<size_t>(T) * K, 0);
  std::vector<uint8_t> bp_stay(static_cast<size_t>(T) * K, 0);

  for (int t = 1; t < T; ++t) {
    // Best and runner-up terminal states feed every chain entry.
    int best_k = 0;
    for (int k = 1; k < K; ++k) {
      if (dp[idx(k, D - 1)] > dp[idx(best_k, D - 1)]) best_k = k;
    }
    int second_k = best_k == 0 ? 1 : 0;
    for (int k = 0; k < K; ++k) {
      if (k == best_k) continue;
      if (dp[idx(k, D - 1)] > dp[idx(second_k, D - 1)]) second_k = k;
    }

    const double* em = &emissions[static_cast<size_t>(t) * K];
    for (int k = 0; k < K; ++k) {
      const double e = em[k];
      int j = (k == best_k) ? second_k : best_k;
      if (D == 1) {
        double enter = dp[idx(j, D - 1)] + sw;
        double stay = dp[idx(k, D - 1)] + sl;
        if (stay > enter) {
          ndp[idx(k, 0)] = stay + e;
          bp_stay[static_cast<size_t>(t) * K + k] = 1;
          bp_enter[static_cast<size_t>(t) * K + k] = static_cast<int16_t>(j);
        } else {
          ndp[idx(k, 0)] = enter + e;
          bp_stay[static_cast<size_t>(t) * K + k] = 0;
          bp_enter[static_cast<size_t>(t) * K + k] = static_cast<int16_t>(j);
        }
        continue;
      }
      ndp[idx(k, 0)] = dp[idx(j, D - 1)] + sw + e;
      bp_enter[static_cast<size_t>(t) * K + k] = static_cast<int16_t>(j);
      for (int s = 1; s < D - 1; ++s) {
        ndp[idx(k, s)] = dp[idx(k, s - 1)] + e;
      }
      double stay = dp[idx(k, D - 1)] + sl;
      double adv = dp[idx(k, D - 2)];
      if (stay >= adv) {
        ndp[idx(k, D - 1)] = stay + e;
        bp_stay[static_cast<size_t>(t) * K + k] = 1;
      } else {
        ndp[idx(k, D - 1)] = adv + e;
        bp_stay[static_cast<size_t>(t) * K + k] = 0;
      }
    }
    dp.swap(ndp);
  }

  int bk = 0, bs = 0;
  for (int k = 0; k < K; ++k) {
    for (int s = 0; s < D; ++s) {
      if (dp[idx(k, s)] > dp[idx(bk, bs)]) {
        bk = k;
        bs = s;
      }
    }
  }

  std::vector<int> path(T, 0);
  int k = bk, s = bs;
  for (int t = T - 1; t >= 0; --t) {
    path[t] = k;
    if (t == 0) break;
    if (s == 0 && !(D == 1 && bp_stay[static_cast<size_t>(t) * K + k])) {
      k = bp_enter[static_cast<size_t>(t) * K + k];
      s = D - 1;
    } else if (s == D - 1) {
      s = bp_stay[static_cast<size_t>(t) * K + k] ? D - 1 : D - 2;
    } else {
      s = s - 1;
    }
  }
  return path;
}

DiarizeResult Diarize(const FeatureSequence& features, const Hyperparams& hp) {
  return RunAgglomeration<true>(features, hp);
}

DiarizeResult DiarizeBestFirst(const FeatureSequence& features,
                               const Hyperparams& hp) {
  return RunAgglomeration<false>(features, hp);
}

}  // namespace dovetail
