// dovetail/gmm.cc

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

#include "dovetail/gmm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dovetail/common.h"

namespace dovetail {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

// Flattened per-component constants: lp_c(x) = cst[c] - sum_d
// (x_d - mean[c][d])^2 * hprec[c][d], with hprec = 1 / (2 var).
struct Prepared {
  int g = 0;
  int dim = 0;
  std::vector<double> cst;
  std::vector<double> mean;
  std::vector<double> hprec;
};

Prepared Prepare(const GmmModel& m) {
  Prepared p;
  p.g = m.Size();
  p.dim = m.dim;
  p.cst.resize(p.g);
  p.mean.resize(static_cast<size_t>(p.g) * p.dim);
  p.hprec.resize(static_cast<size_t>(p.g) * p.dim);
  for (int c = 0; c < p.g; ++c) {
    const GmmComponent& comp = m.comps[c];
    double cst = std::log(comp.weight);
    for (int d = 0; d < p.dim; ++d) {
      cst -= 0.5 * (kLog2Pi + std::log(comp.var[d]));
      p.mean[static_cast<size_t>(c) * p.dim + d] = comp.mean[d];
      p.hprec[static_cast<size_t>(c) * p.dim + d] = 0.5 / comp.var[d];
    }
    p.cst[c] = cst;
  }
  return p;
}

double FrameLogDensity(const Prepared& p, const double* row,
                       std::vector<double>& lp) {
  for (int c = 0; c < p.g; ++c) {
    const double* mean = &p.mean[static_cast<size_t>(c) * p.dim];
    const double* hprec = &p.hprec[static_cast<size_t>(c) * p.dim];
    double acc = p.cst[c];
    for (int d = 0; d < p.dim; ++d) {
      double diff = row[d] - mean[d];
      acc -= diff * diff * hprec[d];
    }
    lp[c] = acc;
  }
  double m = lp[0];
  for (int c = 1; c < p.g; ++c) m = std::max(m, lp[c]);
  double s = 0.0;
  for (int c = 0; c < p.g; ++c) s += std::exp(lp[c] - m);
  return m + std::log(s);
}

// One frame of E-step accumulation into nk / mean_acc / var_acc; returns the
// frame log density.
double FrameAccumulate(const Prepared& p, const double* row,
                       std::vector<double>& lp, double* nk, double* mean_acc,
                       double* var_acc) {
  double ld = FrameLogDensity(p, row, lp);
  for (int c = 0; c < p.g; ++c) {
    double r = std::exp(lp[c] - ld);
    nk[c] += r;
    double* ma = mean_acc + static_cast<size_t>(c) * p.dim;
    double* va = var_acc + static_cast<size_t>(c) * p.dim;
    for (int d = 0; d < p.dim; ++d) {
      double v = row[d];
      ma[d] += r * v;
      va[d] += r * v * v;
    }
  }
  return ld;
}

}  // namespace

std::vector<double> VarianceFloor(const double* x, int n, int dim) {
  if (n < 1) throw DataError("variance floor needs at least one frame");
  std::vector<double> mean(dim, 0.0), sq(dim, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = x + static_cast<size_t>(i) * dim;
    for (int d = 0; d < dim; ++d) {
      mean[d] += row[d];
      sq[d] += row[d] * row[d];
    }
  }
  std::vector<double> floor(dim);
  for (int d = 0; d < dim; ++d) {
    mean[d] /= n;
    double var = sq[d] / n - mean[d] * mean[d];
    floor[d] = std::max(kFloorRel * var, kFloorAbs);
  }
  return floor;
}

namespace kernels {

namespace serial {

void LogDensity(const GmmModel& m, const double* x, int n, double* out) {
  Prepared p = Prepare(m);
  std::vector<double> lp(p.g);
  for (int i = 0; i < n; ++i) {
    out[i] = FrameLogDensity(p, x + static_cast<size_t>(i) * p.dim, lp);
  }
}

double PlainSum(const double* v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i];
  return s;
}

EmStats EmAccumulate(const GmmModel& m, const double* x, int n) {
  Prepared p = Prepare(m);
  EmStats stats;
  stats.nk.assign(p.g, 0.0);
  stats.mean_acc.assign(static_cast<size_t>(p.g) * p.dim, 0.0);
  stats.var_acc.assign(static_cast<size_t>(p.g) * p.dim, 0.0);
  std::vector<double> lp(p.g);
  for (int i = 0; i < n; ++i) {
    stats.loglik += FrameAccumulate(p, x + static_cast<size_t>(i) * p.dim, lp,
                                    stats.nk.data(), stats.mean_acc.data(),
                                    stats.var_acc.data());
  }
  return stats;
}

}  // namespace serial

void LogDensity(const GmmModel& m, const double* x, int n, double* out) {
  Prepared p = Prepare(m);
#pragma omp parallel
  {
    std::vector<double> lp(p.g);
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      out[i] = FrameLogDensity(p, x + static_cast<size_t>(i) * p.dim, lp);
    }
  }
}

// Fixed-size chunks with an ordered combine make the result independent of
// the thread count.
double ChunkSum(const double* v, int n) {
  const int chunks = (n + kChunkFrames - 1) / kChunkFrames;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < chunks; ++c) {
    int lo = c * kChunkFrames;
    int hi = std::min(n, lo + kChunkFrames);
    double s = 0.0;
    for (int i = lo; i < hi; ++i) s += v[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (int c = 0; c < chunks; ++c) total += partial[c];
  return total;
}

EmStats EmAccumulate(const GmmModel& m, const double* x, int n) {
  Prepared p = Prepare(m);
  const int chunks = (n + kChunkFrames - 1) / kChunkFrames;
  const size_t gd = static_cast<size_t>(p.g) * p.dim;

  std::vector<double> part_ll(chunks, 0.0);
  std::vector<double> part_nk(static_cast<size_t>(chunks) * p.g, 0.0);
  std::vector<double> part_mean(static_cast<size_t>(chunks) * gd, 0.0);
  std::vector<double> part_var(static_cast<size_t>(chunks) * gd, 0.0);

#pragma omp parallel
  {
    std::vector<double> lp(p.g);
#pragma omp for schedule(static)
    for (int c = 0; c < chunks; ++c) {
      int lo = c * kChunkFrames;
      int hi = std::min(n, lo + kChunkFrames);
      double ll = 0.0;
      double* nk = &part_nk[static_cast<size_t>(c) * p.g];
      double* ma = &part_mean[static_cast<size_t>(c) * gd];
      double* va = &part_var[static_cast<size_t>(c) * gd];
      for (int i = lo; i < hi; ++i) {
        ll += FrameAccumulate(p, x + static_cast<size_t>(i) * p.dim, lp, nk, ma, va);
      }
      part_ll[c] = ll;
    }
  }

  EmStats stats;
  stats.nk.assign(p.g, 0.0);
  stats.mean_acc.assign(gd, 0.0);
  stats.var_acc.assign(gd, 0.0);
  for (int c = 0; c < chunks; ++c) {
    stats.loglik += part_ll[c];
    for (int k = 0; k < p.g; ++k) {
      stats.nk[k] += part_nk[static_cast<size_t>(c) * p.g + k];
    }
    for (size_t k = 0; k < gd; ++k) {
      stats.mean_acc[k] += part_mean[static_cast<size_t>(c) * gd + k];
      stats.var_acc[k] += part_var[static_cast<size_t>(c) * gd + k];
    }
  }
  return stats;
}

}  // namespace kernels

double LogLikelihood(const GmmModel& m, const double* x, int n) {
  if (n == 0) return 0.0;
  std::vector<double> ld(n);
  kernels::LogDensity(m, x, n, ld.data());
  return kernels::ChunkSum(ld.data(), n);
}

GmmModel QuantileInit(const double* x, int n, int dim, int g,
                      const std::vector<double>& floor) {
  if (n < 1) throw DataError("cannot initialize a GMM without frames");
  if (g < 1) throw DataError("component count must be positive");

  std::vector<double> mean(dim, 0.0), sq(dim, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = x + static_cast<size_t>(i) * dim;
    for (int d = 0; d < dim; ++d) {
      mean[d] += row[d];
      sq[d] += row[d] * row[d];
    }
  }
  std::vector<double> var(dim);
  int key = 0;
  for (int d = 0; d < dim; ++d) {
    mean[d] /= n;
    var[d] = std::max(sq[d] / n - mean[d] * mean[d], floor[d]);
    if (var[d] > var[key]) key = d;
  }

  // Means at the (c + 0.5) / g quantiles of the widest dimension. Stable by
  // (value, index) so duplicates cannot reorder.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double va = x[static_cast<size_t>(a) * dim + key];
    double vb = x[static_cast<size_t>(b) * dim + key];
    if (va != vb) return va < vb;
    return a < b;
  });

  GmmModel model;
  model.dim = dim;
  model.comps.resize(g);
  for (int c = 0; c < g; ++c) {
    int pick = order[static_cast<size_t>((c + 0.5) * n / g)];
    GmmComponent& comp = model.comps[c];
    comp.weight = 1.0 / g;
    comp.mean.assign(x + static_cast<size_t>(pick) * dim,
                     x + static_cast<size_t>(pick + 1) * dim);
    comp.var = var;
  }
  return model;
}

GmmModel EmTrain(const GmmModel& init, const double* x, int n, int max_iters,
                 const std::vector<double>& floor) {
  GmmModel model = init;
  const int dim = model.dim;
  double prev = 0.0;
  bool have_prev = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    EmStats stats = kernels::EmAccumulate(model, x, n);
    if (have_prev && stats.loglik - prev < kEmRelTol * std::abs(prev)) break;
    prev = stats.loglik;
    have_prev = true;
    for (int c = 0; c < model.Size(); ++c) {
      // The tiny guard keeps empty components finite; their weight decays
      // to nothing instead of producing NaNs.
      double nc = stats.nk[c] + 1e-300;
      GmmComponent& comp = model.comps[c];
      comp.weight = nc / n;
      for (int d = 0; d < dim; ++d) {
        double m1 = stats.mean_acc[static_cast<size_t>(c) * dim + d] / nc;
        double m2 = stats.var_acc[static_cast<size_t>(c) * dim + d] / nc;
        comp.mean[d] = m1;
        comp.var[d] = std::max(m2 - m1 * m1, floor[d]);
      }
    }
  }
  return model;
}

GmmModel TrainGmm(const double* x, int n, int dim, int g, int max_iters,
                  const std::vector<double>& floor, uint64_t seed) {
  (void)seed;  // initialization is deterministic, see QuantileInit
  int g_eff = std::max(1, std::min(g, n));
  return EmTrain(QuantileInit(x, n, dim, g_eff, floor), x, n, max_iters, floor);
}

GmmModel PoolModels(const GmmModel& a, int64_t na, const GmmModel& b, int64_t nb) {
  if (a.dim != b.dim) throw DataError("cannot pool GMMs of different dims");
  if (na < 1 || nb < 1) throw DataError("pooled GMMs need positive data counts");
  GmmModel out;
  out.dim = a.dim;
  double total = static_cast<double>(na + nb);
  for (const GmmComponent& c : a.comps) {
    out.comps.push_back(c);
    out.comps.back().weight = c.weight * (static_cast<double>(na) / total);
  }
  for (const GmmComponent& c : b.comps) {
    out.comps.push_back(c);
    out.comps.back().weight = c.weight * (static_cast<double>(nb) / total);
  }
  return out;
}

}  // namespace dovetail
