// dovetail/gmm.h

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

#ifndef DOVETAIL_GMM_H_
#define DOVETAIL_GMM_H_

#include <cstdint>
#include <vector>

namespace dovetail {

struct GmmComponent {
  double weight = 1.0;
  std::vector<double> mean;
  std::vector<double> var;  // diagonal covariance
};

struct GmmModel {
  int dim = 0;
  std::vector<GmmComponent> comps;

  int Size() const { return static_cast<int>(comps.size()); }
};

// Variances are clamped from below at max(kFloorRel * global per-dimension
// variance, kFloorAbs); the global variance comes from the whole recording,
// not the cluster, so small clusters cannot collapse.
inline constexpr double kFloorRel = 1e-3;
inline constexpr double kFloorAbs = 1e-8;

// EM stops early when the log likelihood gain drops below this fraction of
// the previous value.
inline constexpr double kEmRelTol = 1e-7;

std::vector<double> VarianceFloor(const double* x, int n, int dim);

// Sufficient statistics of one EM E-step plus the data log likelihood under
// the current model. mean_acc and var_acc are g x dim, row-major.
struct EmStats {
  double loglik = 0.0;
  std::vector<double> nk;
  std::vector<double> mean_acc;
  std::vector<double> var_acc;
};

// Frame-level kernels. The parallel versions are the production path; the
// serial ones are the reference implementation used by tests and the
// benchmark. Parallel reductions accumulate fixed-size chunks and combine
// the partials in chunk order, so results do not depend on the thread count.
namespace kernels {

inline constexpr int kChunkFrames = 1024;

void LogDensity(const GmmModel& m, const double* x, int n, double* out);
double ChunkSum(const double* v, int n);
EmStats EmAccumulate(const GmmModel& m, const double* x, int n);

namespace serial {
void LogDensity(const GmmModel& m, const double* x, int n, double* out);
double PlainSum(const double* v, int n);
EmStats EmAccumulate(const GmmModel& m, const double* x, int n);
}  // namespace serial

}  // namespace kernels

// Sum of per-frame log densities, parallel kernels underneath.
double LogLikelihood(const GmmModel& m, const double* x, int n);

// Deterministic initialization: means are placed at evenly spaced quantiles
// along the dimension with the largest variance, every component starts from
// the global diagonal variance and weight 1/g. No randomness is consumed.
GmmModel QuantileInit(const double* x, int n, int dim, int g,
                      const std::vector<double>& floor);

// EM refinement of `init`, at most max_iters iterations, early stop on
// kEmRelTol. Update order per iteration: accumulate, check convergence
// against the previous log likelihood, then re-estimate weights, means and
// floored ML variances.
GmmModel EmTrain(const GmmModel& init, const double* x, int n, int max_iters,
                 const std::vector<double>& floor);

// QuantileInit followed by EmTrain. `seed` is part of the interface for
// callers that configure seeded pipelines; the implementation is fully
// deterministic and does not consume it.
GmmModel TrainGmm(const double* x, int n, int dim, int g, int max_iters,
                  const std::vector<double>& floor, uint64_t seed = 0);

// Union model: components of both inputs with weights rescaled by their data
// share. Starting point for re-estimating a merge candidate.
GmmModel PoolModels(const GmmModel& a, int64_t na, const GmmModel& b, int64_t nb);

}  // namespace dovetail

#endif  // DOVETAIL_GMM_H_
