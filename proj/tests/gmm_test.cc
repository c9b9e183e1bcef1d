// tests/gmm_test.cc

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

#include <cmath>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "dovetail/common.h"
#include "dovetail/rng.h"

namespace dovetail {
namespace {

std::vector<double> RandomFrames(uint64_t seed, int n, int dim) {
  Rng rng(seed);
  std::vector<double> x(static_cast<size_t>(n) * dim);
  for (double& v : x) v = rng.Normal() * 3.0 + rng.Uniform01();
  return x;
}

GmmModel RandomModel(uint64_t seed, int g, int dim) {
  Rng rng(seed);
  GmmModel m;
  m.dim = dim;
  m.comps.resize(g);
  double wsum = 0.0;
  for (GmmComponent& c : m.comps) {
    c.weight = 0.2 + rng.Uniform01();
    wsum += c.weight;
    for (int d = 0; d < dim; ++d) {
      c.mean.push_back(rng.Normal() * 2.0);
      c.var.push_back(0.3 + rng.Uniform01());
    }
  }
  for (GmmComponent& c : m.comps) c.weight /= wsum;
  return m;
}

bool SameStats(const EmStats& a, const EmStats& b) {
  return a.loglik == b.loglik && a.nk == b.nk && a.mean_acc == b.mean_acc &&
         a.var_acc == b.var_acc;
}

TEST_CASE("single Gaussian log density matches the closed form") {
  GmmModel m;
  m.dim = 2;
  m.comps = {{1.0, {1.0, -2.0}, {0.5, 2.0}}};
  double x[2] = {1.5, -1.0};
  double got = 0.0;
  kernels::serial::LogDensity(m, x, 1, &got);
  const double two_pi = 2.0 * std::acos(-1.0);
  double want = -0.5 * (2.0 * std::log(two_pi) + std::log(0.5) +
                        std::log(2.0)) -
                0.5 * 0.5 / (2.0 * 0.5) - 1.0 * 1.0 / (2.0 * 2.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("serial and parallel kernels agree") {
  const int dim = 3, g = 3;
  GmmModel m = RandomModel(7, g, dim);

  SUBCASE("within one chunk the paths are bit identical") {
    const int n = 900;
    std::vector<double> x = RandomFrames(8, n, dim);
    std::vector<double> a(n), b(n);
    kernels::serial::LogDensity(m, x.data(), n, a.data());
    kernels::LogDensity(m, x.data(), n, b.data());
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

    EmStats sa = kernels::serial::EmAccumulate(m, x.data(), n);
    EmStats sb = kernels::EmAccumulate(m, x.data(), n);
    CHECK(SameStats(sa, sb));
    CHECK(kernels::serial::PlainSum(a.data(), n) ==
          kernels::ChunkSum(a.data(), n));
  }

  SUBCASE("across chunks the paths agree to rounding") {
    const int n = 2500;
    std::vector<double> x = RandomFrames(9, n, dim);
    std::vector<double> a(n), b(n);
    kernels::serial::LogDensity(m, x.data(), n, a.data());
    kernels::LogDensity(m, x.data(), n, b.data());
    // Per-frame work is identical; only reductions reorder.
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

    EmStats sa = kernels::serial::EmAccumulate(m, x.data(), n);
    EmStats sb = kernels::EmAccumulate(m, x.data(), n);
    CHECK(sb.loglik == doctest::Approx(sa.loglik).epsilon(1e-12));
    for (int c = 0; c < g; ++c) {
      CHECK(sb.nk[c] == doctest::Approx(sa.nk[c]).epsilon(1e-12));
    }
    for (size_t k = 0; k < sa.mean_acc.size(); ++k) {
      CHECK(sb.mean_acc[k] == doctest::Approx(sa.mean_acc[k]).epsilon(1e-12));
      CHECK(sb.var_acc[k] ==
            doctest::Approx(sa.var_acc[k]).epsilon(1e-12).scale(1.0));
    }
    CHECK(kernels::ChunkSum(a.data(), n) ==
          doctest::Approx(kernels::serial::PlainSum(a.data(), n))
              .epsilon(1e-12));
  }
}

#ifdef _OPENMP
TEST_CASE("parallel kernels do not depend on the thread count") {
  const int dim = 3, g = 4, n = 5000;
  GmmModel m = RandomModel(11, g, dim);
  std::vector<double> x = RandomFrames(12, n, dim);
  int saved = omp_get_max_threads();

  omp_set_num_threads(1);
  std::vector<double> base_ld(n);
  kernels::LogDensity(m, x.data(), n, base_ld.data());
  EmStats base_stats = kernels::EmAccumulate(m, x.data(), n);
  double base_sum = kernels::ChunkSum(base_ld.data(), n);

  for (int threads : {2, 3, 8}) {
    omp_set_num_threads(threads);
    std::vector<double> ld(n);
    kernels::LogDensity(m, x.data(), n, ld.data());
    CHECK(std::memcmp(ld.data(), base_ld.data(), n * sizeof(double)) == 0);
    CHECK(SameStats(kernels::EmAccumulate(m, x.data(), n), base_stats));
    CHECK(kernels::ChunkSum(ld.data(), n) == base_sum);
  }
  omp_set_num_threads(saved);
}
#endif

TEST_CASE("responsibilities in one E-step sum to the frame count") {
  const int dim = 2, g = 3, n = 1500;
  GmmModel m = RandomModel(21, g, dim);
  std::vector<double> x = RandomFrames(22, n, dim);
  EmStats s = kernels::EmAccumulate(m, x.data(), n);
  double total = 0.0;
  for (double v : s.nk) total += v;
  CHECK(total == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
}

TEST_CASE("one-component training recovers mean and biased variance") {
  const int dim = 2, n = 640;
  std::vector<double> x = RandomFrames(31, n, dim);
  std::vector<double> floor = VarianceFloor(x.data(), n, dim);
  GmmModel m = TrainGmm(x.data(), n, dim, 1, 20, floor);
  REQUIRE(m.Size() == 1);
  CHECK(m.comps[0].weight == 1.0);
  for (int d = 0; d < dim; ++d) {
    double mean = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      mean += x[static_cast<size_t>(i) * dim + d];
      sq += x[static_cast<size_t>(i) * dim + d] * x[static_cast<size_t>(i) * dim + d];
    }
    mean /= n;
    double var = sq / n - mean * mean;
    CHECK(m.comps[0].mean[d] == doctest::Approx(mean).epsilon(1e-12));
    CHECK(m.comps[0].var[d] == doctest::Approx(var).epsilon(1e-10));
  }
}

TEST_CASE("EM never lowers the data log likelihood") {
  const int dim = 2, n = 800;
  std::vector<double> x = RandomFrames(41, n, dim);
  std::vector<double> floor = VarianceFloor(x.data(), n, dim);
  GmmModel init = QuantileInit(x.data(), n, dim, 4, floor);
  double prev = LogLikelihood(init, x.data(), n);
  for (int iters = 1; iters <= 6; ++iters) {
    GmmModel m = EmTrain(init, x.data(), n, iters, floor);
    double ll = LogLikelihood(m, x.data(), n);
    CHECK(ll >= prev - 1e-9 * std::abs(prev));
    prev = ll;
  }
}

TEST_CASE("two well separated modes are recovered") {
  Rng rng(51);
  const int n = 600;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = (i % 2 == 0) ? rng.Normal() * 0.5 : 10.0 + rng.Normal() * 0.5;
  }
  std::vector<double> floor = VarianceFloor(x.data(), n, 1);
  GmmModel m = TrainGmm(x.data(), n, 1, 2, 30, floor);
  REQUIRE(m.Size() == 2);
  double lo = std::min(m.comps[0].mean[0], m.comps[1].mean[0]);
  double hi = std::max(m.comps[0].mean[0], m.comps[1].mean[0]);
  CHECK(std::abs(lo) < 0.15);
  CHECK(std::abs(hi - 10.0) < 0.15);
  CHECK(std::abs(m.comps[0].weight - 0.5) < 0.05);
  CHECK(std::abs(m.comps[0].var[0] - 0.25) < 0.1);
  CHECK(std::abs(m.comps[1].var[0] - 0.25) < 0.1);
}

TEST_CASE("constant data hits the variance floor") {
  std::vector<double> x(200, 4.25);
  std::vector<double> floor = VarianceFloor(x.data(), 200, 1);
  CHECK(floor[0] == kFloorAbs);
  GmmModel m = TrainGmm(x.data(), 200, 1, 1, 10, floor);
  CHECK(m.comps[0].var[0] == kFloorAbs);
  CHECK(m.comps[0].mean[0] == doctest::Approx(4.25).epsilon(1e-14));
}

TEST_CASE("quantile initialization is deterministic and spreads means") {
  const int dim = 2, n = 500;
  // Dimension 1 has by far the larger spread, so means must fan out there.
  std::vector<double> x(static_cast<size_t>(n) * dim);
  Rng rng(61);
  for (int i = 0; i < n; ++i) {
    x[static_cast<size_t>(i) * dim] = rng.Uniform01() * 0.01;
    x[static_cast<size_t>(i) * dim + 1] = rng.Uniform01() * 100.0;
  }
  std::vector<double> floor = VarianceFloor(x.data(), n, dim);
  GmmModel a = QuantileInit(x.data(), n, dim, 4, floor);
  GmmModel b = QuantileInit(x.data(), n, dim, 4, floor);
  REQUIRE(a.Size() == 4);
  for (int c = 0; c < 4; ++c) {
    CHECK(a.comps[c].weight == 0.25);
    CHECK(a.comps[c].mean == b.comps[c].mean);
    CHECK(a.comps[c].var == b.comps[c].var);
    if (c > 0) CHECK(a.comps[c].mean[1] > a.comps[c - 1].mean[1]);
  }
  CHECK_THROWS_AS(QuantileInit(x.data(), 0, dim, 2, floor), DataError);
  CHECK_THROWS_AS(QuantileInit(x.data(), n, dim, 0, floor), DataError);
}

TEST_CASE("component count is capped by the frame count") {
  std::vector<double> x = {1.0, 2.0};
  std::vector<double> floor = VarianceFloor(x.data(), 2, 1);
  GmmModel m = TrainGmm(x.data(), 2, 1, 5, 10, floor);
  CHECK(m.Size() == 2);
}

TEST_CASE("pooled models rescale weights by data share") {
  GmmModel a;
  a.dim = 1;
  a.comps = {{0.6, {0.0}, {1.0}}, {0.4, {1.0}, {1.0}}};
  GmmModel b;
  b.dim = 1;
  b.comps = {{1.0, {5.0}, {1.0}}};
  GmmModel pooled = PoolModels(a, 3000, b, 1000);
  REQUIRE(pooled.Size() == 3);
  CHECK(pooled.comps[0].weight == doctest::Approx(0.45).epsilon(1e-14));
  CHECK(pooled.comps[1].weight == doctest::Approx(0.30).epsilon(1e-14));
  CHECK(pooled.comps[2].weight == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(pooled.comps[2].mean[0] == 5.0);

  GmmModel wrong_dim;
  wrong_dim.dim = 2;
  wrong_dim.comps = {{1.0, {0.0, 0.0}, {1.0, 1.0}}};
  CHECK_THROWS_AS(PoolModels(a, 10, wrong_dim, 10), DataError);
  CHECK_THROWS_AS(PoolModels(a, 0, b, 10), DataError);
}

TEST_CASE("empty input has zero log likelihood") {
  GmmModel m = RandomModel(71, 2, 1);
  CHECK(LogLikelihood(m, nullptr, 0) == 0.0);
}

}  // namespace
}  // namespace dovetail
