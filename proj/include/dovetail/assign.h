// dovetail/assign.h

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

#ifndef DOVETAIL_ASSIGN_H_
#define DOVETAIL_ASSIGN_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dovetail/turns.h"

namespace dovetail {

// Overlap durations in milliseconds between row labels and column labels.
struct OverlapMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<int64_t> cells;  // row-major

  int64_t At(int r, int c) const {
    return cells[static_cast<size_t>(r) * col_labels.size() + c];
  }
  int64_t& At(int r, int c) {
    return cells[static_cast<size_t>(r) * col_labels.size() + c];
  }
};

// Row label to column label pairing. `pairs` is sorted by row label position
// in the matrix; rows without a partner sit in `unmapped` in matrix order.
struct LabelMapping {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> unmapped;

  const std::string* Target(const std::string& row_label) const;
};

// Maximum-total assignment. Pairs with zero overlap are never formed; such
// rows stay unmapped. When several assignments reach the optimum, the pair
// list that is lexicographically smallest by (row index, column index) wins,
// which keeps results stable under tie conditions.
LabelMapping OptimalAssignment(const OverlapMatrix& m);

int64_t AssignmentTotal(const OverlapMatrix& m, const LabelMapping& mapping);

// Rows = labels of `rows` hypothesis, columns = labels of `cols` hypothesis,
// cells = overlap durations.
OverlapMatrix BuildOverlapMatrix(const Hypothesis& rows, const Hypothesis& cols);

// Maps labels of `src` onto labels of `anchor` by overlap.
LabelMapping MapPairwise(const Hypothesis& src, const Hypothesis& anchor);

// Incremental label agreement across an ordered ensemble. The first
// hypothesis keeps its labels; every later one is matched against the
// aggregated overlap with all previously mapped hypotheses and rewritten
// into the shared label space. Labels without any overlap keep their own
// name, qualified with the hypothesis position to stay unique.
std::vector<Hypothesis> MapIncremental(const std::vector<Hypothesis>& hyps);

namespace detail {

// Max-sum rectangular assignment on int64 cells, O(n^3). Returns the best
// total and fills row_to_col with -1 for unassigned rows. Zero cells may be
// matched here; callers that forbid them strip such pairs afterwards.
int64_t HungarianMax(const std::vector<int64_t>& cells, int rows, int cols,
                     std::vector<int>* row_to_col);

}  // namespace detail

}  // namespace dovetail

#endif  // DOVETAIL_ASSIGN_H_
