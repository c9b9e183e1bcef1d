// dovetail/assign.cc

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

#include "dovetail/assign.h"

#include <algorithm>
#include <limits>
#include <set>

#include "dovetail/common.h"
#include "dovetail/timeline.h"

namespace dovetail {

namespace detail {

// Shortest augmenting path formulation with potentials. Internally minimizes
// cost = maxcell - value on a square matrix padded with zero-value cells, so
// the minimum cost matching is exactly the maximum value matching.
int64_t HungarianMax(const std::vector<int64_t>& cells, int rows, int cols,
                     std::vector<int>* row_to_col) {
  if (row_to_col) row_to_col->assign(rows, -1);
  if (rows == 0 || cols == 0) return 0;

  const int s = std::max(rows, cols);
  int64_t maxcell = 0;
  for (int64_t v : cells) maxcell = std::max(maxcell, v);

  auto value = [&](int r, int c) -> int64_t {
    return (r < rows && c < cols) ? cells[static_cast<size_t>(r) * cols + c] : 0;
  };
  auto cost = [&](int r, int c) -> int64_t { return maxcell - value(r, c); };

  const int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  // 1-based working arrays; p[j] is the row matched to column j.
  std::vector<int64_t> u(s + 1, 0), v(s + 1, 0), minv(s + 1);
  std::vector<int> p(s + 1, 0), way(s + 1, 0);
  std::vector<char> used(s + 1);

  for (int i = 1; i <= s; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      int64_t delta = kInf;
      for (int j = 1; j <= s; ++j) {
        if (used[j]) continue;
        int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= s; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  int64_t total = 0;
  for (int j = 1; j <= s; ++j) {
    int r = p[j] - 1, c = j - 1;
    if (r < rows && c < cols) {
      total += value(r, c);
      if (row_to_col) (*row_to_col)[r] = c;
    }
  }
  return total;
}

}  // namespace detail

namespace {

// Best achievable total when the rows in skip_r and columns in skip_c are
// already spoken for.
int64_t BestRemainder(const OverlapMatrix& m, const std::vector<char>& skip_r,
                      const std::vector<char>& skip_c) {
  std::vector<int> rmap, cmap;
  for (size_t r = 0; r < m.row_labels.size(); ++r)
    if (!skip_r[r]) rmap.push_back(static_cast<int>(r));
  for (size_t c = 0; c < m.col_labels.size(); ++c)
    if (!skip_c[c]) cmap.push_back(static_cast<int>(c));
  std::vector<int64_t> sub(rmap.size() * cmap.size());
  for (size_t r = 0; r < rmap.size(); ++r)
    for (size_t c = 0; c < cmap.size(); ++c)
      sub[r * cmap.size() + c] = m.At(rmap[r], cmap[c]);
  return detail::HungarianMax(sub, static_cast<int>(rmap.size()),
                              static_cast<int>(cmap.size()), nullptr);
}

}  // namespace

const std::string* LabelMapping::Target(const std::string& row_label) const {
  for (const auto& [row, col] : pairs) {
    if (row == row_label) return &col;
  }
  return nullptr;
}

LabelMapping OptimalAssignment(const OverlapMatrix& m) {
  const int rows = static_cast<int>(m.row_labels.size());
  const int cols = static_cast<int>(m.col_labels.size());
  LabelMapping out;

  const int64_t best_total = detail::HungarianMax(m.cells, rows, cols, nullptr);

  // Fix pairs greedily in (row, col) order. A pair is kept when forcing it,
  // together with everything fixed so far, still reaches the optimum. This
  // yields the lexicographically smallest optimal pair list.
  std::vector<char> skip_r(rows, 0), skip_c(cols, 0);
  int64_t fixed_sum = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (skip_c[c] || m.At(r, c) <= 0) continue;
      skip_r[r] = 1;
      skip_c[c] = 1;
      int64_t with_pair = fixed_sum + m.At(r, c) + BestRemainder(m, skip_r, skip_c);
      if (with_pair == best_total) {
        fixed_sum += m.At(r, c);
        out.pairs.emplace_back(m.row_labels[r], m.col_labels[c]);
        break;  // row r is done
      }
      skip_r[r] = 0;
      skip_c[c] = 0;
    }
  }
  for (int r = 0; r < rows; ++r) {
    if (!skip_r[r]) out.unmapped.push_back(m.row_labels[r]);
  }
  return out;
}

int64_t AssignmentTotal(const OverlapMatrix& m, const LabelMapping& mapping) {
  int64_t total = 0;
  for (const auto& [row, col] : mapping.pairs) {
    auto rit = std::find(m.row_labels.begin(), m.row_labels.end(), row);
    auto cit = std::find(m.col_labels.begin(), m.col_labels.end(), col);
    if (rit == m.row_labels.end() || cit == m.col_labels.end()) {
      throw DataError("mapping pair (" + row + ", " + col +
                      ") not present in the matrix");
    }
    total += m.At(static_cast<int>(rit - m.row_labels.begin()),
                  static_cast<int>(cit - m.col_labels.begin()));
  }
  return total;
}

OverlapMatrix BuildOverlapMatrix(const Hypothesis& rows, const Hypothesis& cols) {
  OverlapMatrix m;
  m.row_labels = rows.Labels();
  m.col_labels = cols.Labels();
  m.cells.assign(m.row_labels.size() * m.col_labels.size(), 0);
  for (size_t r = 0; r < m.row_labels.size(); ++r) {
    for (size_t c = 0; c < m.col_labels.size(); ++c) {
      m.At(static_cast<int>(r), static_cast<int>(c)) =
          OverlapDuration(rows, m.row_labels[r], cols, m.col_labels[c]);
    }
  }
  return m;
}

LabelMapping MapPairwise(const Hypothesis& src, const Hypothesis& anchor) {
  return OptimalAssignment(BuildOverlapMatrix(src, anchor));
}

std::vector<Hypothesis> MapIncremental(const std::vector<Hypothesis>& hyps) {
  std::vector<Hypothesis> out;
  if (hyps.empty()) return out;
  for (size_t i = 1; i < hyps.size(); ++i) {
    if (hyps[i].recording_id != hyps[0].recording_id) {
      throw DataError("mixed recording ids: '" + hyps[0].recording_id +
                      "' vs '" + hyps[i].recording_id + "'");
    }
  }

  out.push_back(hyps[0]);
  std::set<std::string> used;
  for (const std::string& l : hyps[0].Labels()) used.insert(l);

  for (size_t i = 1; i < hyps.size(); ++i) {
    OverlapMatrix m;
    m.row_labels = hyps[i].Labels();
    // Consensus label space so far, sorted for a stable column order.
    std::set<std::string> space;
    for (const Hypothesis& prev : out)
      for (const std::string& l : prev.Labels()) space.insert(l);
    m.col_labels.assign(space.begin(), space.end());
    m.cells.assign(m.row_labels.size() * m.col_labels.size(), 0);
    for (size_t r = 0; r < m.row_labels.size(); ++r) {
      for (size_t c = 0; c < m.col_labels.size(); ++c) {
        int64_t total = 0;
        for (const Hypothesis& prev : out) {
          if (!prev.HasLabel(m.col_labels[c])) continue;
          total += OverlapDuration(hyps[i], m.row_labels[r], prev, m.col_labels[c]);
        }
        m.At(static_cast<int>(r), static_cast<int>(c)) = total;
      }
    }
    LabelMapping mapping = OptimalAssignment(m);

    // Unmatched labels keep their own name, qualified by position so they
    // cannot collide with anything already in the consensus space.
    std::vector<std::pair<std::string, std::string>> rename;
    for (const std::string& row : m.row_labels) {
      const std::string* target = mapping.Target(row);
      std::string name;
      if (target) {
        name = *target;
      } else {
        name = row + "@" + std::to_string(i);
        int salt = 2;
        while (used.count(name)) {
          name = row + "@" + std::to_string(i) + "." + std::to_string(salt++);
        }
      }
      rename.emplace_back(row, name);
    }
    Hypothesis mapped = hyps[i];
    for (Turn& t : mapped.turns) {
      for (const auto& [from, to] : rename) {
        if (t.speaker == from) {
          t.speaker = to;
          break;
        }
      }
    }
    NormalizeHypothesis(mapped);
    for (const std::string& l : mapped.Labels()) used.insert(l);
    out.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace dovetail
