// Copyright 2026 The tmodule-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tmlab/linalg.hpp"

#include <numeric>
#include <stdexcept>

namespace tmlab {

KSolveResult solve_linear_k(std::vector<KRow> a, std::vector<RatFunc> b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_linear_k: row count mismatch");
  KSolveResult result;
  if (a.empty()) {
    result.solution = std::vector<RatFunc>{};
    return result;
  }
  const std::size_t rows = a.size(), cols = a[0].size();
  const FqCtxPtr ctx = b[0].ctx();
  std::vector<std::size_t> label(rows);
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && a[sel][col].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[row]);
    std::swap(b[sel], b[row]);
    std::swap(label[sel], label[row]);
    const RatFunc inv = a[row][col].inverse();
    for (std::size_t c = col; c < cols; ++c) a[row][c] *= inv;
    b[row] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      const RatFunc f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) {
        if (!a[row][c].is_zero()) a[r][c] -= f * a[row][c];
      }
      b[r] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r) {
    if (!b[r].is_zero()) {
      result.failing_equation = label[r];
      return result;
    }
  }
  std::vector<RatFunc> y(cols, RatFunc(ctx));
  for (std::size_t r = 0; r < pivot_col.size(); ++r) y[pivot_col[r]] = b[r];
  result.solution = std::move(y);
  return result;
}

std::size_t rank_k(std::vector<KRow> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && rows[sel][col].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rank]);
    const RatFunc inv = rows[rank][col].inverse();
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col].is_zero()) continue;
      const RatFunc f = rows[r][col] * inv;
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace tmlab
