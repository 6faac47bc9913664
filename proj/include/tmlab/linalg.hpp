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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tmlab/ratfunc.hpp"

namespace tmlab {

using KRow = std::vector<RatFunc>;

struct KSolveResult {
  std::optional<std::vector<RatFunc>> solution;  // free variables set to zero
  std::size_t failing_equation = 0;             // valid when no solution
};

/// Solves A y = b over K by Gauss-Jordan elimination with first-nonzero
/// pivoting.
KSolveResult solve_linear_k(std::vector<KRow> a, std::vector<RatFunc> b);

/// Rank over K of the given rows.
std::size_t rank_k(std::vector<KRow> rows);

}  // namespace tmlab
