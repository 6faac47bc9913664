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
#include <utility>
#include <vector>

#include "tmlab/poly.hpp"

namespace tmlab {

struct Factor {
  FqPoly poly;
  std::uint32_t multiplicity;
};

/// All monic irreducible polynomials of exact degree `degree` over the field
/// of `ctx`, in increasing order. Built once per (field, degree) and cached.
const std::vector<FqPoly>& monic_irreducibles(const FqCtxPtr& ctx, std::uint32_t degree);

/// Trial division by every monic irreducible of degree <= deg(f)/2.
bool is_irreducible(const FqPoly& f);

/// Factorization into monic irreducibles with multiplicities, sorted by
/// (degree, polynomial). The leading unit is dropped. Throws FieldError on
/// zero input.
std::vector<Factor> poly_factor(const FqPoly& f);

}  // namespace tmlab
