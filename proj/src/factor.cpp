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

#include "tmlab/factor.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace tmlab {

namespace {

using CacheKey = std::tuple<std::uint32_t, std::vector<std::uint32_t>, std::uint32_t>;

std::mutex cache_mutex;
std::map<CacheKey, std::vector<FqPoly>> cache;

bool has_factor_up_to(const FqPoly& f, std::uint32_t max_degree) {
  for (std::uint32_t k = 1; k <= max_degree; ++k) {
    for (const FqPoly& g : monic_irreducibles(f.ctx(), k)) {
      if (divides(g, f)) return true;
    }
  }
  return false;
}

}  // namespace

const std::vector<FqPoly>& monic_irreducibles(const FqCtxPtr& ctx, std::uint32_t degree) {
  const CacheKey key{ctx->p(), ctx->modulus(), degree};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<FqPoly> found;
  if (degree >= 1) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < degree; ++i) count *= ctx->q();
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<Fq> coeffs(degree + 1);
      std::uint64_t c = code;
      for (std::uint32_t i = 0; i < degree; ++i) {
        coeffs[i] = static_cast<Fq>(c % ctx->q());
        c /= ctx->q();
      }
      coeffs[degree] = 1;
      FqPoly g = FqPoly::from_dense(ctx, coeffs);
      if (!has_factor_up_to(g, degree / 2)) found.push_back(std::move(g));
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  // First insertion wins if two threads built the same entry.
  return cache.emplace(key, std::move(found)).first->second;
}

bool is_irreducible(const FqPoly& f) {
  if (f.degree() < 1) return false;
  return !has_factor_up_to(f, static_cast<std::uint32_t>(f.degree() / 2));
}

std::vector<Factor> poly_factor(const FqPoly& f) {
  if (f.is_zero()) throw FieldError("cannot factor the zero polynomial");
  std::vector<Factor> out;
  FqPoly rest = f.monic();
  for (std::uint32_t k = 1; 2 * static_cast<std::int64_t>(k) <= rest.degree(); ++k) {
    for (const FqPoly& g : monic_irreducibles(f.ctx(), k)) {
      std::uint32_t mult = 0;
      for (;;) {
        auto [q, r] = divmod(rest, g);
        if (!r.is_zero()) break;
        rest = std::move(q);
        ++mult;
      }
      if (mult) out.push_back({g, mult});
      if (2 * static_cast<std::int64_t>(k) > rest.degree()) break;
    }
  }
  if (rest.degree() >= 1) {
    // Whatever survives has no factor of degree <= half its degree.
    bool merged = false;
    for (auto& fac : out) {
      if (fac.poly == rest) {
        ++fac.multiplicity;
        merged = true;
      }
    }
    if (!merged) out.push_back({rest, 1});
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return a.poly < b.poly; });
  return out;
}

}  // namespace tmlab
