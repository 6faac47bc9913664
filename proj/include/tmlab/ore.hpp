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
#include <deque>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tmlab/mpoly.hpp"
#include "tmlab/operator.hpp"

namespace tmlab {

/// F o G. Throws std::invalid_argument unless in_dim(F) = out_dim(G).
TwistedOperator compose(const TwistedOperator& f, const TwistedOperator& g);

/// F(P) = sum_i A_i P^(p^i). Throws std::invalid_argument on a dimension
/// mismatch.
PointK evaluate(const TwistedOperator& f, const PointK& x);

/// Iterates F^0, F^1, ... of a square operator, built by F^{n+1} = F o F^n
/// and kept for reuse. Readers may run concurrently; extension takes an
/// exclusive lock. References returned by get() stay valid for the lifetime
/// of the cache.
class IterateCache {
 public:
  /// Throws std::invalid_argument for a non-square operator.
  explicit IterateCache(TwistedOperator f);

  const TwistedOperator& base() const { return f_; }
  const TwistedOperator& get(std::size_t n);
  std::size_t size() const;

 private:
  TwistedOperator f_;
  mutable std::shared_mutex mu_;
  std::deque<TwistedOperator> iterates_;
};

/// The n-fold composite. Uses `cache` when given.
TwistedOperator iterate(const TwistedOperator& f, std::size_t n, IterateCache* cache = nullptr);

/// b(F) = sum_m b_m F^m.
TwistedOperator apply_tpoly(const TPoly& b, const TwistedOperator& f, IterateCache* cache = nullptr);

struct GammaSet {
  std::vector<PointK> points;  // sorted, deduplicated
  std::uint64_t combinations;  // p^(S+1)
  bool torsion_free() const { return points.size() == combinations; }
};

/// { b(F)(P) : b in F_p[t], deg b <= S }.
GammaSet gamma_set(const TwistedOperator& f, const PointK& x, std::size_t s);

struct StabilityResult {
  bool stable = false;
  std::optional<TwistedOperator> reduced;  // F' with pi o F = F' o pi
  std::string witness;                     // failing equation when not stable
};

/// Decides whether pi o F factors as F' o pi for an e x e operator F' of
/// tau-degree at most tau_degree(pi o F) - (lowest tau-degree of pi), by
/// K-linear elimination one output row at a time. When stable, the
/// identity pi o F = F' o pi has been verified exactly.
StabilityResult stability_check(const TwistedOperator& pi, const TwistedOperator& f);

struct OperatorDegrees {
  std::size_t tau_degree;
  std::uint64_t total_degree;  // p^tau_degree
};

/// Throws std::domain_error on the zero operator and std::overflow_error if
/// p^tau_degree does not fit in 64 bits.
OperatorDegrees degrees(const TwistedOperator& f);

/// The pulled-back coordinate functions F^* m_i = sum_j sum_k A_j[i][k] x_k^(p^j)
/// as polynomials in x_1..x_d, one per output row.
std::vector<MPoly> pullback_coordinates(const TwistedOperator& f);

}  // namespace tmlab
