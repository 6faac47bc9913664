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

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tmlab/mpoly.hpp"
#include "tmlab/ratfunc.hpp"

namespace tmlab {

/// A closed point of P^1 over F_q: a monic irreducible polynomial or infinity.
class Place {
 public:
  /// Throws FieldError unless `poly` is monic irreducible.
  static Place finite(FqPoly poly);
  static Place infinity(const FqCtxPtr& ctx);

  bool is_infinite() const { return infinite_; }
  /// The defining polynomial; meaningless at infinity.
  const FqPoly& poly() const { return poly_; }
  std::uint32_t residue_degree() const { return infinite_ ? 1 : static_cast<std::uint32_t>(poly_.degree()); }
  /// |k(v)| = q^residue_degree; throws if it overflows 64 bits.
  std::uint64_t residue_field_size() const;

  std::string to_string() const;

  friend bool operator==(const Place& a, const Place& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.poly_ == b.poly_);
  }

 private:
  Place(FqPoly poly, bool infinite) : poly_(std::move(poly)), infinite_(infinite) {}
  FqPoly poly_;
  bool infinite_;
};

/// Marker returned for the valuation of zero.
inline constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();

/// Order of vanishing of a nonzero polynomial at a finite place.
std::int64_t poly_order(const FqPoly& f, const Place& v);

/// ord_v(a); kInfiniteValuation for a = 0.
std::int64_t valuation(const RatFunc& a, const Place& v);

/// Affine logarithmic Weil height in units of log q. Always nonnegative.
struct HeightValue {
  std::int64_t value = 0;
  double in_nats(std::uint32_t q) const;
  auto operator<=>(const HeightValue&) const = default;
};

/// deg lcm(denominators) + max(0, max_j (deg num_j - deg den_j)). Zero
/// entries are skipped; an empty or all-zero tuple has height 0.
HeightValue height_tuple(std::span<const RatFunc> tuple);
inline HeightValue height(const RatFunc& a) { return height_tuple(std::span<const RatFunc>(&a, 1)); }

/// The place-by-place definition: factors every numerator and denominator
/// and sums -min_j ord_v^-(a_j) * deg v over the places met, plus infinity.
HeightValue height_tuple_by_places(std::span<const RatFunc> tuple);

/// Height of the coefficient tuple; throws std::invalid_argument on zero.
HeightValue height_poly(const MPoly& g);

/// Places where a nonzero element has nonzero valuation (sorted, finite
/// places first, infinity last).
std::vector<Place> support(const RatFunc& a);

/// Sum over places of ord_v(a) * deg v; the product formula says it is 0.
std::int64_t degree_sum(const RatFunc& a);
/// Throws std::invalid_argument on zero input.
bool product_formula_check(const RatFunc& a);

}  // namespace tmlab
