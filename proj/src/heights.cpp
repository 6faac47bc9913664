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

#include "tmlab/heights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tmlab/factor.hpp"

namespace tmlab {

Place Place::finite(FqPoly poly) {
  if (poly.degree() < 1 || poly.lead() != 1) throw FieldError("place polynomial must be monic of positive degree");
  if (!is_irreducible(poly)) throw FieldError("place polynomial " + poly.to_string() + " is not irreducible");
  return Place(std::move(poly), false);
}

Place Place::infinity(const FqCtxPtr& ctx) { return Place(FqPoly::T(ctx), true); }

std::uint64_t Place::residue_field_size() const {
  std::uint64_t s = 1;
  const std::uint64_t q = poly_.field().q();
  for (std::uint32_t i = 0; i < residue_degree(); ++i) {
    if (s > std::numeric_limits<std::uint64_t>::max() / q) throw std::overflow_error("residue field too large");
    s *= q;
  }
  return s;
}

std::string Place::to_string() const { return infinite_ ? "inf" : "(" + poly_.to_string() + ")"; }

std::int64_t poly_order(const FqPoly& f, const Place& v) {
  if (f.is_zero()) return kInfiniteValuation;
  if (v.is_infinite()) return -f.degree();
  if (v.poly().is_monomial()) return static_cast<std::int64_t>(f.low_degree());
  std::int64_t k = 0;
  FqPoly rest = f;
  for (;;) {
    auto [q, r] = divmod(rest, v.poly());
    if (!r.is_zero()) return k;
    rest = std::move(q);
    ++k;
  }
}

std::int64_t valuation(const RatFunc& a, const Place& v) {
  if (a.is_zero()) return kInfiniteValuation;
  if (v.is_infinite()) return a.den().degree() - a.num().degree();
  return poly_order(a.num(), v) - poly_order(a.den(), v);
}

double HeightValue::in_nats(std::uint32_t q) const { return static_cast<double>(value) * std::log(static_cast<double>(q)); }

HeightValue height_tuple(std::span<const RatFunc> tuple) {
  std::int64_t at_infinity = 0;
  std::vector<const FqPoly*> dens;
  for (const RatFunc& a : tuple) {
    if (a.is_zero()) continue;
    at_infinity = std::max(at_infinity, a.num().degree() - a.den().degree());
    if (a.den().degree() > 0) dens.push_back(&a.den());
  }
  std::int64_t finite = 0;
  if (!dens.empty()) {
    std::sort(dens.begin(), dens.end(), [](const FqPoly* x, const FqPoly* y) { return *x < *y; });
    dens.erase(std::unique(dens.begin(), dens.end(), [](const FqPoly* x, const FqPoly* y) { return *x == *y; }),
               dens.end());
    FqPoly l = *dens.front();
    for (std::size_t i = 1; i < dens.size(); ++i) l = poly_lcm(l, *dens[i]);
    finite = l.degree();
  }
  return {finite + at_infinity};
}

std::vector<Place> support(const RatFunc& a) {
  if (a.is_zero()) throw std::invalid_argument("support of zero is undefined");
  std::vector<Place> places;
  for (const FqPoly* f : {&a.num(), &a.den()}) {
    if (f->degree() < 1) continue;
    for (const Factor& fac : poly_factor(*f)) places.push_back(Place::finite(fac.poly));
  }
  std::sort(places.begin(), places.end(), [](const Place& x, const Place& y) { return x.poly() < y.poly(); });
  places.erase(std::unique(places.begin(), places.end()), places.end());
  if (a.num().degree() != a.den().degree()) places.push_back(Place::infinity(a.ctx()));
  return places;
}

HeightValue height_tuple_by_places(std::span<const RatFunc> tuple) {
  std::vector<Place> places;
  const RatFunc* any = nullptr;
  for (const RatFunc& a : tuple) {
    if (a.is_zero()) continue;
    any = &a;
    for (Place& v : support(a)) {
      if (!v.is_infinite()) places.push_back(std::move(v));
    }
  }
  if (!any) return {0};
  std::sort(places.begin(), places.end(), [](const Place& x, const Place& y) { return x.poly() < y.poly(); });
  places.erase(std::unique(places.begin(), places.end()), places.end());
  places.push_back(Place::infinity(any->ctx()));

  std::int64_t total = 0;
  for (const Place& v : places) {
    std::int64_t min_neg = 0;
    for (const RatFunc& a : tuple) {
      if (a.is_zero()) continue;
      min_neg = std::min(min_neg, valuation(a, v));
    }
    total -= min_neg * v.residue_degree();
  }
  return {total};
}

HeightValue height_poly(const MPoly& g) {
  if (g.is_zero()) throw std::invalid_argument("height of the zero polynomial is undefined");
  const auto coeffs = g.coefficients();
  return height_tuple(coeffs);
}

std::int64_t degree_sum(const RatFunc& a) {
  std::int64_t s = 0;
  for (const Place& v : support(a)) s += valuation(a, v) * v.residue_degree();
  return s;
}

bool product_formula_check(const RatFunc& a) {
  if (a.is_zero()) throw std::invalid_argument("product formula needs a nonzero element");
  return degree_sum(a) == 0;
}

}  // namespace tmlab
