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

#include "tmlab/mpoly.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace tmlab {

std::uint64_t total_degree(const Monomial& m) {
  std::uint64_t s = 0;
  for (auto e : m) s += e;
  return s;
}

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = tmlab::total_degree(a), db = tmlab::total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

MPoly MPoly::constant(const FqCtxPtr& ctx, std::size_t nvars, const RatFunc& c) {
  MPoly r(ctx, nvars);
  r.add_term(Monomial(nvars, 0), c);
  return r;
}

MPoly MPoly::variable(const FqCtxPtr& ctx, std::size_t nvars, std::size_t i) {
  Monomial m(nvars, 0);
  m.at(i) = 1;
  return monomial(ctx, m, RatFunc::constant(ctx, 1));
}

MPoly MPoly::monomial(const FqCtxPtr& ctx, const Monomial& m, const RatFunc& c) {
  MPoly r(ctx, m.size());
  r.add_term(m, c);
  return r;
}

void MPoly::add_term(const Monomial& m, const RatFunc& c) {
  if (m.size() != nvars_) throw std::invalid_argument("monomial arity does not match polynomial");
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

RatFunc MPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? RatFunc(ctx_) : it->second;
}

std::uint64_t MPoly::total_degree() const {
  return terms_.empty() ? 0 : tmlab::total_degree(terms_.rbegin()->first);
}

std::uint64_t MPoly::lowest_degree() const {
  return terms_.empty() ? std::numeric_limits<std::uint64_t>::max() : tmlab::total_degree(terms_.begin()->first);
}

std::vector<RatFunc> MPoly::coefficients() const {
  std::vector<RatFunc> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) out.push_back(c);
  return out;
}

MPoly MPoly::scaled(const RatFunc& c) const {
  MPoly r(ctx_, nvars_);
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, v * c);
  return r;
}

MPoly MPoly::frobenius(std::uint64_t k) const {
  std::uint64_t factor = 1;
  for (std::uint64_t i = 0; i < k; ++i) factor *= ctx_->p();
  MPoly r(ctx_, nvars_);
  for (const auto& [m, v] : terms_) {
    Monomial mm = m;
    for (auto& e : mm) e = static_cast<std::uint32_t>(e * factor);
    r.terms_.emplace(std::move(mm), v.frobenius(k));
  }
  return r;
}

MPoly MPoly::pow(std::uint64_t e) const {
  MPoly result = constant(ctx_, nvars_, RatFunc::constant(ctx_, 1));
  std::uint64_t level = 0;
  while (e) {
    const std::uint64_t digit = e % ctx_->p();
    if (digit) {
      const MPoly b = frobenius(level);
      for (std::uint64_t i = 0; i < digit; ++i) result = result * b;
    }
    e /= ctx_->p();
    ++level;
  }
  return result;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  MPoly r = a;
  r += b;
  return r;
}

MPoly& MPoly::operator+=(const MPoly& b) {
  for (const auto& [m, c] : b.terms_) add_term(m, c);
  return *this;
}

MPoly operator-(const MPoly& a, const MPoly& b) {
  MPoly r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
  return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r(a.ctx_, a.nvars_);
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  Monomial m(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

RatFunc MPoly::evaluate(std::span<const RatFunc> point) const {
  if (point.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
  std::vector<std::map<std::uint32_t, RatFunc>> powers(nvars_);
  auto power = [&](std::size_t i, std::uint32_t e) -> const RatFunc& {
    auto it = powers[i].find(e);
    if (it != powers[i].end()) return it->second;
    return powers[i].emplace(e, e == 0 ? RatFunc::constant(ctx_, 1) : point[i].pow(e)).first->second;
  };
  RatFunc acc(ctx_);
  for (const auto& [m, c] : terms_) {
    RatFunc t = c;
    for (std::size_t i = 0; i < nvars_ && !t.is_zero(); ++i) {
      if (m[i]) t *= power(i, m[i]);
    }
    acc += t;
  }
  return acc;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    const auto& [m, c] = *it;
    const bool is_const = tmlab::total_degree(m) == 0;
    if (!c.is_one() || is_const) os << (c.is_polynomial() && c.num().term_count() <= 1 ? c.to_string() : "(" + c.to_string() + ")");
    bool need_star = !c.is_one();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (need_star) os << "*";
      need_star = true;
      os << "x" << (i + 1);
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

}  // namespace tmlab
