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

#include "tmlab/operator.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tmlab {

namespace {

void check_same_shape(const KMatrix& a, const KMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
}

}  // namespace

KMatrix KMatrix::identity(const FqCtxPtr& ctx, std::size_t n) {
  KMatrix m(ctx, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = RatFunc::constant(ctx, 1);
  return m;
}

bool KMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const RatFunc& a) { return a.is_zero(); });
}

KMatrix KMatrix::frobenius(std::uint64_t k) const {
  KMatrix r = *this;
  for (auto& a : r.data_) a = a.frobenius(k);
  return r;
}

KMatrix KMatrix::scaled(Fq c) const {
  KMatrix r = *this;
  for (auto& a : r.data_) a = a.scaled(c);
  return r;
}

KMatrix operator+(const KMatrix& a, const KMatrix& b) {
  check_same_shape(a, b);
  KMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
  return r;
}

KMatrix operator-(const KMatrix& a, const KMatrix& b) {
  check_same_shape(a, b);
  KMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
  return r;
}

KMatrix operator*(const KMatrix& a, const KMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  KMatrix r(a.ctx_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const RatFunc& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const RatFunc& bkj = b.at(k, j);
        if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
      }
    }
  return r;
}

bool PointK::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const RatFunc& a) { return a.is_zero(); });
}

PointK PointK::frobenius(std::uint64_t k) const {
  PointK r = *this;
  for (auto& a : r.coords) a = a.frobenius(k);
  return r;
}

PointK PointK::scaled(Fq c) const {
  PointK r = *this;
  for (auto& a : r.coords) a = a.scaled(c);
  return r;
}

PointK operator+(const PointK& a, const PointK& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("point dimension mismatch");
  PointK r = a;
  for (std::size_t i = 0; i < r.dim(); ++i) r.coords[i] += b.coords[i];
  return r;
}

PointK operator-(const PointK& a, const PointK& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("point dimension mismatch");
  PointK r = a;
  for (std::size_t i = 0; i < r.dim(); ++i) r.coords[i] -= b.coords[i];
  return r;
}

std::string PointK::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? ", " : "") << coords[i].to_string();
  os << ']';
  return os.str();
}

TwistedOperator::TwistedOperator(const FqCtxPtr& ctx, std::size_t out_dim, std::size_t in_dim,
                                 std::vector<KMatrix> coeffs)
    : ctx_(ctx), out_dim_(out_dim), in_dim_(in_dim), coeffs_(std::move(coeffs)) {
  for (const KMatrix& m : coeffs_) {
    if (m.rows() != out_dim_ || m.cols() != in_dim_) throw std::invalid_argument("operator coefficient has wrong shape");
  }
  trim();
}

TwistedOperator TwistedOperator::identity(const FqCtxPtr& ctx, std::size_t d) {
  return TwistedOperator(ctx, d, d, {KMatrix::identity(ctx, d)});
}

TwistedOperator TwistedOperator::frobenius_power(const FqCtxPtr& ctx, std::size_t d, std::size_t k) {
  std::vector<KMatrix> c(k + 1, KMatrix(ctx, d, d));
  c[k] = KMatrix::identity(ctx, d);
  return TwistedOperator(ctx, d, d, std::move(c));
}

void TwistedOperator::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

KMatrix TwistedOperator::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : KMatrix(ctx_, out_dim_, in_dim_);
}

std::size_t TwistedOperator::tau_degree() const {
  if (coeffs_.empty()) throw std::domain_error("tau degree of the zero operator");
  return coeffs_.size() - 1;
}

TwistedOperator TwistedOperator::row(std::size_t r) const {
  if (r >= out_dim_) throw std::out_of_range("operator row out of range");
  std::vector<KMatrix> c;
  c.reserve(coeffs_.size());
  for (const KMatrix& m : coeffs_) {
    KMatrix row(ctx_, 1, in_dim_);
    for (std::size_t j = 0; j < in_dim_; ++j) row.at(0, j) = m.at(r, j);
    c.push_back(std::move(row));
  }
  return TwistedOperator(ctx_, 1, in_dim_, std::move(c));
}

TwistedOperator TwistedOperator::scaled(Fq c) const {
  std::vector<KMatrix> cs;
  for (const KMatrix& m : coeffs_) cs.push_back(m.scaled(c));
  return TwistedOperator(ctx_, out_dim_, in_dim_, std::move(cs));
}

TwistedOperator operator+(const TwistedOperator& a, const TwistedOperator& b) {
  if (a.out_dim_ != b.out_dim_ || a.in_dim_ != b.in_dim_) throw std::invalid_argument("operator shape mismatch");
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<KMatrix> c;
  c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.push_back(a.coeff(i) + b.coeff(i));
  return TwistedOperator(a.ctx_, a.out_dim_, a.in_dim_, std::move(c));
}

TwistedOperator operator-(const TwistedOperator& a, const TwistedOperator& b) { return a + b.scaled(a.ctx_->neg(1)); }

std::string TwistedOperator::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << '[';
    for (std::size_t r = 0; r < out_dim_; ++r) {
      os << (r ? "; " : "");
      for (std::size_t c = 0; c < in_dim_; ++c) os << (c ? ", " : "") << coeffs_[i].at(r, c).to_string();
    }
    os << ']';
    if (i == 1) os << "*tau";
    if (i > 1) os << "*tau^" << i;
  }
  return os.str();
}

TPoly TPoly::make(std::uint32_t p, std::vector<std::uint32_t> coeffs) {
  for (auto& c : coeffs) c %= p;
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  return TPoly{p, std::move(coeffs)};
}

TPoly operator+(const TPoly& a, const TPoly& b) {
  std::vector<std::uint32_t> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return TPoly::make(a.p, std::move(c));
}

TPoly operator*(const TPoly& a, const TPoly& b) {
  if (a.is_zero() || b.is_zero()) return TPoly{a.p, {}};
  std::vector<std::uint64_t> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] = (c[i + j] + std::uint64_t{a.coeffs[i]} * b.coeffs[j]) % a.p;
  return TPoly::make(a.p, std::vector<std::uint32_t>(c.begin(), c.end()));
}

}  // namespace tmlab
