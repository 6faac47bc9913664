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

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tmlab/ratfunc.hpp"

namespace tmlab {

/// Dense matrix over K. Dimensions stay tiny (d <= ~6) while entries can
/// have degrees in the millions, so storage is a flat row-major vector.
class KMatrix {
 public:
  KMatrix(const FqCtxPtr& ctx, std::size_t rows, std::size_t cols)
      : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols, RatFunc(ctx)) {}

  static KMatrix identity(const FqCtxPtr& ctx, std::size_t n);

  const FqCtxPtr& ctx() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  RatFunc& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const RatFunc& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<RatFunc>& entries() const { return data_; }

  bool is_zero() const;
  KMatrix frobenius(std::uint64_t k) const;
  KMatrix scaled(Fq c) const;

  friend KMatrix operator+(const KMatrix& a, const KMatrix& b);
  friend KMatrix operator-(const KMatrix& a, const KMatrix& b);
  friend KMatrix operator*(const KMatrix& a, const KMatrix& b);
  friend bool operator==(const KMatrix& a, const KMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  FqCtxPtr ctx_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<RatFunc> data_;
};

/// A K-point of G_a^d.
struct PointK {
  std::vector<RatFunc> coords;

  static PointK zero(const FqCtxPtr& ctx, std::size_t d) { return {std::vector<RatFunc>(d, RatFunc(ctx))}; }

  std::size_t dim() const { return coords.size(); }
  bool is_zero() const;
  /// Entrywise a^(p^k).
  PointK frobenius(std::uint64_t k) const;
  PointK scaled(Fq c) const;

  friend PointK operator+(const PointK& a, const PointK& b);
  friend PointK operator-(const PointK& a, const PointK& b);
  friend bool operator==(const PointK& a, const PointK& b) = default;
  friend bool operator<(const PointK& a, const PointK& b) {
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end());
  }

  std::string to_string() const;
};

/// Matrix twisted polynomial A_0 + A_1 tau + ... + A_r tau^r, each A_i an
/// e x d matrix over K, acting G_a^d -> G_a^e by x -> sum_i A_i x^(p^i).
/// Trailing zero coefficients are trimmed, so the zero operator has no
/// coefficients at all.
class TwistedOperator {
 public:
  TwistedOperator(const FqCtxPtr& ctx, std::size_t out_dim, std::size_t in_dim)
      : ctx_(ctx), out_dim_(out_dim), in_dim_(in_dim) {}
  /// Throws std::invalid_argument if the matrices disagree in shape.
  TwistedOperator(const FqCtxPtr& ctx, std::size_t out_dim, std::size_t in_dim, std::vector<KMatrix> coeffs);

  static TwistedOperator identity(const FqCtxPtr& ctx, std::size_t d);
  /// tau^k on G_a^d.
  static TwistedOperator frobenius_power(const FqCtxPtr& ctx, std::size_t d, std::size_t k);

  const FqCtxPtr& ctx() const { return ctx_; }
  std::size_t out_dim() const { return out_dim_; }
  std::size_t in_dim() const { return in_dim_; }
  bool is_square() const { return out_dim_ == in_dim_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<KMatrix>& coeffs() const { return coeffs_; }
  /// Coefficient of tau^i, the zero matrix past the top.
  KMatrix coeff(std::size_t i) const;
  /// Highest i with A_i != 0; throws std::domain_error on the zero operator.
  std::size_t tau_degree() const;

  /// The operator restricted to output row r (a 1 x d operator).
  TwistedOperator row(std::size_t r) const;
  TwistedOperator scaled(Fq c) const;

  friend TwistedOperator operator+(const TwistedOperator& a, const TwistedOperator& b);
  friend TwistedOperator operator-(const TwistedOperator& a, const TwistedOperator& b);
  friend bool operator==(const TwistedOperator& a, const TwistedOperator& b) {
    return a.out_dim_ == b.out_dim_ && a.in_dim_ == b.in_dim_ && a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  void trim();

  FqCtxPtr ctx_;
  std::size_t out_dim_;
  std::size_t in_dim_;
  std::vector<KMatrix> coeffs_;
};

/// Polynomial in F_p[t], coefficient i of t^i, normalized without trailing
/// zeros. Maps to F_p[t]-actions b(F) = sum_m b_m F^m.
struct TPoly {
  std::uint32_t p = 2;
  std::vector<std::uint32_t> coeffs;

  static TPoly make(std::uint32_t p, std::vector<std::uint32_t> coeffs);
  /// -1 for the zero polynomial.
  std::int64_t degree() const { return static_cast<std::int64_t>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }

  friend TPoly operator+(const TPoly& a, const TPoly& b);
  friend TPoly operator*(const TPoly& a, const TPoly& b);
  friend bool operator==(const TPoly&, const TPoly&) = default;
};

}  // namespace tmlab
