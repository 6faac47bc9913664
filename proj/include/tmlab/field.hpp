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
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmlab {

/// Raw element of F_q: the base-p digits of its coordinate vector packed into
/// an integer, digit k being the coefficient of w^k where w is the class of x
/// modulo the defining polynomial.
using Fq = std::uint32_t;

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The finite field F_q = F_p[x]/(modulus), q = p^m.
///
/// Multiplication goes through discrete log tables built once at
/// construction; addition is digitwise (XOR for p = 2, a table for q <= 256).
/// Instances are immutable and shared through FqCtxPtr.
class FqCtx {
 public:
  /// `modulus` lists the coefficients of a monic polynomial low to high
  /// (length m + 1). Throws FieldError unless p is prime and the modulus is
  /// monic and irreducible over F_p.
  static std::shared_ptr<const FqCtx> make(std::uint32_t p, std::vector<std::uint32_t> modulus);
  static std::shared_ptr<const FqCtx> prime(std::uint32_t p);

  std::uint32_t p() const { return p_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Fq zero() const { return 0; }
  Fq one() const { return 1; }

  Fq add(Fq a, Fq b) const {
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return add_digits(a, b);
  }
  Fq neg(Fq a) const;
  Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
  Fq mul(Fq a, Fq b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  Fq inv(Fq a) const;
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq pow(Fq a, std::uint64_t e) const;
  /// a^(p^k).
  Fq frob(Fq a, std::uint64_t k) const;
  /// Image of an integer in the prime field.
  Fq from_int(std::int64_t v) const;

  /// Coordinates over F_p, low digit first.
  std::vector<std::uint32_t> digits(Fq a) const;
  Fq from_digits(const std::vector<std::uint32_t>& d) const;

  bool same_field(const FqCtx& o) const { return p_ == o.p_ && modulus_ == o.modulus_; }

  std::string to_string(Fq a) const;

 private:
  FqCtx(std::uint32_t p, std::vector<std::uint32_t> modulus);
  Fq add_digits(Fq a, Fq b) const;
  Fq mul_slow(Fq a, Fq b) const;

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<Fq> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Fq> add_table_;
};

using FqCtxPtr = std::shared_ptr<const FqCtx>;

bool is_prime(std::uint64_t n);

/// A context-carrying element of F_q; the public face of Fq.
class FqElem {
 public:
  FqElem(FqCtxPtr ctx, Fq v) : ctx_(std::move(ctx)), v_(v) {}

  const FqCtxPtr& ctx() const { return ctx_; }
  Fq raw() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend bool operator==(const FqElem& a, const FqElem& b) {
    return a.ctx_->same_field(*b.ctx_) && a.v_ == b.v_;
  }

  std::string to_string() const { return ctx_->to_string(v_); }

 private:
  FqCtxPtr ctx_;
  Fq v_;
};

enum class FqOp { add, sub, mul, div };

/// Checked field arithmetic. Throws FieldError on context mismatch or division
/// by zero.
FqElem fq_arith(const FqElem& a, const FqElem& b, FqOp op);

FqElem operator+(const FqElem& a, const FqElem& b);
FqElem operator-(const FqElem& a, const FqElem& b);
FqElem operator*(const FqElem& a, const FqElem& b);
FqElem operator/(const FqElem& a, const FqElem& b);

}  // namespace tmlab
