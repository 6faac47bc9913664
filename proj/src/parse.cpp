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

#include "tmlab/parse.hpp"

#include <cctype>
#include <vector>

namespace tmlab {

namespace {

class Parser {
 public:
  Parser(const FqCtxPtr& ctx, std::string_view text) : ctx_(ctx), text_(text) {}

  RatFunc parse() {
    RatFunc v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_primary(char c) const { return std::isdigit(static_cast<unsigned char>(c)) || c == 'T' || c == 'w' || c == '('; }

  RatFunc expr() {
    RatFunc v = term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        v = v + term();
      } else if (c == '-') {
        ++pos_;
        v = v - term();
      } else {
        return v;
      }
    }
  }

  RatFunc term() {
    RatFunc v = unary();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        v = v * unary();
      } else if (c == '/') {
        ++pos_;
        const std::size_t at = pos_;
        RatFunc d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        v = v / d;
      } else if (starts_primary(c)) {
        v = v * unary();
      } else {
        return v;
      }
    }
  }

  RatFunc unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    if (peek() == '^') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
      const std::uint64_t e = integer();
      if (e == 0) return RatFunc::constant(ctx_, 1);
      return base.pow(e);
    }
    return base;
  }

  std::uint64_t integer() {
    skip_ws();
    std::uint64_t v = 0;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (UINT64_MAX - 9) / 10) fail("integer literal too large");
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail("expected integer");
    return v;
  }

  // Lookahead for "(int, int, ...)" tuple syntax.
  bool at_tuple() const {
    std::size_t i = pos_ + 1;
    auto ws = [&] {
      while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
    };
    ws();
    const std::size_t s = i;
    while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
    if (i == s) return false;
    ws();
    return i < text_.size() && text_[i] == ',';
  }

  RatFunc primary() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::uint64_t v = integer();
      return RatFunc::constant(ctx_, static_cast<Fq>(v % ctx_->p()));
    }
    if (c == 'T') {
      ++pos_;
      return RatFunc::T(ctx_);
    }
    if (c == 'w') {
      ++pos_;
      if (ctx_->m() == 1) fail("'w' is only defined for extension fields");
      std::vector<std::uint32_t> d(ctx_->m(), 0);
      d[1] = 1;
      return RatFunc::constant(ctx_, ctx_->from_digits(d));
    }
    if (c == '(') {
      if (at_tuple()) {
        ++pos_;
        std::vector<std::uint32_t> digits;
        for (;;) {
          digits.push_back(static_cast<std::uint32_t>(integer() % ctx_->p()));
          const char n = peek();
          if (n == ',') {
            ++pos_;
            continue;
          }
          if (n == ')') {
            ++pos_;
            break;
          }
          fail("expected ',' or ')' in field tuple");
        }
        if (digits.size() > ctx_->m()) fail("field tuple longer than the extension degree");
        return RatFunc::constant(ctx_, ctx_->from_digits(digits));
      }
      ++pos_;
      RatFunc v = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return v;
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  FqCtxPtr ctx_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(const FqCtxPtr& ctx, std::string_view text) { return Parser(ctx, text).parse(); }

FqPoly parse_poly(const FqCtxPtr& ctx, std::string_view text) {
  RatFunc v = parse_ratfunc(ctx, text);
  if (!v.is_polynomial()) throw ParseError("expected a polynomial in T", 1, 1);
  return v.num();
}

}  // namespace tmlab
