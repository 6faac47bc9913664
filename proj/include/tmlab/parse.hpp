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

#include <stdexcept>
#include <string>
#include <string_view>

#include "tmlab/ratfunc.hpp"

namespace tmlab {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses a literal of K = F_q(T).
///
/// Grammar (whitespace ignored, juxtaposition multiplies):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/')? unary)*
///     unary   := ('-' | '+') unary | power
///     power   := primary ('^' integer)?
///     primary := integer | 'T' | 'w' | '(' expr ')' | '(' integer (',' integer)+ ')'
///
/// Integers are read modulo p. `w` is the class of x in F_q = F_p[x]/(modulus)
/// and a parenthesized integer tuple (c0,c1,...) is the element c0 + c1 w + ...
RatFunc parse_ratfunc(const FqCtxPtr& ctx, std::string_view text);

/// As parse_ratfunc, but rejects non-polynomial values.
FqPoly parse_poly(const FqCtxPtr& ctx, std::string_view text);

}  // namespace tmlab
