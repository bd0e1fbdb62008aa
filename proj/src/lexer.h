// Copyright 2026 The tbfalsify Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tokenizer and expression parser shared by the test-block and STL readers.
// Internal to the library.

#ifndef TBF_SRC_LEXER_H_
#define TBF_SRC_LEXER_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tbf/error.h"
#include "tbf/expr.h"

namespace tbf::detail {

enum class Tok {
  kIdent,
  kNumber,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kLBracket,
  kRBracket,
  kComma,
  kSemicolon,
  kColon,
  kArrow,  // ->
  kAssign,  // =
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kNe,
  kAndAnd,
  kOrOr,
  kTilde,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

// Throws kSyntaxError on characters outside the language. `%` and `//` start
// line comments.
std::vector<Token> tokenize(std::string_view source);

std::string describe(const Token& token);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view word) const {
    return peek().kind == Tok::kIdent && peek().text == word;
  }
  bool accept(Tok kind);
  bool accept_word(std::string_view word);
  const Token& expect(Tok kind, std::string_view what);
  void expect_word(std::string_view word);
  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& token, ErrorCode code,
                            const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Resolves an identifier to a symbol slot, or returns -1 if unknown.
using SymbolResolver = std::function<int(const std::string& name)>;

struct ExprContext {
  const std::vector<Symbol>* symbols = nullptr;
  SymbolResolver resolve;
  // Step-scoped operators (`et`, `after`, `hasChanged`) are allowed.
  bool step_operators = true;
};

// Precedence, lowest first: or, and, not, relational, additive,
// multiplicative, unary minus, primary. Type errors throw kTypeError, unknown
// identifiers kUndeclaredIdentifier.
ExprPtr parse_expr(TokenStream& ts, const ExprContext& ctx);
// Arithmetic only (no relational or boolean connectives at the top level).
ExprPtr parse_arith(TokenStream& ts, const ExprContext& ctx);

// Signed numeric literal, e.g. in declarations.
double parse_signed_number(TokenStream& ts);

bool is_keyword(std::string_view word);

}  // namespace tbf::detail

#endif  // TBF_SRC_LEXER_H_
