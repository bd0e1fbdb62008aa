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

#include "lexer.h"

#include <array>
#include <cctype>
#include <memory>

namespace tbf::detail {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

constexpr std::array<std::string_view, 25> kKeywords = {
    "sequence", "assessment", "inputs",  "outputs", "consts",
    "params",   "step",       "when",    "otherwise", "trans",
    "verify",   "assert",     "true",    "false",   "and",
    "or",       "not",        "et",      "after",   "hasChanged",
    "sec",      "in",         "real",    "bool",    "as"};

}  // namespace

bool is_keyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return word == "int";
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n && i < src.size(); ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](Tok kind, std::size_t len) {
    out.push_back(Token{kind, std::string(src.substr(i, len)), line, col});
    advance(len);
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '%' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Tok::kIdent, j - i);
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
      std::size_t j = i;
      while (j < src.size() && digit(src[j])) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && digit(src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && digit(src[k])) {
          while (k < src.size() && digit(src[k])) ++k;
          j = k;
        }
      }
      push(Tok::kNumber, j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "->") { push(Tok::kArrow, 2); continue; }
    if (two == "<=") { push(Tok::kLe, 2); continue; }
    if (two == ">=") { push(Tok::kGe, 2); continue; }
    if (two == "==") { push(Tok::kEq, 2); continue; }
    if (two == "~=") { push(Tok::kNe, 2); continue; }
    if (two == "!=") { push(Tok::kNe, 2); continue; }
    if (two == "&&") { push(Tok::kAndAnd, 2); continue; }
    if (two == "||") { push(Tok::kOrOr, 2); continue; }
    switch (c) {
      case '(': push(Tok::kLParen, 1); continue;
      case ')': push(Tok::kRParen, 1); continue;
      case '{': push(Tok::kLBrace, 1); continue;
      case '}': push(Tok::kRBrace, 1); continue;
      case '[': push(Tok::kLBracket, 1); continue;
      case ']': push(Tok::kRBracket, 1); continue;
      case ',': push(Tok::kComma, 1); continue;
      case ';': push(Tok::kSemicolon, 1); continue;
      case ':': push(Tok::kColon, 1); continue;
      case '=': push(Tok::kAssign, 1); continue;
      case '+': push(Tok::kPlus, 1); continue;
      case '-': push(Tok::kMinus, 1); continue;
      case '*': push(Tok::kStar, 1); continue;
      case '/': push(Tok::kSlash, 1); continue;
      case '<': push(Tok::kLt, 1); continue;
      case '>': push(Tok::kGt, 1); continue;
      case '~': push(Tok::kTilde, 1); continue;
      case '!': push(Tok::kTilde, 1); continue;
      default: break;
    }
    std::string shown = (c >= 32 && c < 127) ? std::string(1, c)
                                             : "\\x" + std::to_string(
                                                           static_cast<unsigned char>(c));
    throw Error(ErrorCode::kSyntaxError,
                "unexpected character '" + shown + "'", line, col);
  }
  out.push_back(Token{Tok::kEnd, "", line, col});
  return out;
}

std::string describe(const Token& token) {
  if (token.kind == Tok::kEnd) return "end of input";
  return "'" + token.text + "'";
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t p = pos_ + ahead;
  return p < tokens_.size() ? tokens_[p] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::accept(Tok kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

bool TokenStream::accept_word(std::string_view word) {
  if (!at_word(word)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(Tok kind, std::string_view what) {
  if (!at(kind)) {
    fail("expected " + std::string(what) + ", found " + describe(peek()));
  }
  return next();
}

void TokenStream::expect_word(std::string_view word) {
  if (!at_word(word)) {
    fail("expected '" + std::string(word) + "', found " + describe(peek()));
  }
  next();
}

void TokenStream::fail(const std::string& message) const {
  throw Error(ErrorCode::kSyntaxError, message, peek().line, peek().column);
}

void TokenStream::fail_at(const Token& token, ErrorCode code,
                          const std::string& message) const {
  throw Error(code, message, token.line, token.column);
}

namespace {

bool numeric(const ExprPtr& e) { return e->type != ValueKind::kBool; }

ExprPtr positioned(ExprPtr e, const Token& at) {
  auto copy = std::const_pointer_cast<Expr>(e);
  copy->line = at.line;
  copy->column = at.column;
  return copy;
}

class ExprParser {
 public:
  ExprParser(TokenStream& ts, const ExprContext& ctx) : ts_(ts), ctx_(ctx) {}

  ExprPtr parse_or() {
    DepthGuard guard(*this);
    ExprPtr lhs = parse_and();
    while (ts_.at_word("or") || ts_.at(Tok::kOrOr)) {
      const Token op = ts_.next();
      ExprPtr rhs = parse_and();
      require_bool(lhs, op);
      require_bool(rhs, op);
      lhs = binary(ExprOp::kOr, lhs, rhs, op);
    }
    return lhs;
  }

  ExprPtr parse_arith() {
    ExprPtr lhs = parse_term();
    while (ts_.at(Tok::kPlus) || ts_.at(Tok::kMinus)) {
      const Token op = ts_.next();
      ExprPtr rhs = parse_term();
      require_numeric(lhs, op);
      require_numeric(rhs, op);
      lhs = binary(op.kind == Tok::kPlus ? ExprOp::kAdd : ExprOp::kSub, lhs,
                   rhs, op);
    }
    return lhs;
  }

 private:
  static constexpr int kMaxDepth = 256;
  static constexpr int kMaxBinaryNodes = 10000;

  struct DepthGuard {
    explicit DepthGuard(ExprParser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) {
        parser.ts_.fail("expression nested too deeply");
      }
    }
    ~DepthGuard() { --parser.depth_; }
    ExprParser& parser;
  };

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (ts_.at_word("and") || ts_.at(Tok::kAndAnd)) {
      const Token op = ts_.next();
      ExprPtr rhs = parse_not();
      require_bool(lhs, op);
      require_bool(rhs, op);
      lhs = binary(ExprOp::kAnd, lhs, rhs, op);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    DepthGuard guard(*this);
    if (ts_.at_word("not") || ts_.at(Tok::kTilde)) {
      const Token op = ts_.next();
      ExprPtr arg = parse_not();
      require_bool(arg, op);
      return positioned(make_unary(ExprOp::kNot, arg), op);
    }
    return parse_rel();
  }

  ExprPtr parse_rel() {
    ExprPtr lhs = parse_arith();
    ExprOp op;
    switch (ts_.peek().kind) {
      case Tok::kLt: op = ExprOp::kLt; break;
      case Tok::kLe: op = ExprOp::kLe; break;
      case Tok::kGt: op = ExprOp::kGt; break;
      case Tok::kGe: op = ExprOp::kGe; break;
      case Tok::kEq: op = ExprOp::kEq; break;
      case Tok::kNe: op = ExprOp::kNe; break;
      default: return lhs;
    }
    const Token tok = ts_.next();
    ExprPtr rhs = parse_arith();
    require_numeric(lhs, tok);
    require_numeric(rhs, tok);
    return binary(op, lhs, rhs, tok);
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (ts_.at(Tok::kStar) || ts_.at(Tok::kSlash)) {
      const Token op = ts_.next();
      ExprPtr rhs = parse_unary();
      require_numeric(lhs, op);
      require_numeric(rhs, op);
      lhs = binary(op.kind == Tok::kStar ? ExprOp::kMul : ExprOp::kDiv, lhs,
                   rhs, op);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    DepthGuard guard(*this);
    if (ts_.at(Tok::kMinus)) {
      const Token op = ts_.next();
      ExprPtr arg = parse_unary();
      require_numeric(arg, op);
      return positioned(make_unary(ExprOp::kNeg, arg), op);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token tok = ts_.peek();
    switch (tok.kind) {
      case Tok::kNumber: {
        ts_.next();
        bool is_real = tok.text.find_first_of(".eE") != std::string::npos;
        double v = 0.0;
        try {
          v = std::stod(tok.text);
        } catch (const std::exception&) {
          ts_.fail_at(tok, ErrorCode::kSyntaxError, "bad number " + tok.text);
        }
        return positioned(
            make_const(v, is_real ? ValueKind::kReal : ValueKind::kInt), tok);
      }
      case Tok::kLParen: {
        ts_.next();
        ExprPtr inner = parse_or();
        ts_.expect(Tok::kRParen, "')'");
        return inner;
      }
      case Tok::kIdent:
        return parse_word();
      default:
        ts_.fail("expected an expression, found " + describe(tok));
    }
  }

  ExprPtr parse_word() {
    const Token tok = ts_.next();
    const std::string& w = tok.text;
    if (w == "true" || w == "false") {
      return positioned(make_const(w == "true" ? 1.0 : 0.0, ValueKind::kBool),
                        tok);
    }
    if (w == "et" || w == "after" || w == "hasChanged") {
      if (!ctx_.step_operators) {
        ts_.fail_at(tok, ErrorCode::kSyntaxError,
                    "'" + w + "' is only available inside test blocks");
      }
    }
    if (w == "et") {
      if (ts_.accept(Tok::kLParen)) {
        ts_.expect_word("sec");
        ts_.expect(Tok::kRParen, "')'");
      }
      auto e = std::make_shared<Expr>();
      e->op = ExprOp::kEt;
      e->type = ValueKind::kReal;
      return positioned(e, tok);
    }
    if (w == "after") {
      ts_.expect(Tok::kLParen, "'('");
      const Token arg_tok = ts_.peek();
      ExprPtr n = parse_arith();
      require_numeric(n, arg_tok);
      bool constant = true;
      visit(*n, [&](const Expr& node) {
        if (node.op == ExprOp::kEt || node.op == ExprOp::kAfter ||
            node.op == ExprOp::kHasChanged) {
          constant = false;
        }
        if (node.op == ExprOp::kRef &&
            (*ctx_.symbols)[static_cast<std::size_t>(node.slot)].is_signal()) {
          constant = false;
        }
      });
      if (!constant) {
        ts_.fail_at(arg_tok, ErrorCode::kTypeError,
                    "after() threshold must use only literals, parameters and "
                    "constants");
      }
      ts_.expect(Tok::kComma, "','");
      if (!ts_.at_word("sec")) {
        ts_.fail("only the time unit 'sec' is supported, found " +
                 describe(ts_.peek()));
      }
      ts_.next();
      ts_.expect(Tok::kRParen, "')'");
      auto e = std::make_shared<Expr>();
      e->op = ExprOp::kAfter;
      e->type = ValueKind::kBool;
      e->args.push_back(n);
      return positioned(e, tok);
    }
    if (w == "hasChanged") {
      ts_.expect(Tok::kLParen, "'('");
      const Token name = ts_.expect(Tok::kIdent, "a signal name");
      int slot = lookup(name);
      const Symbol& sym = (*ctx_.symbols)[static_cast<std::size_t>(slot)];
      if (!sym.is_signal()) {
        ts_.fail_at(name, ErrorCode::kTypeError,
                    "hasChanged() needs a signal, '" + name.text + "' is not");
      }
      ts_.expect(Tok::kRParen, "')'");
      auto e = std::make_shared<Expr>();
      e->op = ExprOp::kHasChanged;
      e->type = ValueKind::kBool;
      e->name = sym.name;
      e->slot = slot;
      return positioned(e, tok);
    }
    if (is_keyword(w)) {
      ts_.fail_at(tok, ErrorCode::kSyntaxError,
                  "unexpected keyword '" + w + "' in expression");
    }
    int slot = lookup(tok);
    return positioned(
        make_ref((*ctx_.symbols)[static_cast<std::size_t>(slot)], slot), tok);
  }

  int lookup(const Token& tok) {
    int slot = ctx_.resolve(tok.text);
    if (slot < 0) {
      ts_.fail_at(tok, ErrorCode::kUndeclaredIdentifier,
                  "'" + tok.text + "' is not declared");
    }
    return slot;
  }

  ExprPtr binary(ExprOp op, ExprPtr lhs, ExprPtr rhs, const Token& at) {
    if (++binary_nodes_ > kMaxBinaryNodes) {
      ts_.fail_at(at, ErrorCode::kSyntaxError, "expression too long");
    }
    return positioned(make_binary(op, std::move(lhs), std::move(rhs)), at);
  }

  void require_bool(const ExprPtr& e, const Token& op) {
    if (numeric(e)) {
      ts_.fail_at(op, ErrorCode::kTypeError,
                  "operator " + describe(op) + " needs boolean operands");
    }
  }
  void require_numeric(const ExprPtr& e, const Token& op) {
    if (!numeric(e)) {
      ts_.fail_at(op, ErrorCode::kTypeError,
                  "operator " + describe(op) + " needs numeric operands");
    }
  }

  TokenStream& ts_;
  const ExprContext& ctx_;
  int depth_ = 0;
  int binary_nodes_ = 0;
};

}  // namespace

ExprPtr parse_expr(TokenStream& ts, const ExprContext& ctx) {
  return ExprParser(ts, ctx).parse_or();
}

ExprPtr parse_arith(TokenStream& ts, const ExprContext& ctx) {
  return ExprParser(ts, ctx).parse_arith();
}

double parse_signed_number(TokenStream& ts) {
  bool negative = false;
  if (ts.accept(Tok::kMinus)) {
    negative = true;
  } else {
    ts.accept(Tok::kPlus);
  }
  const Token& tok = ts.expect(Tok::kNumber, "a number");
  double v = 0.0;
  try {
    v = std::stod(tok.text);
  } catch (const std::exception&) {
    ts.fail_at(tok, ErrorCode::kSyntaxError, "bad number " + tok.text);
  }
  return negative ? -v : v;
}

}  // namespace tbf::detail
