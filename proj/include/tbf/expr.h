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

// Typed expression trees shared by test blocks and STL predicates.

#ifndef TBF_EXPR_H_
#define TBF_EXPR_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbf/signal.h"

namespace tbf {

enum class ExprOp {
  kConst,
  kRef,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kNe,
  kAnd,
  kOr,
  kNot,
  kEt,
  kAfter,
  kHasChanged,
};

enum class SymbolRole { kInput, kOutput, kConst, kParam };

struct Symbol {
  std::string name;
  ValueKind kind = ValueKind::kReal;
  SymbolRole role = SymbolRole::kInput;
  // Initial value for outputs, fixed value for constants.
  std::optional<double> value;
  // Box domain; parameters only.
  std::optional<double> lower;
  std::optional<double> upper;
  int line = 0;

  bool is_signal() const {
    return role == SymbolRole::kInput || role == SymbolRole::kOutput;
  }
  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.name == b.name && a.kind == b.kind && a.role == b.role &&
           a.value == b.value && a.lower == b.lower && a.upper == b.upper;
  }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprOp op = ExprOp::kConst;
  ValueKind type = ValueKind::kReal;
  double value = 0.0;  // kConst
  std::string name;    // kRef, kHasChanged
  int slot = -1;       // kRef, kHasChanged: index into the owning symbol table
  std::vector<ExprPtr> args;
  int line = 0;
  int column = 0;
};

// Structural equality; ignores source positions.
bool same_expr(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);

ExprPtr make_const(double value, ValueKind type);
ExprPtr make_ref(const Symbol& symbol, int slot);
ExprPtr make_unary(ExprOp op, ExprPtr arg);
ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs);

bool is_relational(ExprOp op);

// Everything an expression may read at one sample. `now` and `prev` are
// indexed by symbol slot; booleans are 0.0/1.0. `prev` is empty at k = 0.
struct EvalEnv {
  std::size_t k = 0;
  double t = 0.0;
  std::span<const double> now;
  std::span<const double> prev;
  // Elapsed time of the test step the expression belongs to.
  double et = 0.0;
};

// Numeric value (booleans as 0/1). Throws kEvalError on division by zero.
double evaluate(const Expr& expr, const EvalEnv& env);
bool holds(const Expr& expr, const EvalEnv& env);

// `after(n, sec)` threshold test; the tolerance absorbs grid rounding so that
// the first sample with k * dt == n qualifies.
bool after_elapsed(double et, double threshold);

// Fully parenthesized text that parses back to the same tree.
std::string to_string(const Expr& expr);

// Replaces references to the given slots with constants. `values[i]` is used
// for slot `slots[i]`.
ExprPtr substitute(const ExprPtr& expr, std::span<const int> slots,
                   std::span<const double> values);

// Visits every node in pre-order.
template <typename F>
void visit(const Expr& expr, F&& f) {
  f(expr);
  for (const ExprPtr& a : expr.args) visit(*a, f);
}

}  // namespace tbf

#endif  // TBF_EXPR_H_
