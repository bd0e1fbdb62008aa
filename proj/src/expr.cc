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

#include "tbf/expr.h"

#include <algorithm>
#include <cmath>

#include "tbf/error.h"

namespace tbf {

bool same_expr(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.type != b.type || a.args.size() != b.args.size()) {
    return false;
  }
  switch (a.op) {
    case ExprOp::kConst:
      if (a.value != b.value) return false;
      break;
    case ExprOp::kRef:
    case ExprOp::kHasChanged:
      if (a.name != b.name) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_expr(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return same_expr(*a, *b);
}

ExprPtr make_const(double value, ValueKind type) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::kConst;
  e->type = type;
  e->value = value;
  return e;
}

ExprPtr make_ref(const Symbol& symbol, int slot) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::kRef;
  e->type = symbol.kind;
  e->name = symbol.name;
  e->slot = slot;
  return e;
}

ExprPtr make_unary(ExprOp op, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->type = op == ExprOp::kNot ? ValueKind::kBool : arg->type;
  e->args.push_back(std::move(arg));
  return e;
}

bool is_relational(ExprOp op) {
  switch (op) {
    case ExprOp::kLt:
    case ExprOp::kLe:
    case ExprOp::kGt:
    case ExprOp::kGe:
    case ExprOp::kEq:
    case ExprOp::kNe:
      return true;
    default:
      return false;
  }
}

ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  if (is_relational(op) || op == ExprOp::kAnd || op == ExprOp::kOr) {
    e->type = ValueKind::kBool;
  } else if (op == ExprOp::kDiv) {
    e->type = ValueKind::kReal;
  } else if (lhs->type == ValueKind::kInt && rhs->type == ValueKind::kInt) {
    e->type = ValueKind::kInt;
  } else {
    e->type = ValueKind::kReal;
  }
  e->args.push_back(std::move(lhs));
  e->args.push_back(std::move(rhs));
  return e;
}

bool after_elapsed(double et, double threshold) {
  return et + 1e-9 >= threshold;
}

double evaluate(const Expr& expr, const EvalEnv& env) {
  auto arg = [&](std::size_t i) { return evaluate(*expr.args[i], env); };
  switch (expr.op) {
    case ExprOp::kConst: return expr.value;
    case ExprOp::kRef: return env.now[static_cast<std::size_t>(expr.slot)];
    case ExprOp::kNeg: return -arg(0);
    case ExprOp::kAdd: return arg(0) + arg(1);
    case ExprOp::kSub: return arg(0) - arg(1);
    case ExprOp::kMul: return arg(0) * arg(1);
    case ExprOp::kDiv: {
      double den = arg(1);
      if (den == 0.0) {
        throw Error(ErrorCode::kEvalError,
                    "division by zero in '" + to_string(expr) + "'");
      }
      return arg(0) / den;
    }
    case ExprOp::kLt: return arg(0) < arg(1) ? 1.0 : 0.0;
    case ExprOp::kLe: return arg(0) <= arg(1) ? 1.0 : 0.0;
    case ExprOp::kGt: return arg(0) > arg(1) ? 1.0 : 0.0;
    case ExprOp::kGe: return arg(0) >= arg(1) ? 1.0 : 0.0;
    case ExprOp::kEq: return arg(0) == arg(1) ? 1.0 : 0.0;
    case ExprOp::kNe: return arg(0) != arg(1) ? 1.0 : 0.0;
    case ExprOp::kAnd: return (arg(0) != 0.0 && arg(1) != 0.0) ? 1.0 : 0.0;
    case ExprOp::kOr: return (arg(0) != 0.0 || arg(1) != 0.0) ? 1.0 : 0.0;
    case ExprOp::kNot: return arg(0) != 0.0 ? 0.0 : 1.0;
    case ExprOp::kEt: return env.et;
    case ExprOp::kAfter: return after_elapsed(env.et, arg(0)) ? 1.0 : 0.0;
    case ExprOp::kHasChanged: {
      if (env.prev.empty()) return 0.0;
      auto slot = static_cast<std::size_t>(expr.slot);
      return env.now[slot] != env.prev[slot] ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

bool holds(const Expr& expr, const EvalEnv& env) {
  return evaluate(expr, env) != 0.0;
}

namespace {

const char* op_text(ExprOp op) {
  switch (op) {
    case ExprOp::kAdd: return " + ";
    case ExprOp::kSub: return " - ";
    case ExprOp::kMul: return " * ";
    case ExprOp::kDiv: return " / ";
    case ExprOp::kLt: return " < ";
    case ExprOp::kLe: return " <= ";
    case ExprOp::kGt: return " > ";
    case ExprOp::kGe: return " >= ";
    case ExprOp::kEq: return " == ";
    case ExprOp::kNe: return " ~= ";
    case ExprOp::kAnd: return " and ";
    case ExprOp::kOr: return " or ";
    default: return " ? ";
  }
}

std::string const_text(const Expr& e) {
  if (e.type == ValueKind::kBool) return e.value != 0.0 ? "true" : "false";
  std::string s = format_double(e.value);
  if (e.type == ValueKind::kReal &&
      s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace

std::string to_string(const Expr& expr) {
  switch (expr.op) {
    case ExprOp::kConst: return const_text(expr);
    case ExprOp::kRef: return expr.name;
    case ExprOp::kNeg: return "(-" + to_string(*expr.args[0]) + ")";
    case ExprOp::kNot: return "(not " + to_string(*expr.args[0]) + ")";
    case ExprOp::kEt: return "et";
    case ExprOp::kAfter: return "after(" + to_string(*expr.args[0]) + ", sec)";
    case ExprOp::kHasChanged: return "hasChanged(" + expr.name + ")";
    default:
      return "(" + to_string(*expr.args[0]) + op_text(expr.op) +
             to_string(*expr.args[1]) + ")";
  }
}

ExprPtr substitute(const ExprPtr& expr, std::span<const int> slots,
                   std::span<const double> values) {
  if (expr->op == ExprOp::kRef) {
    auto it = std::find(slots.begin(), slots.end(), expr->slot);
    if (it != slots.end()) {
      auto c = std::make_shared<Expr>();
      c->op = ExprOp::kConst;
      c->type = expr->type;
      c->value = values[static_cast<std::size_t>(it - slots.begin())];
      c->line = expr->line;
      c->column = expr->column;
      return c;
    }
    return expr;
  }
  if (expr->args.empty()) return expr;
  auto copy = std::make_shared<Expr>(*expr);
  for (ExprPtr& a : copy->args) a = substitute(a, slots, values);
  return copy;
}

}  // namespace tbf
