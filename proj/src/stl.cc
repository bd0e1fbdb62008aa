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

#include "tbf/stl.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lexer.h"
#include "tbf/error.h"
#include "tbf/fitness.h"

namespace tbf {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

namespace {

constexpr int kMaxStlDepth = 200;

class StlParser {
 public:
  explicit StlParser(std::string_view text) : ts_(detail::tokenize(text)) {
    ctx_.symbols = &formula_.symbols;
    ctx_.step_operators = false;
    ctx_.resolve = [this](const std::string& name) {
      for (std::size_t i = 0; i < formula_.symbols.size(); ++i) {
        if (formula_.symbols[i].name == name) return static_cast<int>(i);
      }
      if (name == "G" || name == "F" || name == "U") return -1;
      Symbol s;
      s.name = name;
      s.kind = ValueKind::kReal;
      s.role = SymbolRole::kInput;
      formula_.symbols.push_back(s);
      return static_cast<int>(formula_.symbols.size() - 1);
    };
  }

  StlFormula parse() {
    formula_.root = implication();
    if (!ts_.at(Tok::kEnd)) {
      ts_.fail("unexpected " + detail::describe(ts_.peek()) + " after formula");
    }
    return std::move(formula_);
  }

 private:
  struct Depth {
    explicit Depth(StlParser& p) : parser(p) {
      if (++parser.depth_ > kMaxStlDepth) parser.ts_.fail("formula nested too deeply");
    }
    ~Depth() { --parser.depth_; }
    StlParser& parser;
  };

  static StlPtr node(StlOp op, std::vector<StlPtr> args, double a = 0.0,
                     double b = 0.0) {
    auto n = std::make_shared<StlNode>();
    n->op = op;
    n->args = std::move(args);
    n->a = a;
    n->b = b;
    return n;
  }

  StlPtr implication() {
    Depth d(*this);
    StlPtr lhs = disjunction();
    if (ts_.accept(Tok::kArrow)) return node(StlOp::kImplies, {lhs, implication()});
    return lhs;
  }

  StlPtr disjunction() {
    StlPtr lhs = conjunction();
    while (ts_.at_word("or") || ts_.at(Tok::kOrOr)) {
      ts_.next();
      lhs = node(StlOp::kOr, {lhs, conjunction()});
    }
    return lhs;
  }

  StlPtr conjunction() {
    StlPtr lhs = until();
    while (ts_.at_word("and") || ts_.at(Tok::kAndAnd)) {
      ts_.next();
      lhs = node(StlOp::kAnd, {lhs, until()});
    }
    return lhs;
  }

  StlPtr until() {
    StlPtr lhs = unary();
    if (ts_.at_word("U")) {
      ts_.next();
      auto [a, b] = interval("U");
      lhs = node(StlOp::kUntil, {lhs, unary()}, a, b);
    }
    return lhs;
  }

  std::pair<double, double> interval(const std::string& op) {
    if (!ts_.at(Tok::kLBracket)) {
      ts_.fail("unbounded '" + op + "' is not supported; write " + op + "[a,b]");
    }
    ts_.next();
    const Token at = ts_.peek();
    double a = detail::parse_signed_number(ts_);
    ts_.expect(Tok::kComma, "','");
    double b = detail::parse_signed_number(ts_);
    ts_.expect(Tok::kRBracket, "']'");
    if (!(a >= 0.0) || !(a <= b) || !std::isfinite(b)) {
      ts_.fail_at(at, ErrorCode::kSyntaxError,
                  "interval must satisfy 0 <= a <= b");
    }
    return {a, b};
  }

  StlPtr unary() {
    Depth d(*this);
    if (ts_.at_word("not") || ts_.at(Tok::kTilde)) {
      ts_.next();
      return node(StlOp::kNot, {unary()});
    }
    if ((ts_.at_word("G") || ts_.at_word("F"))) {
      const std::string op = ts_.next().text;
      auto [a, b] = interval(op);
      return node(op == "G" ? StlOp::kAlways : StlOp::kEventually, {unary()}, a, b);
    }
    if (ts_.at(Tok::kLParen)) {
      std::size_t pos = ts_.position();
      std::size_t nsym = formula_.symbols.size();
      try {
        return predicate();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSyntaxError && e.code() != ErrorCode::kTypeError &&
            e.code() != ErrorCode::kUndeclaredIdentifier) {
          throw;
        }
        ts_.rewind(pos);
        formula_.symbols.resize(nsym);
      }
      ts_.next();
      StlPtr inner = implication();
      ts_.expect(Tok::kRParen, "')'");
      return inner;
    }
    return predicate();
  }

  StlPtr predicate() {
    const Token start = ts_.peek();
    if (start.kind == Tok::kIdent && (start.text == "true" || start.text == "false") &&
        !is_relop(ts_.peek(1).kind)) {
      ts_.next();
      auto n = std::make_shared<StlNode>();
      n->predicate = make_const(start.text == "true" ? 1.0 : 0.0, ValueKind::kBool);
      return n;
    }
    ExprPtr lhs = detail::parse_arith(ts_, ctx_);
    if (lhs->type == ValueKind::kBool) {
      auto n = std::make_shared<StlNode>();
      n->predicate = lhs;
      return n;
    }
    const Token op = ts_.peek();
    if (!is_relop(op.kind)) {
      ts_.fail("expected a comparison, found " + detail::describe(op));
    }
    ts_.next();
    ExprPtr rhs = detail::parse_arith(ts_, ctx_);
    if (rhs->type == ValueKind::kBool) {
      ts_.fail_at(op, ErrorCode::kTypeError, "comparison needs numeric operands");
    }
    auto n = std::make_shared<StlNode>();
    n->predicate = make_binary(relop(op.kind), lhs, rhs);
    return n;
  }

  static bool is_relop(Tok t) {
    return t == Tok::kLt || t == Tok::kLe || t == Tok::kGt || t == Tok::kGe ||
           t == Tok::kEq || t == Tok::kNe;
  }
  static ExprOp relop(Tok t) {
    switch (t) {
      case Tok::kLt: return ExprOp::kLt;
      case Tok::kLe: return ExprOp::kLe;
      case Tok::kGt: return ExprOp::kGt;
      case Tok::kGe: return ExprOp::kGe;
      case Tok::kEq: return ExprOp::kEq;
      default: return ExprOp::kNe;
    }
  }

  TokenStream ts_;
  StlFormula formula_;
  detail::ExprContext ctx_;
  int depth_ = 0;
};

std::string bounds(const StlNode& n) {
  return "[" + format_double(n.a) + ", " + format_double(n.b) + "]";
}

// Columns of the trace aligned with the formula's symbols.
std::vector<const Signal*> bind(const StlFormula& f, const Trace& trace) {
  std::vector<const Signal*> cols;
  for (const Symbol& s : f.symbols) cols.push_back(&trace.signal(s.name));
  return cols;
}

void check_horizon(const StlFormula& f, const Trace& trace) {
  std::size_t h = horizon_samples(*f.root, trace.grid().dt());
  if (h > trace.grid().n_samples() - 1) {
    throw Error(ErrorCode::kIntervalOutOfRange,
                "formula looks " + std::to_string(h) + " samples ahead, trace has " +
                    std::to_string(trace.grid().n_samples()));
  }
}

double predicate_at(const Expr& pred, const std::vector<const Signal*>& cols,
                    std::size_t k, double dt, std::vector<double>& row) {
  for (std::size_t i = 0; i < cols.size(); ++i) row[i] = cols[i]->values[k];
  EvalEnv env;
  env.k = k;
  env.t = static_cast<double>(k) * dt;
  env.now = row;
  return robustness(pred, env);
}

// Extremum of x over [i+lo, i+hi] clipped to the trace, for every i.
// Monotone deque; `better(a, b)` is true when a dominates b.
template <typename Better>
std::vector<double> sliding(const std::vector<double>& x, std::size_t lo,
                            std::size_t hi, double identity, Better better) {
  const std::size_t n = x.size();
  std::vector<double> out(n, identity);
  std::deque<std::size_t> dq;
  std::size_t next = lo;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = i + lo;
    if (start >= n) break;
    const std::size_t end = std::min(i + hi, n - 1);
    for (; next <= end; ++next) {
      while (!dq.empty() && !better(x[dq.back()], x[next])) dq.pop_back();
      dq.push_back(next);
    }
    while (!dq.empty() && dq.front() < start) dq.pop_front();
    if (!dq.empty()) out[i] = x[dq.front()];
  }
  return out;
}

// Same result as sliding(), computed with block prefix/suffix extrema so
// every block of width w is independent (O(n) total, parallel over blocks).
template <typename Combine>
std::vector<double> sliding_blocked(const std::vector<double>& x, std::size_t lo,
                                    std::size_t hi, double identity,
                                    Combine combine) {
  const std::size_t n = x.size();
  std::vector<double> out(n, identity);
  if (lo >= n || hi < lo) return out;
  const std::size_t w = std::min(hi - lo + 1, n);
  const std::size_t m = n + w;
  std::vector<double> g(m);
  std::vector<double> h(m);
  const auto blocks = static_cast<std::ptrdiff_t>((m + w - 1) / w);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t first = static_cast<std::size_t>(b) * w;
    const std::size_t last = std::min(first + w, m);
    double acc = identity;
    for (std::size_t j = first; j < last; ++j) {
      acc = combine(acc, j < n ? x[j] : identity);
      g[j] = acc;
    }
    acc = identity;
    for (std::size_t j = last; j-- > first;) {
      acc = combine(acc, j < n ? x[j] : identity);
      h[j] = acc;
    }
  }
  const auto span = static_cast<std::ptrdiff_t>(n - lo);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < span; ++i) {
    const std::size_t s = static_cast<std::size_t>(i) + lo;
    out[static_cast<std::size_t>(i)] = combine(h[s], g[s + w - 1]);
  }
  return out;
}

double until_at(const std::vector<double>& l, const std::vector<double>& r,
                std::size_t i, std::size_t lo, std::size_t hi) {
  const std::size_t n = l.size();
  double best = -kRobustnessCap;
  double run = kRobustnessCap;
  for (std::size_t j = i; j < n && j <= i + hi; ++j) {
    if (j >= i + lo) best = std::max(best, std::min(r[j], run));
    run = std::min(run, l[j]);
  }
  return best;
}

std::vector<double> eval_serial(const StlNode& n, const StlFormula& f,
                                 const std::vector<const Signal*>& cols,
                                 const TimeGrid& grid) {
  const std::size_t len = grid.n_samples();
  const double dt = grid.dt();
  switch (n.op) {
    case StlOp::kPredicate: {
      std::vector<double> out(len);
      std::vector<double> row(cols.size());
      for (std::size_t k = 0; k < len; ++k) {
        out[k] = predicate_at(*n.predicate, cols, k, dt, row);
      }
      return out;
    }
    case StlOp::kNot: {
      std::vector<double> x = eval_serial(*n.args[0], f, cols, grid);
      for (double& v : x) v = -v;
      return x;
    }
    case StlOp::kAnd:
    case StlOp::kOr:
    case StlOp::kImplies: {
      std::vector<double> x = eval_serial(*n.args[0], f, cols, grid);
      std::vector<double> y = eval_serial(*n.args[1], f, cols, grid);
      for (std::size_t k = 0; k < len; ++k) {
        if (n.op == StlOp::kAnd) {
          x[k] = std::min(x[k], y[k]);
        } else if (n.op == StlOp::kOr) {
          x[k] = std::max(x[k], y[k]);
        } else {
          x[k] = std::max(-x[k], y[k]);
        }
      }
      return x;
    }
    case StlOp::kAlways:
      return sliding(eval_serial(*n.args[0], f, cols, grid), window_lo(n.a, dt),
                     window_hi(n.b, dt), kRobustnessCap,
                     [](double a, double b) { return a < b; });
    case StlOp::kEventually:
      return sliding(eval_serial(*n.args[0], f, cols, grid), window_lo(n.a, dt),
                     window_hi(n.b, dt), -kRobustnessCap,
                     [](double a, double b) { return a > b; });
    case StlOp::kUntil: {
      std::vector<double> l = eval_serial(*n.args[0], f, cols, grid);
      std::vector<double> r = eval_serial(*n.args[1], f, cols, grid);
      std::vector<double> out(len);
      const std::size_t lo = window_lo(n.a, dt);
      const std::size_t hi = window_hi(n.b, dt);
      for (std::size_t i = 0; i < len; ++i) out[i] = until_at(l, r, i, lo, hi);
      return out;
    }
  }
  return {};
}

std::vector<double> eval_parallel(const StlNode& n, const StlFormula& f,
                                  const std::vector<const Signal*>& cols,
                                  const TimeGrid& grid) {
  const auto len = static_cast<std::ptrdiff_t>(grid.n_samples());
  const double dt = grid.dt();
  std::vector<double> out(static_cast<std::size_t>(len));
  switch (n.op) {
    case StlOp::kPredicate: {
#pragma omp parallel
      {
        std::vector<double> row(cols.size());
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < len; ++k) {
          out[k] = predicate_at(*n.predicate, cols, static_cast<std::size_t>(k), dt, row);
        }
      }
      return out;
    }
    case StlOp::kNot: {
      std::vector<double> x = eval_parallel(*n.args[0], f, cols, grid);
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t k = 0; k < len; ++k) out[k] = -x[k];
      return out;
    }
    case StlOp::kAnd:
    case StlOp::kOr:
    case StlOp::kImplies: {
      std::vector<double> x = eval_parallel(*n.args[0], f, cols, grid);
      std::vector<double> y = eval_parallel(*n.args[1], f, cols, grid);
      const StlOp op = n.op;
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t k = 0; k < len; ++k) {
        out[k] = op == StlOp::kAnd  ? std::min(x[k], y[k])
                 : op == StlOp::kOr ? std::max(x[k], y[k])
                                    : std::max(-x[k], y[k]);
      }
      return out;
    }
    case StlOp::kAlways:
    case StlOp::kEventually: {
      std::vector<double> x = eval_parallel(*n.args[0], f, cols, grid);
      const auto lo = static_cast<std::ptrdiff_t>(window_lo(n.a, dt));
      const auto hi = static_cast<std::ptrdiff_t>(window_hi(n.b, dt));
      return n.op == StlOp::kAlways
                 ? sliding_blocked(x, static_cast<std::size_t>(lo),
                                   static_cast<std::size_t>(hi), kRobustnessCap,
                                   [](double a, double b) { return std::min(a, b); })
                 : sliding_blocked(x, static_cast<std::size_t>(lo),
                                   static_cast<std::size_t>(hi), -kRobustnessCap,
                                   [](double a, double b) { return std::max(a, b); });
    }
    case StlOp::kUntil: {
      std::vector<double> l = eval_parallel(*n.args[0], f, cols, grid);
      std::vector<double> r = eval_parallel(*n.args[1], f, cols, grid);
      const std::size_t lo = window_lo(n.a, dt);
      const std::size_t hi = window_hi(n.b, dt);
#pragma omp parallel for schedule(dynamic, 64)
      for (std::ptrdiff_t i = 0; i < len; ++i) {
        out[i] = until_at(l, r, static_cast<std::size_t>(i), lo, hi);
      }
      return out;
    }
  }
  return out;
}

// Boolean semantics at sample i; only consulted when robustness is exactly 0.
bool holds_at(const StlNode& n, const std::vector<const Signal*>& cols,
              std::size_t i, const TimeGrid& grid) {
  const std::size_t len = grid.n_samples();
  const double dt = grid.dt();
  switch (n.op) {
    case StlOp::kPredicate: {
      std::vector<double> row(cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) row[c] = cols[c]->values[i];
      EvalEnv env;
      env.k = i;
      env.t = grid.time(i);
      env.now = row;
      return holds(*n.predicate, env);
    }
    case StlOp::kNot: return !holds_at(*n.args[0], cols, i, grid);
    case StlOp::kAnd:
      return holds_at(*n.args[0], cols, i, grid) && holds_at(*n.args[1], cols, i, grid);
    case StlOp::kOr:
      return holds_at(*n.args[0], cols, i, grid) || holds_at(*n.args[1], cols, i, grid);
    case StlOp::kImplies:
      return !holds_at(*n.args[0], cols, i, grid) || holds_at(*n.args[1], cols, i, grid);
    case StlOp::kAlways:
    case StlOp::kEventually: {
      const bool always = n.op == StlOp::kAlways;
      const std::size_t end = std::min(i + window_hi(n.b, dt), len - 1);
      for (std::size_t j = i + window_lo(n.a, dt); j <= end; ++j) {
        if (holds_at(*n.args[0], cols, j, grid) != always) return !always;
      }
      return always;
    }
    case StlOp::kUntil: {
      const std::size_t lo = window_lo(n.a, dt);
      const std::size_t end = std::min(i + window_hi(n.b, dt), len - 1);
      for (std::size_t j = i; j <= end; ++j) {
        if (j >= i + lo && holds_at(*n.args[1], cols, j, grid)) return true;
        if (!holds_at(*n.args[0], cols, j, grid)) return false;
      }
      return false;
    }
  }
  return false;
}

StlVerdictReport report(const StlFormula& f, const Trace& trace, bool parallel) {
  std::vector<double> sig = stl_signal(f, trace, parallel);
  StlVerdictReport r;
  r.robustness = sig.front();
  if (r.robustness != 0.0) {
    r.verdict = r.robustness > 0.0;
  } else {
    r.verdict = holds_at(*f.root, bind(f, trace), 0, trace.grid());
  }
  return r;
}

}  // namespace

StlFormula parse_stl(std::string_view text) { return StlParser(text).parse(); }

StlFormula load_stl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_stl(ss.str());
}

std::string to_string(const StlNode& n, const std::vector<Symbol>& symbols) {
  auto arg = [&](std::size_t i) { return to_string(*n.args[i], symbols); };
  switch (n.op) {
    case StlOp::kPredicate: return to_string(*n.predicate);
    case StlOp::kNot: return "(not " + arg(0) + ")";
    case StlOp::kAnd: return "(" + arg(0) + " and " + arg(1) + ")";
    case StlOp::kOr: return "(" + arg(0) + " or " + arg(1) + ")";
    case StlOp::kImplies: return "(" + arg(0) + " -> " + arg(1) + ")";
    case StlOp::kAlways: return "(G" + bounds(n) + " " + arg(0) + ")";
    case StlOp::kEventually: return "(F" + bounds(n) + " " + arg(0) + ")";
    case StlOp::kUntil: return "(" + arg(0) + " U" + bounds(n) + " " + arg(1) + ")";
  }
  return "";
}

std::string to_string(const StlFormula& f) { return to_string(*f.root, f.symbols); }

std::size_t window_lo(double a, double dt) {
  return static_cast<std::size_t>(std::ceil(a / dt - 1e-9));
}

std::size_t window_hi(double b, double dt) {
  return static_cast<std::size_t>(std::floor(b / dt + 1e-9));
}

std::size_t horizon_samples(const StlNode& n, double dt) {
  std::size_t inner = 0;
  for (const StlPtr& a : n.args) inner = std::max(inner, horizon_samples(*a, dt));
  switch (n.op) {
    case StlOp::kAlways:
    case StlOp::kEventually:
    case StlOp::kUntil:
      return window_hi(n.b, dt) + inner;
    default:
      return inner;
  }
}

std::vector<double> stl_signal(const StlFormula& f, const Trace& trace,
                               bool parallel) {
  check_horizon(f, trace);
  std::vector<const Signal*> cols = bind(f, trace);
  return parallel ? eval_parallel(*f.root, f, cols, trace.grid())
                  : eval_serial(*f.root, f, cols, trace.grid());
}

StlVerdictReport stl_robustness(const StlFormula& f, const Trace& trace) {
  return report(f, trace, false);
}

StlVerdictReport stl_robustness_parallel(const StlFormula& f, const Trace& trace) {
  return report(f, trace, true);
}

std::size_t InputProfile::dimension() const {
  std::size_t d = 0;
  for (const SignalProfile& s : signals) d += static_cast<std::size_t>(s.control_points);
  return d;
}

void InputProfile::check() const {
  if (signals.empty()) throw Error(ErrorCode::kInvalidArgument, "empty input profile");
  for (const SignalProfile& s : signals) {
    if (s.control_points < 1) {
      throw Error(ErrorCode::kInvalidArgument, s.name + ": needs a control point");
    }
    if (!(s.lo <= s.hi)) {
      throw Error(ErrorCode::kInvalidArgument, s.name + ": range lo > hi");
    }
  }
}

InputProfile parse_profile(std::string_view json_text) {
  InputProfile p;
  try {
    nlohmann::json j = nlohmann::json::parse(json_text);
    for (const auto& s : j.at("signals")) {
      SignalProfile sp;
      sp.name = s.at("name").get<std::string>();
      if (!parse_kind(s.value("kind", std::string("real")), sp.kind)) {
        throw Error(ErrorCode::kInvalidArgument, sp.name + ": unknown kind");
      }
      sp.control_points = s.at("control_points").get<int>();
      sp.lo = s.at("range").at(0).get<double>();
      sp.hi = s.at("range").at(1).get<double>();
      std::string interp = s.value("interpolation", std::string("pchip"));
      if (interp == "pchip") {
        sp.interpolation = Interpolation::kPchip;
      } else if (interp == "piecewise_constant") {
        sp.interpolation = Interpolation::kPiecewiseConstant;
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    sp.name + ": unknown interpolation '" + interp + "'");
      }
      p.signals.push_back(sp);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad profile: ") + e.what());
  }
  p.check();
  return p;
}

std::vector<double> pchip_slopes(std::span<const double> x,
                                 std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    del[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = del[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (del[k - 1] * del[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
  }
  // Shape-preserving three-point end slopes.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (std::signbit(s) != std::signbit(d0) || d0 == 0.0) return 0.0;
    if (std::signbit(d0) != std::signbit(d1) && std::fabs(s) > std::fabs(3.0 * d0)) {
      return 3.0 * d0;
    }
    return s;
  };
  d[0] = end_slope(h[0], h[1], del[0], del[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  return d;
}

double pchip_eval(std::span<const double> x, std::span<const double> y,
                  std::span<const double> slopes, double t) {
  const std::size_t n = x.size();
  if (n == 1 || t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  std::size_t k = static_cast<std::size_t>(
                      std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
  if (t == x[k]) return y[k];
  const double h = x[k + 1] - x[k];
  const double s = (t - x[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double v = (2 * s3 - 3 * s2 + 1) * y[k] + (s3 - 2 * s2 + s) * h * slopes[k] +
                   (-2 * s3 + 3 * s2) * y[k + 1] + (s3 - s2) * h * slopes[k + 1];
  // Each piece is monotone; clamping only removes rounding excursions.
  return std::clamp(v, std::min(y[k], y[k + 1]), std::max(y[k], y[k + 1]));
}

std::vector<double> control_times(const SignalProfile& p, double duration) {
  const int m = p.control_points;
  std::vector<double> t(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    if (p.interpolation == Interpolation::kPchip) {
      t[j] = m == 1 ? 0.0 : duration * j / (m - 1);
    } else {
      t[j] = duration * j / m;
    }
  }
  return t;
}

std::vector<double> interpolate(const SignalProfile& p,
                                std::span<const double> cps, const TimeGrid& grid) {
  const double duration = grid.duration();
  std::vector<double> times = control_times(p, duration);
  std::vector<double> out(grid.n_samples());
  if (p.interpolation == Interpolation::kPchip) {
    std::vector<double> slopes = pchip_slopes(times, cps);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = pchip_eval(times, cps, slopes, grid.time(k));
    }
  } else {
    const int m = p.control_points;
    for (std::size_t k = 0; k < out.size(); ++k) {
      double pos = duration > 0.0 ? grid.time(k) * m / duration : 0.0;
      int j = std::min(m - 1, static_cast<int>(std::floor(pos + 1e-9)));
      out[k] = cps[static_cast<std::size_t>(j)];
    }
  }
  if (p.kind == ValueKind::kInt) {
    for (double& v : out) v = std::nearbyint(v);
  } else if (p.kind == ValueKind::kBool) {
    for (double& v : out) v = v >= 0.5 ? 1.0 : 0.0;
  }
  return out;
}

Trace profile_trace(const InputProfile& profile, std::span<const double> values,
                    const TimeGrid& grid) {
  if (values.size() != profile.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "control value count mismatch");
  }
  std::vector<Signal> sigs;
  std::size_t off = 0;
  for (const SignalProfile& p : profile.signals) {
    auto m = static_cast<std::size_t>(p.control_points);
    sigs.push_back(Signal{p.name, p.kind, interpolate(p, values.subspan(off, m), grid)});
    off += m;
  }
  return Trace(grid, std::move(sigs));
}

Trace profile_sample(const InputProfile& profile, const TimeGrid& grid,
                     std::mt19937_64& rng) {
  std::vector<double> values;
  for (const SignalProfile& p : profile.signals) {
    std::uniform_real_distribution<double> u(p.lo, p.hi);
    for (int j = 0; j < p.control_points; ++j) values.push_back(p.lo == p.hi ? p.lo : u(rng));
  }
  return profile_trace(profile, values, grid);
}

}  // namespace tbf
