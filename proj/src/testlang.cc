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

#include "tbf/testlang.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lexer.h"
#include "tbf/error.h"

namespace tbf {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

int TestBlock::find_step(std::string_view name) const {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].name == name) return static_cast<int>(i);
  }
  return kNoStep;
}

int TestBlock::find_symbol(std::string_view name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const std::vector<int>& TestBlock::children_of(int step) const {
  return step == kNoStep ? roots : steps[step].children;
}

ChildMode TestBlock::mode_of(int step) const {
  return step == kNoStep ? root_mode : steps[step].child_mode;
}

std::vector<int> TestBlock::slots_with_role(SymbolRole role) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].role == role) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<SignalDecl> TestBlock::signals_with_role(SymbolRole role) const {
  std::vector<SignalDecl> out;
  for (const Symbol& s : symbols) {
    if (s.role == role) out.push_back({s.name, s.kind});
  }
  return out;
}

std::size_t TestBlock::statement_count() const {
  std::size_t n = 0;
  for (const TestStep& s : steps) n += s.statements.size();
  return n;
}

namespace {

constexpr int kMaxStepDepth = 64;

struct PendingTransition {
  int scope = kNoStep;
  Token source;
  Token destination;
  ExprPtr guard;
};

class BlockParser {
 public:
  explicit BlockParser(std::string_view source)
      : ts_(detail::tokenize(source)) {
    ctx_.symbols = &block_.symbols;
    ctx_.resolve = [this](const std::string& name) {
      return block_.find_symbol(name);
    };
  }

  TestBlock parse() {
    if (ts_.accept_word("sequence")) {
      block_.kind = BlockKind::kSequence;
    } else if (ts_.accept_word("assessment")) {
      block_.kind = BlockKind::kAssessment;
    } else {
      ts_.fail("expected 'sequence' or 'assessment', found " +
               detail::describe(ts_.peek()));
    }
    block_.name = name_token("a block name").text;
    ts_.expect(Tok::kLBrace, "'{'");
    while (true) {
      if (ts_.accept_word("inputs")) {
        parse_decls(SymbolRole::kInput);
      } else if (ts_.accept_word("outputs")) {
        parse_decls(SymbolRole::kOutput);
      } else if (ts_.accept_word("consts")) {
        parse_decls(SymbolRole::kConst);
      } else if (ts_.accept_word("params")) {
        parse_decls(SymbolRole::kParam);
      } else {
        break;
      }
    }
    while (!ts_.at(Tok::kRBrace)) {
      if (ts_.at_word("step")) {
        parse_step(kNoStep, 0);
      } else if (ts_.at_word("trans")) {
        parse_transition(kNoStep);
      } else {
        ts_.fail("expected 'step', 'trans' or '}', found " +
                 detail::describe(ts_.peek()));
      }
    }
    ts_.next();
    if (!ts_.at(Tok::kEnd)) {
      ts_.fail("unexpected " + detail::describe(ts_.peek()) +
               " after end of block");
    }
    resolve_transitions();
    assign_statement_ids();
    return std::move(block_);
  }

 private:
  const Token& name_token(std::string_view what) {
    const Token& t = ts_.expect(Tok::kIdent, what);
    if (detail::is_keyword(t.text)) {
      ts_.fail_at(t, ErrorCode::kSyntaxError,
                  "keyword '" + t.text + "' cannot be used as a name");
    }
    return t;
  }

  double parse_literal(ValueKind kind) {
    if (ts_.at_word("true") || ts_.at_word("false")) {
      const Token& t = ts_.next();
      if (kind != ValueKind::kBool) {
        ts_.fail_at(t, ErrorCode::kTypeError, "boolean literal for a numeric declaration");
      }
      return t.text == "true" ? 1.0 : 0.0;
    }
    const Token at = ts_.peek();
    double v = detail::parse_signed_number(ts_);
    if (kind == ValueKind::kBool) {
      ts_.fail_at(at, ErrorCode::kTypeError, "numeric literal for a bool declaration");
    }
    return v;
  }

  void parse_decls(SymbolRole role) {
    ts_.expect(Tok::kLBrace, "'{'");
    while (!ts_.accept(Tok::kRBrace)) {
      const Token name = name_token("a declaration name");
      if (block_.find_symbol(name.text) >= 0) {
        ts_.fail_at(name, ErrorCode::kSyntaxError,
                    "'" + name.text + "' is declared twice");
      }
      ts_.expect(Tok::kColon, "':'");
      Symbol sym;
      sym.name = name.text;
      sym.role = role;
      sym.line = name.line;
      const Token kind_tok = ts_.expect(Tok::kIdent, "a type");
      if (!parse_kind(kind_tok.text, sym.kind)) {
        ts_.fail_at(kind_tok, ErrorCode::kSyntaxError,
                    "unknown type '" + kind_tok.text + "'");
      }
      if (ts_.accept(Tok::kAssign)) sym.value = parse_literal(sym.kind);
      if (ts_.accept_word("in")) {
        ts_.expect(Tok::kLBracket, "'['");
        sym.lower = detail::parse_signed_number(ts_);
        ts_.expect(Tok::kComma, "','");
        sym.upper = detail::parse_signed_number(ts_);
        ts_.expect(Tok::kRBracket, "']'");
      }
      ts_.expect(Tok::kSemicolon, "';'");
      block_.symbols.push_back(std::move(sym));
    }
  }

  ExprPtr boolean_expr(const char* what) {
    const Token at = ts_.peek();
    ExprPtr e = detail::parse_expr(ts_, ctx_);
    if (e->type != ValueKind::kBool) {
      ts_.fail_at(at, ErrorCode::kTypeError,
                  std::string(what) + " must be a boolean expression");
    }
    return e;
  }

  void parse_step(int parent, int depth) {
    if (depth >= kMaxStepDepth) ts_.fail("steps nested too deeply");
    ts_.expect_word("step");
    const Token name = name_token("a step name");
    if (block_.find_step(name.text) != kNoStep) {
      ts_.fail_at(name, ErrorCode::kDuplicateStepName,
                  "step '" + name.text + "' is defined twice");
    }
    TestStep step;
    step.name = name.text;
    step.parent = parent;
    step.line = name.line;
    if (ts_.accept_word("when")) {
      step.when_guard = boolean_expr("a when guard");
    } else if (ts_.accept_word("otherwise")) {
      step.is_otherwise = true;
    }
    const bool guarded = step.when_guard || step.is_otherwise;
    const int index = static_cast<int>(block_.steps.size());
    block_.steps.push_back(std::move(step));
    if (parent == kNoStep) {
      block_.roots.push_back(index);
      if (guarded) block_.root_mode = ChildMode::kWhen;
    } else {
      block_.steps[parent].children.push_back(index);
      if (guarded) block_.steps[parent].child_mode = ChildMode::kWhen;
    }

    ts_.expect(Tok::kLBrace, "'{'");
    while (!ts_.accept(Tok::kRBrace)) {
      if (ts_.at_word("step")) {
        parse_step(index, depth + 1);
      } else if (ts_.at_word("trans")) {
        parse_transition(index);
      } else if (ts_.at_word("verify") || ts_.at_word("assert")) {
        parse_statement(index);
      } else if (ts_.at(Tok::kIdent) && ts_.peek(1).kind == Tok::kAssign) {
        parse_assignment(index);
      } else {
        ts_.fail("expected a step item, found " + detail::describe(ts_.peek()));
      }
    }
  }

  void parse_statement(int step) {
    const Token kw = ts_.next();
    VerificationStatement st;
    st.kind = kw.text == "assert" ? StatementKind::kAssert
                                  : StatementKind::kVerify;
    st.line = kw.line;
    ts_.expect(Tok::kLParen, "'('");
    st.body = boolean_expr("a verification statement");
    ts_.expect(Tok::kRParen, "')'");
    if (ts_.accept_word("as")) st.id = name_token("a statement id").text;
    ts_.expect(Tok::kSemicolon, "';'");
    block_.steps[step].statements.push_back(std::move(st));
  }

  void parse_assignment(int step) {
    const Token target = ts_.next();
    ts_.next();  // '='
    int slot = block_.find_symbol(target.text);
    if (slot < 0) {
      ts_.fail_at(target, ErrorCode::kUndeclaredIdentifier,
                  "'" + target.text + "' is not declared");
    }
    const Symbol& sym = block_.symbols[slot];
    if (sym.role != SymbolRole::kOutput) {
      ts_.fail_at(target, ErrorCode::kTypeError,
                  "only outputs can be assigned, '" + target.text + "' is not");
    }
    const Token at = ts_.peek();
    ExprPtr value = detail::parse_expr(ts_, ctx_);
    if ((value->type == ValueKind::kBool) != (sym.kind == ValueKind::kBool)) {
      ts_.fail_at(at, ErrorCode::kTypeError,
                  "value type does not match output '" + sym.name + "'");
    }
    ts_.expect(Tok::kSemicolon, "';'");
    block_.steps[step].actions.push_back(
        Assignment{sym.name, slot, value, target.line});
  }

  void parse_transition(int scope) {
    ts_.expect_word("trans");
    PendingTransition p;
    p.scope = scope;
    p.source = name_token("a source step");
    ts_.expect(Tok::kArrow, "'->'");
    p.destination = name_token("a destination step");
    ts_.expect_word("when");
    p.guard = boolean_expr("a transition guard");
    ts_.expect(Tok::kSemicolon, "';'");
    pending_.push_back(std::move(p));
  }

  void resolve_transitions() {
    for (PendingTransition& p : pending_) {
      int src = block_.find_step(p.source.text);
      int dst = block_.find_step(p.destination.text);
      const Token& missing = src == kNoStep ? p.source : p.destination;
      if (src == kNoStep || dst == kNoStep) {
        ts_.fail_at(missing, ErrorCode::kUndeclaredIdentifier,
                    "unknown step '" + missing.text + "'");
      }
      Transition t;
      t.source = p.source.text;
      t.destination = p.destination.text;
      t.guard = p.guard;
      t.order_index = static_cast<int>(block_.steps[src].outgoing.size());
      t.line = p.source.line;
      block_.steps[src].outgoing.push_back(
          static_cast<int>(block_.transitions.size()));
      block_.transitions.push_back(std::move(t));
    }
  }

  void assign_statement_ids() {
    for (TestStep& step : block_.steps) {
      for (std::size_t i = 0; i < step.statements.size(); ++i) {
        VerificationStatement& st = step.statements[i];
        if (!st.id.empty()) continue;
        st.id = step.statements.size() == 1
                    ? step.name
                    : step.name + "_" + std::to_string(i + 1);
      }
    }
  }

  TokenStream ts_;
  TestBlock block_;
  detail::ExprContext ctx_;
  std::vector<PendingTransition> pending_;
};

}  // namespace

TestBlock parse_block(std::string_view source) {
  return BlockParser(source).parse();
}

TestBlock load_block(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_block(ss.str());
}

std::string to_string(const Diagnostic& d) {
  std::string out;
  if (d.line > 0) out += "line " + std::to_string(d.line) + ": ";
  if (!d.subject.empty()) out += d.subject + ": ";
  return out + d.message;
}

std::vector<Diagnostic> validate(const TestBlock& block) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string subject, std::string message, int line) {
    out.push_back(Diagnostic{std::move(subject), std::move(message), line});
  };
  const bool is_sequence = block.kind == BlockKind::kSequence;

  if (block.roots.empty()) report(block.name, "block has no steps", 0);

  std::set<std::string> names;
  for (const TestStep& s : block.steps) {
    if (!names.insert(s.name).second) {
      report("step " + s.name, "step name is not unique", s.line);
    }
  }

  auto check_children = [&](int parent, const std::string& parent_name) {
    const auto& kids = block.children_of(parent);
    if (block.mode_of(parent) != ChildMode::kWhen) {
      for (int c : kids) {
        const TestStep& s = block.steps[c];
        if (s.when_guard || s.is_otherwise) {
          report("step " + s.name,
                 "guarded step under a sequential parent " + parent_name,
                 s.line);
        }
      }
      return;
    }
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const TestStep& s = block.steps[kids[i]];
      if (s.is_otherwise) {
        if (i + 1 != kids.size()) {
          report("step " + s.name,
                 "'otherwise' must be the last child of " + parent_name,
                 s.line);
        }
      } else if (!s.when_guard) {
        report("step " + s.name,
               "missing when guard in when-decomposition of " + parent_name,
               s.line);
      }
    }
  };
  check_children(kNoStep, "the block");
  for (std::size_t i = 0; i < block.steps.size(); ++i) {
    const TestStep& s = block.steps[i];
    check_children(static_cast<int>(i), s.name);
    if (is_sequence && !s.statements.empty()) {
      report("step " + s.name, "verification statements in a test sequence",
             s.line);
    }
    if (!is_sequence && !s.actions.empty()) {
      report("step " + s.name, "assignments in a test assessment", s.line);
    }
    for (const Assignment& a : s.actions) {
      if (a.slot < 0 || a.slot >= static_cast<int>(block.symbols.size()) ||
          block.symbols[a.slot].role != SymbolRole::kOutput) {
        report("step " + s.name, "assignment to non-output '" + a.target + "'",
               a.line);
      }
    }
  }

  for (const Transition& t : block.transitions) {
    std::string subject = "transition " + t.source + " -> " + t.destination;
    int src = block.find_step(t.source);
    int dst = block.find_step(t.destination);
    if (src == kNoStep || dst == kNoStep) {
      report(subject, "unknown step", t.line);
      continue;
    }
    int parent = block.steps[src].parent;
    if (block.steps[dst].parent != parent) {
      report(subject, "source and destination are not siblings", t.line);
    } else if (block.mode_of(parent) == ChildMode::kWhen) {
      report(subject,
             "children of a when-decomposition are selected by guards only",
             t.line);
    }
    if (!t.guard || t.guard->type != ValueKind::kBool) {
      report(subject, "guard is not boolean", t.line);
    }
  }

  std::set<std::string> ids;
  for (const TestStep& s : block.steps) {
    for (const VerificationStatement& st : s.statements) {
      if (!ids.insert(st.id).second) {
        report("statement " + st.id, "statement id is not unique", st.line);
      }
      if (!st.body || st.body->type != ValueKind::kBool) {
        report("statement " + st.id, "body is not boolean", st.line);
      }
    }
  }

  for (const Symbol& sym : block.symbols) {
    if (sym.role == SymbolRole::kParam) {
      std::string subject = "parameter " + sym.name;
      if (!is_sequence) {
        report(subject, "assessments cannot declare parameters", sym.line);
      }
      if (sym.name.rfind("Hecate", 0) != 0) {
        report(subject, "parameter names must start with 'Hecate'", sym.line);
      }
      if (!sym.lower || !sym.upper) {
        report(subject, "missing domain 'in [lower, upper]'", sym.line);
      } else if (*sym.lower > *sym.upper) {
        report(subject, "lower > upper", sym.line);
      }
    } else if (sym.lower || sym.upper) {
      report("symbol " + sym.name, "only parameters take a domain", sym.line);
    }
    if (sym.role == SymbolRole::kConst && !sym.value) {
      report("constant " + sym.name, "constant without a value", sym.line);
    }
  }

  // Every reference must point at a declared symbol of the same name; `after`
  // thresholds made only of literals and constants must be nonnegative.
  auto check_expr = [&](const ExprPtr& e, const std::string& where, int line) {
    if (!e) return;
    visit(*e, [&](const Expr& node) {
      if (node.op == ExprOp::kRef || node.op == ExprOp::kHasChanged) {
        if (node.slot < 0 ||
            node.slot >= static_cast<int>(block.symbols.size()) ||
            block.symbols[node.slot].name != node.name) {
          report(where, "undeclared identifier '" + node.name + "'", line);
        }
      }
      if (node.op == ExprOp::kAfter) {
        bool fixed = true;
        std::vector<double> values(block.symbols.size(), 0.0);
        visit(*node.args[0], [&](const Expr& n) {
          if (n.op != ExprOp::kRef) return;
          const Symbol* sym = n.slot >= 0 && n.slot < static_cast<int>(block.symbols.size())
                                  ? &block.symbols[n.slot]
                                  : nullptr;
          if (!sym || sym->role != SymbolRole::kConst || !sym->value) {
            fixed = false;
          } else {
            values[n.slot] = *sym->value;
          }
        });
        if (fixed) {
          EvalEnv env;
          env.now = values;
          try {
            if (evaluate(*node.args[0], env) < 0.0) {
              report(where, "after() threshold is negative", line);
            }
          } catch (const Error& err) {
            report(where, err.what(), line);
          }
        }
      }
    });
  };
  for (const TestStep& s : block.steps) {
    check_expr(s.when_guard, "step " + s.name, s.line);
    for (const Assignment& a : s.actions) {
      check_expr(a.value, "step " + s.name, a.line);
    }
    for (const VerificationStatement& st : s.statements) {
      check_expr(st.body, "statement " + st.id, st.line);
    }
  }
  for (const Transition& t : block.transitions) {
    check_expr(t.guard, "transition " + t.source + " -> " + t.destination,
               t.line);
  }
  return out;
}

namespace {

std::string literal_text(double v, ValueKind kind) {
  if (kind == ValueKind::kBool) return v != 0.0 ? "true" : "false";
  return format_double(v);
}

class Printer {
 public:
  explicit Printer(const TestBlock& block) : block_(block) {}

  std::string run() {
    out_ << (block_.kind == BlockKind::kSequence ? "sequence " : "assessment ")
         << block_.name << " {\n";
    print_decls("inputs", SymbolRole::kInput);
    print_decls("outputs", SymbolRole::kOutput);
    print_decls("consts", SymbolRole::kConst);
    print_decls("params", SymbolRole::kParam);
    for (int r : block_.roots) print_step(r, 1);
    print_transitions(kNoStep, 1);
    out_ << "}\n";
    return out_.str();
  }

 private:
  void indent(int depth) {
    for (int i = 0; i < depth; ++i) out_ << "  ";
  }

  void print_decls(const char* section, SymbolRole role) {
    bool any = false;
    for (const Symbol& s : block_.symbols) {
      if (s.role != role) continue;
      if (!any) {
        out_ << "  " << section << " {\n";
        any = true;
      }
      out_ << "    " << s.name << ": " << kind_name(s.kind);
      if (s.value) out_ << " = " << literal_text(*s.value, s.kind);
      if (s.lower && s.upper) {
        out_ << " in [" << format_double(*s.lower) << ", "
             << format_double(*s.upper) << "]";
      }
      out_ << ";\n";
    }
    if (any) out_ << "  }\n";
  }

  void print_step(int index, int depth) {
    const TestStep& s = block_.steps[index];
    indent(depth);
    out_ << "step " << s.name;
    if (s.when_guard) out_ << " when " << to_string(*s.when_guard);
    if (s.is_otherwise) out_ << " otherwise";
    out_ << " {\n";
    for (const Assignment& a : s.actions) {
      indent(depth + 1);
      out_ << a.target << " = " << to_string(*a.value) << ";\n";
    }
    for (const VerificationStatement& st : s.statements) {
      indent(depth + 1);
      out_ << (st.kind == StatementKind::kAssert ? "assert(" : "verify(")
           << to_string(*st.body) << ") as " << st.id << ";\n";
    }
    for (int c : s.children) print_step(c, depth + 1);
    print_transitions(index, depth + 1);
    indent(depth);
    out_ << "}\n";
  }

  void print_transitions(int scope, int depth) {
    for (const Transition& t : block_.transitions) {
      int src = block_.find_step(t.source);
      if (src == kNoStep || block_.steps[src].parent != scope) continue;
      indent(depth);
      out_ << "trans " << t.source << " -> " << t.destination << " when "
           << to_string(*t.guard) << ";\n";
    }
  }

  const TestBlock& block_;
  std::ostringstream out_;
};

bool same_steps(const TestStep& a, const TestStep& b) {
  if (a.name != b.name || a.parent != b.parent || a.children != b.children ||
      a.child_mode != b.child_mode || a.is_otherwise != b.is_otherwise ||
      !same_expr(a.when_guard, b.when_guard) || a.outgoing != b.outgoing ||
      a.actions.size() != b.actions.size() ||
      a.statements.size() != b.statements.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.actions.size(); ++i) {
    if (a.actions[i].target != b.actions[i].target ||
        a.actions[i].slot != b.actions[i].slot ||
        !same_expr(a.actions[i].value, b.actions[i].value)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    const auto& x = a.statements[i];
    const auto& y = b.statements[i];
    if (x.id != y.id || x.kind != y.kind || !same_expr(x.body, y.body)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string print_block(const TestBlock& block) {
  return Printer(block).run();
}

bool same_block(const TestBlock& a, const TestBlock& b) {
  if (a.kind != b.kind || a.name != b.name || a.symbols != b.symbols ||
      a.roots != b.roots || a.root_mode != b.root_mode ||
      a.steps.size() != b.steps.size() ||
      a.transitions.size() != b.transitions.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (!same_steps(a.steps[i], b.steps[i])) return false;
  }
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    const Transition& x = a.transitions[i];
    const Transition& y = b.transitions[i];
    if (x.source != y.source || x.destination != y.destination ||
        x.order_index != y.order_index || !same_expr(x.guard, y.guard)) {
      return false;
    }
  }
  return true;
}

}  // namespace tbf
