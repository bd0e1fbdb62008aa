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

// Test Sequence / Test Assessment blocks: AST, text reader, printer and
// static checks.
//
// Concrete syntax:
//
//   block := ("sequence" | "assessment") IDENT "{" decls* item* "}"
//   decls := ("inputs" | "outputs" | "consts" | "params") "{" decl* "}"
//   decl  := IDENT ":" ("real" | "bool" | "int") ("=" literal)?
//            ("in" "[" num "," num "]")? ";"
//   item  := step | trans
//   step  := "step" IDENT ("when" expr | "otherwise")? "{" body* "}"
//   body  := IDENT "=" expr ";"
//          | ("verify" | "assert") "(" expr ")" ("as" IDENT)? ";"
//          | step | trans
//   trans := "trans" IDENT "->" IDENT "when" expr ";"
//
// A `trans` inside a step connects two children of that step; at block level
// it connects two top-level steps. Children carrying `when` guards form a
// when-decomposition of their parent.

#ifndef TBF_TESTLANG_H_
#define TBF_TESTLANG_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbf/expr.h"

namespace tbf {

enum class BlockKind { kSequence, kAssessment };
enum class ChildMode { kSequential, kWhen };
enum class StatementKind { kVerify, kAssert };

struct Assignment {
  std::string target;
  int slot = -1;
  ExprPtr value;
  int line = 0;
};

struct VerificationStatement {
  std::string id;
  StatementKind kind = StatementKind::kVerify;
  ExprPtr body;
  int line = 0;
};

struct Transition {
  std::string source;
  std::string destination;
  ExprPtr guard;
  // Position among the source step's outgoing transitions.
  int order_index = 0;
  int line = 0;
};

inline constexpr int kNoStep = -1;

struct TestStep {
  std::string name;
  int parent = kNoStep;
  std::vector<int> children;
  ChildMode child_mode = ChildMode::kSequential;
  // Set iff the parent is when-decomposed; null for the `otherwise` arm.
  ExprPtr when_guard;
  bool is_otherwise = false;
  std::vector<Assignment> actions;
  std::vector<VerificationStatement> statements;
  // Indices into TestBlock::transitions, in firing priority order.
  std::vector<int> outgoing;
  int line = 0;
};

struct TestBlock {
  BlockKind kind = BlockKind::kSequence;
  std::string name;
  // Symbol table; expression slots index into it.
  std::vector<Symbol> symbols;
  // Flat step table; parents precede their children.
  std::vector<TestStep> steps;
  std::vector<int> roots;
  ChildMode root_mode = ChildMode::kSequential;
  std::vector<Transition> transitions;

  int find_step(std::string_view name) const;
  int find_symbol(std::string_view name) const;
  // Children of `step`, or the roots for kNoStep.
  const std::vector<int>& children_of(int step) const;
  ChildMode mode_of(int step) const;
  bool is_leaf(int step) const { return steps[step].children.empty(); }

  std::vector<int> slots_with_role(SymbolRole role) const;
  std::vector<SignalDecl> signals_with_role(SymbolRole role) const;
  std::size_t statement_count() const;
};

// Throws kSyntaxError, kDuplicateStepName, kUndeclaredIdentifier or
// kTypeError with the source position.
TestBlock parse_block(std::string_view source);
// Reads and parses a file; kIoError if unreadable.
TestBlock load_block(const std::string& path);

struct Diagnostic {
  std::string subject;  // step, transition or parameter the problem is about
  std::string message;
  int line = 0;
};

std::string to_string(const Diagnostic& d);

// One entry per violated block invariant; empty means valid.
std::vector<Diagnostic> validate(const TestBlock& block);

std::string print_block(const TestBlock& block);

// Structural equality ignoring source positions.
bool same_block(const TestBlock& a, const TestBlock& b);

}  // namespace tbf

#endif  // TBF_TESTLANG_H_
