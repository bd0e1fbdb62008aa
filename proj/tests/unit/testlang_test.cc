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

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "support/generators.h"
#include "support/test_util.h"
#include "tbf/bundle.h"
#include "tbf/error.h"

namespace tbf {
namespace {

using testing::code_of;

std::string text(std::string_view model, std::string_view file) {
  return std::string(bundle_text(model, file));
}

bool mentions(const std::vector<Diagnostic>& diags, const std::string& needle) {
  for (const Diagnostic& d : diags) {
    if (to_string(d).find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(Parse, PacemakerSequence) {
  TestBlock b = parse_block(text("pacemaker", kSequenceFile));
  EXPECT_EQ(b.kind, BlockKind::kSequence);
  EXPECT_EQ(b.name, "pacemaker_default");
  ASSERT_EQ(b.steps.size(), 4u);
  EXPECT_EQ(b.transitions.size(), 3u);
  ASSERT_EQ(b.roots.size(), 2u);
  EXPECT_EQ(b.steps[b.roots[0]].name, "AAI_Mode_3");
  EXPECT_EQ(b.steps[b.roots[1]].name, "END");
  const int mode3 = b.find_step("AAI_Mode_3");
  ASSERT_EQ(b.steps[mode3].children.size(), 2u);
  EXPECT_EQ(b.steps[b.steps[mode3].children[0]].name, "AAI_Mode_3_OFF");
  EXPECT_EQ(b.steps[b.find_step("AAI_Mode_3_OFF")].parent, mode3);
  EXPECT_EQ(b.signals_with_role(SymbolRole::kOutput),
            (std::vector<SignalDecl>{{"MODE", ValueKind::kInt},
                                     {"ATR_CMP_DETECT", ValueKind::kBool}}));
  EXPECT_TRUE(validate(b).empty());
}

TEST(Parse, PacemakerAssessmentIsValid) {
  TestBlock b = parse_block(text("pacemaker", kAssessmentFile));
  EXPECT_EQ(b.kind, BlockKind::kAssessment);
  EXPECT_TRUE(validate(b).empty());
  EXPECT_EQ(b.statement_count(), 4u);
  const int mode3 = b.find_step("Mode_3");
  EXPECT_EQ(b.mode_of(b.find_step("Mode_selection")), ChildMode::kWhen);
  EXPECT_TRUE(b.steps[mode3].when_guard);
  EXPECT_TRUE(b.steps[b.find_step("Else")].is_otherwise);
  EXPECT_EQ(b.mode_of(mode3), ChildMode::kSequential);
  const int sensing = b.find_step("Sensing");
  ASSERT_EQ(b.steps[sensing].outgoing.size(), 2u);
  EXPECT_EQ(b.transitions[b.steps[sensing].outgoing[0]].destination, "Heartbeat");
  EXPECT_EQ(b.transitions[b.steps[sensing].outgoing[1]].order_index, 1);
}

TEST(Parse, EveryBundleArtifactValidates) {
  for (const char* m : {"pacemaker", "at_lite", "heatpump", "tracker"}) {
    for (std::string_view f : {kSequenceFile, kParamSequenceFile, kAssessmentFile}) {
      TestBlock b = parse_block(text(m, f));
      EXPECT_TRUE(validate(b).empty()) << m << "/" << f;
    }
  }
}

TEST(Parse, DuplicateStepName) {
  const char* src =
      "sequence s {\n  outputs { A: real; }\n  step One { A = 1; }\n  step One { A = 2; }\n}\n";
  try {
    parse_block(src);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateStepName);
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Parse, UndeclaredIdentifier) {
  EXPECT_EQ(code_of([] {
              parse_block("sequence s {\n  outputs { A: real; }\n  step One { A = FOO; }\n}\n");
            }),
            ErrorCode::kUndeclaredIdentifier);
  EXPECT_EQ(code_of([] {
              parse_block("sequence s {\n  outputs { A: real; }\n  step One { A = 1; }\n"
                          "  trans One -> Two when true;\n}\n");
            }),
            ErrorCode::kUndeclaredIdentifier);
}

TEST(Parse, SyntaxErrorsCarryPositions) {
  try {
    parse_block("sequence s {\n  outputs { A: real; }\n  step One { A = 1 + ; }\n}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSyntaxError);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 22);
  }
  EXPECT_EQ(code_of([] { parse_block("sequence s {"); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([] { parse_block("tabel s { }"); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([] {
              parse_block("sequence s { outputs { A: real; } step X { A = after(1, min); } }");
            }),
            ErrorCode::kSyntaxError);
}

TEST(Parse, TypeErrors) {
  EXPECT_EQ(code_of([] {
              parse_block("sequence s { outputs { A: bool; } step X { A = 1 + 2; } }");
            }),
            ErrorCode::kTypeError);
  EXPECT_EQ(code_of([] {
              parse_block("assessment s { inputs { A: real; } step X { verify(A + 1) as V; } }");
            }),
            ErrorCode::kTypeError);
  EXPECT_EQ(code_of([] {
              parse_block("sequence s { inputs { I: real; } outputs { A: real; } "
                          "step X { I = 1; } }");
            }),
            ErrorCode::kTypeError);
}

TEST(Validate, ReversedParameterDomain) {
  TestBlock b = parse_block(
      "sequence s {\n  outputs { A: real; }\n  params { Hecate_X: real in [5, 2]; }\n"
      "  step One { A = Hecate_X; }\n}\n");
  std::vector<Diagnostic> d = validate(b);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].subject, "parameter Hecate_X");
  EXPECT_EQ(d[0].message, "lower > upper");
  EXPECT_EQ(d[0].line, 3);
}

TEST(Validate, OtherwiseMustBeLast) {
  TestBlock b = parse_block(
      "assessment a {\n  inputs { M: int; }\n  step Top {\n"
      "    step Else otherwise { }\n    step Three when M == 3 { }\n  }\n}\n");
  std::vector<Diagnostic> d = validate(b);
  EXPECT_TRUE(mentions(d, "'otherwise' must be the last child of Top"));
}

TEST(Validate, StructuralRules) {
  EXPECT_TRUE(mentions(
      validate(parse_block("sequence s { outputs { A: real; } inputs { M: int; } "
                           "step T { step P when M == 1 { } step Q { } } }")),
      "missing when guard"));
  EXPECT_TRUE(mentions(
      validate(parse_block("sequence s { outputs { A: real; } "
                           "step T { step P { } } step U { } trans P -> U when true; }")),
      "not siblings"));
  EXPECT_TRUE(mentions(
      validate(parse_block("sequence s { outputs { A: real; } "
                           "step T { verify(A > 0) as V; } }")),
      "verification statements in a test sequence"));
  EXPECT_TRUE(mentions(
      validate(parse_block("assessment a { inputs { A: real; } "
                           "step T { verify(A > 0) as V; } step U { verify(A < 1) as V; } }")),
      "statement id is not unique"));
  EXPECT_TRUE(mentions(
      validate(parse_block("sequence s { outputs { A: real; } params { X: real in [0, 1]; } "
                           "step T { A = X; } }")),
      "must start with 'Hecate'"));
  EXPECT_TRUE(mentions(
      validate(parse_block("sequence s { outputs { A: real; } "
                           "step T { A = 1; } step U { } trans T -> U when after(-1, sec); }")),
      "after() threshold is negative"));
  EXPECT_TRUE(mentions(
      validate(parse_block("assessment a { inputs { M: int; } "
                           "step T { step P when M == 1 { } step Q otherwise { } } "
                           "trans P -> Q when true; }")),
      "selected by guards only"));
}

TEST(Validate, DefaultStatementIds) {
  TestBlock b = parse_block(
      "assessment a { inputs { A: real; } step T { verify(A > 0); verify(A < 1); } "
      "step U { verify(A < 2); } }");
  EXPECT_EQ(b.steps[0].statements[0].id, "T_1");
  EXPECT_EQ(b.steps[0].statements[1].id, "T_2");
  EXPECT_EQ(b.steps[1].statements[0].id, "U");
}

TEST(Print, BundleArtifactsRoundTrip) {
  for (const char* m : {"pacemaker", "at_lite", "heatpump", "tracker"}) {
    for (std::string_view f : {kSequenceFile, kParamSequenceFile, kAssessmentFile}) {
      TestBlock a = parse_block(text(m, f));
      std::string printed = print_block(a);
      TestBlock b = parse_block(printed);
      EXPECT_TRUE(same_block(a, b)) << m << "/" << f << "\n" << printed;
      EXPECT_EQ(print_block(b), printed);
    }
  }
}

TEST(Print, RandomBlocksRoundTrip) {
  gen::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    gen::BlockOptions o;
    o.kind = i % 2 ? BlockKind::kSequence : BlockKind::kAssessment;
    o.max_depth = 3;
    o.assert_probability = 0.2;
    TestBlock a = parse_block(gen::block_text(rng, o));
    TestBlock b = parse_block(print_block(a));
    ASSERT_TRUE(same_block(a, b)) << print_block(a);
  }
}

TEST(Parse, MutatedInputNeverCrashes) {
  gen::Rng rng(9);
  const std::string base = text("pacemaker", kAssessmentFile);
  const std::string alphabet = "{}();:=<>-+*/ \nabXY019.";
  for (int i = 0; i < 2000; ++i) {
    std::string s = base;
    for (int m = std::uniform_int_distribution<int>(1, 4)(rng); m > 0; --m) {
      std::size_t at = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
      char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: s[at] = c; break;
        case 1: s.insert(at, 1, c); break;
        default: s.erase(at, 1); break;
      }
    }
    try {
      TestBlock b = parse_block(s);
      validate(b);
    } catch (const Error& e) {
      EXPECT_GE(e.line(), 0);
    }
  }
}

TEST(Parse, LoadMissingFile) {
  EXPECT_EQ(code_of([] { load_block("/nonexistent/x.tseq"); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace tbf
