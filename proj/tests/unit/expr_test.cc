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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/generators.h"
#include "support/oracle.h"
#include "support/test_util.h"
#include "tbf/error.h"
#include "tbf/fitness.h"
#include "tbf/testlang.h"

namespace tbf {
namespace {

using testing::code_of;

// Assessment over X, Y: real, N: int, B: bool with one statement.
TestBlock wrap(const std::string& body) {
  return parse_block(
      "assessment t {\n"
      "  inputs { X: real; Y: real; N: int; B: bool; }\n"
      "  params { P: real in [0, 10]; }\n"
      "  step S { verify(" + body + ") as V; }\n"
      "}\n");
}

struct Probe {
  TestBlock block;
  ExprPtr expr;
};

Probe probe(const std::string& body) {
  Probe p{wrap(body), nullptr};
  p.expr = p.block.steps[0].statements[0].body;
  return p;
}

EvalEnv env_of(const std::vector<double>& now, const std::vector<double>& prev = {},
               double et = 0.0) {
  EvalEnv env;
  env.now = now;
  env.prev = prev;
  env.et = et;
  env.k = prev.empty() ? 0 : 1;
  return env;
}

TEST(Expr, ArithmeticAndPrecedence) {
  std::vector<double> v = {2.0, 3.0, 4.0, 1.0, 0.0};
  EXPECT_TRUE(holds(*probe("1 + 2 * 3 == 7").expr, env_of(v)));
  EXPECT_TRUE(holds(*probe("(1 + 2) * 3 == 9").expr, env_of(v)));
  EXPECT_TRUE(holds(*probe("X - Y - 1 == -2").expr, env_of(v)));
  EXPECT_TRUE(holds(*probe("N / X == 2").expr, env_of(v)));
  EXPECT_TRUE(holds(*probe("-X + Y == 1").expr, env_of(v)));
  EXPECT_TRUE(holds(*probe("not X > Y and B").expr, env_of(v)));
  EXPECT_TRUE(holds(*probe("X > Y or B and N == 4").expr, env_of(v)));
  EXPECT_FALSE(holds(*probe("(X > Y or B) and N == 5").expr, env_of(v)));
  EXPECT_TRUE(holds(*probe("X ~= Y").expr, env_of(v)));
}

TEST(Expr, DivisionByZeroIsAnError) {
  std::vector<double> v = {0.0, 0.0, 0.0, 0.0, 0.0};
  Probe p = probe("Y / X > 0");
  EXPECT_EQ(code_of([&] { holds(*p.expr, env_of(v)); }), ErrorCode::kEvalError);
}

TEST(Expr, HasChangedReadsThePreviousSample) {
  Probe p = probe("hasChanged(N)");
  std::vector<double> a = {0, 0, 1, 0, 0};
  std::vector<double> b = {0, 0, 2, 0, 0};
  EXPECT_FALSE(holds(*p.expr, env_of(a)));
  EXPECT_FALSE(holds(*p.expr, env_of(a, a)));
  EXPECT_TRUE(holds(*p.expr, env_of(b, a)));
}

TEST(Expr, AfterToleratesRounding) {
  EXPECT_TRUE(after_elapsed(2.0, 2.0));
  EXPECT_TRUE(after_elapsed(199 * 0.01 + 0.01, 2.0));
  EXPECT_TRUE(after_elapsed(2.0 - 5e-10, 2.0));
  EXPECT_FALSE(after_elapsed(1.99, 2.0));
  Probe p = probe("after(0.3, sec)");
  std::vector<double> v(5, 0.0);
  EXPECT_TRUE(holds(*p.expr, env_of(v, {}, 0.1 + 0.2)));
  EXPECT_FALSE(holds(*p.expr, env_of(v, {}, 0.29)));
}

TEST(Expr, EtIsTheStepElapsedTime) {
  Probe p = probe("et < 1");
  std::vector<double> v(5, 0.0);
  EXPECT_TRUE(holds(*p.expr, env_of(v, {}, 0.99)));
  EXPECT_FALSE(holds(*p.expr, env_of(v, {}, 1.0)));
}

TEST(Robustness, RelationalOperators) {
  std::vector<double> v = {2.0, 5.0, 0.0, 0.0, 0.0};
  auto r = [&](const std::string& s) { return robustness(*probe(s).expr, env_of(v)); };
  EXPECT_EQ(r("X < Y"), 3.0);
  EXPECT_EQ(r("X <= Y"), 3.0);
  EXPECT_EQ(r("X > Y"), -3.0);
  EXPECT_EQ(r("X >= Y"), -3.0);
  EXPECT_EQ(r("X == Y"), -3.0);
  EXPECT_EQ(r("X ~= Y"), 3.0);
  EXPECT_EQ(r("X < Y and X > 1"), 1.0);
  EXPECT_EQ(r("X > Y or X > 1"), 1.0);
  EXPECT_EQ(r("not X < Y"), -3.0);
}

TEST(Robustness, BooleanAtomsAndCap) {
  std::vector<double> v = {1e12, 0.0, 0.0, 1.0, 0.0};
  auto r = [&](const std::string& s) { return robustness(*probe(s).expr, env_of(v)); };
  EXPECT_EQ(r("B"), kRobustnessCap);
  EXPECT_EQ(r("not B"), -kRobustnessCap);
  EXPECT_EQ(r("X > 0"), kRobustnessCap);
  EXPECT_EQ(r("X < 0"), -kRobustnessCap);
}

TEST(Robustness, BoundaryOfStrictComparison) {
  std::vector<double> v = {1.0, 1.0, 0.0, 0.0, 0.0};
  Probe lt = probe("X < Y");
  Probe le = probe("X <= Y");
  Probe ne = probe("X ~= Y");
  EvalEnv env = env_of(v);
  EXPECT_EQ(robustness(*lt.expr, env), 0.0);
  EXPECT_TRUE(violates(0.0, *lt.expr, env));
  EXPECT_FALSE(violates(0.0, *le.expr, env));
  EXPECT_TRUE(violates(0.0, *ne.expr, env));
  EXPECT_TRUE(violates(-1.0, *le.expr, env));
  EXPECT_FALSE(violates(1.0, *lt.expr, env));
}

TEST(Robustness, MonotoneInTheMargin) {
  Probe p = probe("X <= 2");
  double last = kRobustnessCap;
  for (double x = -3.0; x <= 5.0; x += 0.25) {
    std::vector<double> v = {x, 0.0, 0.0, 0.0, 0.0};
    const double rob = robustness(*p.expr, env_of(v));
    EXPECT_LT(rob, last);
    EXPECT_EQ(rob >= 0.0, holds(*p.expr, env_of(v)));
    last = rob;
  }
}

TEST(Expr, SubstituteReplacesParameters) {
  Probe p = probe("X < P + 1");
  const int slot = p.block.find_symbol("P");
  std::vector<int> slots = {slot};
  std::vector<double> values = {2.5};
  ExprPtr e = substitute(p.expr, slots, values);
  EXPECT_EQ(to_string(*e), "(X < (2.5 + 1))");
  std::vector<double> v = {3.0, 0.0, 0.0, 0.0, 0.0};
  EXPECT_TRUE(holds(*e, env_of(v)));
}

TEST(Expr, AgreesWithReferenceSemantics) {
  gen::Rng rng(11);
  int errors = 0;
  for (int i = 0; i < 2000; ++i) {
    Probe p = probe(gen::bool_expr(rng, 3));
    std::vector<std::vector<double>> in = gen::block_inputs(rng, 2);
    std::vector<double> prev = in[0];
    std::vector<double> now = in[1];
    prev.push_back(0.0);
    now.push_back(0.0);
    EvalEnv env = env_of(now, prev, 0.5);
    oracle::Env oenv{1, &now, &prev, 0.5};
    bool threw = false;
    double got = 0.0;
    bool truth = false;
    try {
      got = robustness(*p.expr, env);
      truth = holds(*p.expr, env);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kEvalError);
      threw = true;
    }
    bool othrew = false;
    double want = 0.0;
    bool otruth = false;
    try {
      want = oracle::rob(*p.expr, oenv);
      otruth = oracle::truth(*p.expr, oenv);
    } catch (const Error&) {
      othrew = true;
    }
    ASSERT_EQ(threw, othrew) << to_string(*p.expr);
    errors += threw;
    if (threw) continue;
    EXPECT_EQ(got, want) << to_string(*p.expr);
    EXPECT_EQ(truth, otruth) << to_string(*p.expr);
    if (got != 0.0) EXPECT_EQ(got > 0.0, truth) << to_string(*p.expr);
  }
  EXPECT_LT(errors, 200);
}

TEST(Expr, PrintedFormReparses) {
  gen::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    Probe a = probe(gen::bool_expr(rng, 3));
    Probe b = probe(to_string(*a.expr));
    EXPECT_TRUE(same_expr(a.expr, b.expr)) << to_string(*a.expr);
  }
}

}  // namespace
}  // namespace tbf
