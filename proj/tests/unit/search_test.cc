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


#include "tbf/search.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/test_util.h"
#include "tbf/bundle.h"
#include "tbf/error.h"
#include "tbf/stepmachine.h"

namespace tbf {
namespace {

using testing::code_of;

SearchSpace box(std::vector<std::pair<double, double>> bounds) {
  SearchSpace s;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    s.params.push_back(Parameter{"p" + std::to_string(i), bounds[i].first, bounds[i].second});
  }
  return s;
}

TEST(Space, PacemakerParameters) {
  Bundle b = load_bundle("pacemaker");
  SearchSpace s = extract_space(b.pseq);
  ASSERT_EQ(s.dimension(), 3u);
  EXPECT_EQ(s.params[2].name, "Hecate_HEARTFAIL");
  EXPECT_EQ(s.params[2].lower, 20.0);
  EXPECT_EQ(s.params[2].upper, 60.0);
  EXPECT_EQ(s.midpoint(), (std::vector<double>{-1.15, 0.1, 40.0}));
  EXPECT_EQ(code_of([&] { extract_space(b.sequence); }), ErrorCode::kNoParameters);
}

TEST(Space, DegenerateAxis) {
  TestBlock p = parse_block(
      "sequence s { outputs { A: real; } params { Hecate_X: real in [5, 5]; } "
      "step P { A = Hecate_X; } }");
  SearchSpace s = extract_space(p);
  EXPECT_EQ(s.midpoint(), std::vector<double>{5.0});
  Rng rng(1);
  EXPECT_EQ(uniform_point(s, rng), std::vector<double>{5.0});
  std::vector<double> cur = {5.0};
  EXPECT_EQ(propose(cur, s, 1.0, 1.0, 0.5, rng), std::vector<double>{5.0});
  TestBlock c = instantiate(p, cur);
  EXPECT_EQ(run_sequence(c, {}, TimeGrid(1.0, 3)).signal("A").values,
            (std::vector<double>{5, 5, 5}));
}

TEST(Instantiate, ChecksDomains) {
  Bundle b = load_bundle("pacemaker");
  std::vector<double> v = {-1.0, 0.1, 61.0};
  EXPECT_EQ(code_of([&] { instantiate(b.pseq, v); }), ErrorCode::kOutOfDomain);
  std::vector<double> shortv = {-1.0, 0.1};
  EXPECT_EQ(code_of([&] { instantiate(b.pseq, shortv); }), ErrorCode::kOutOfDomain);
  v[2] = 60.0;
  TestBlock c = instantiate(b.pseq, v);
  EXPECT_TRUE(c.slots_with_role(SymbolRole::kParam).empty());
  EXPECT_TRUE(validate(c).empty());
}

TEST(Instantiate, NeutralValuesGiveTheDefaultSequence) {
  // Widen the offset domains to contain zero; the offsets are then neutral.
  std::string text(bundle_text("pacemaker", kParamSequenceFile));
  text = std::regex_replace(text, std::regex(R"(\[-1\.5, -0\.8\])"), "[-1.5, 0]");
  TestBlock pseq = parse_block(text);
  std::vector<double> v = {0.0, 0.0, 40.0};
  TestBlock c = instantiate(pseq, v);
  Bundle b = load_bundle("pacemaker");
  const TimeGrid g = b.model.grid();
  EXPECT_EQ(run_sequence(c, {}, g).signals(), run_sequence(b.sequence, {}, g).signals());
}

TEST(Annealing, FrozenChainDoesNotMove) {
  SearchSpace s = box({{0, 1}, {-3, 3}});
  Rng rng(4);
  std::vector<double> cur = {0.25, 1.0};
  EXPECT_EQ(propose(cur, s, 0.0, 1.0, 0.25, rng), cur);
  EXPECT_FALSE(metropolis_accept(0.1, 0.0, rng));
  EXPECT_TRUE(metropolis_accept(0.0, 0.0, rng));
  EXPECT_TRUE(metropolis_accept(-1.0, 0.0, rng));
}

TEST(Annealing, ProposalsStayInTheBox) {
  SearchSpace s = box({{0, 1}, {-3, 3}});
  Rng rng(5);
  std::vector<double> cur = {0.99, -2.9};
  for (int i = 0; i < 5000; ++i) {
    cur = propose(cur, s, 10.0, 1.0, 1.0, rng);
    ASSERT_TRUE(s.contains(cur));
  }
}

TEST(Annealing, MetropolisFrequency) {
  Rng rng(6);
  const int n = 10000;
  for (double t : {0.5, 1.0, 2.0}) {
    int accepted = 0;
    for (int i = 0; i < n; ++i) accepted += metropolis_accept(1.0, t, rng);
    EXPECT_NEAR(static_cast<double>(accepted) / n, std::exp(-1.0 / t), 0.05);
  }
}

TEST(Uniform, KolmogorovSmirnov) {
  SearchSpace s = box({{2, 5}});
  Rng rng(7);
  const int n = 10000;
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(uniform_point(s, rng)[0]);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = (xs[i] - 2.0) / 3.0;
    d = std::max({d, std::fabs(cdf - static_cast<double>(i) / n),
                  std::fabs(static_cast<double>(i + 1) / n - cdf)});
  }
  EXPECT_LT(d, 1.36 / std::sqrt(static_cast<double>(n)));
}

TEST(Optimize, StopsAtFirstNegativeFitness) {
  SearchSpace s = box({{0, 1}});
  int calls = 0;
  Objective f = [&](std::span<const double>) { return ++calls == 3 ? -0.5 : 1.0; };
  for (Algorithm a : {Algorithm::kSimulatedAnnealing, Algorithm::kUniformRandom}) {
    calls = 0;
    SearchConfig c;
    c.algorithm = a;
    Outcome o = optimize(s, f, c);
    EXPECT_EQ(o.status, Status::kFailureRevealing);
    EXPECT_EQ(o.iterations, 3);
    EXPECT_EQ(o.history.size(), 3u);
    EXPECT_EQ(o.fitness, -0.5);
    EXPECT_EQ(o.values, o.history.back().values);
  }
}

TEST(Optimize, AnnealingStartsAtTheMidpoint) {
  SearchSpace s = box({{0, 4}, {10, 20}});
  SearchConfig c;
  c.max_iterations = 5;
  Outcome o = optimize(s, [](std::span<const double> v) { return v[0] + 1.0; }, c);
  EXPECT_EQ(o.history.front().values, (std::vector<double>{2, 15}));
  EXPECT_TRUE(o.history.front().accepted);
  EXPECT_EQ(o.status, Status::kNoFaultFound);
  EXPECT_EQ(o.iterations, 5);
}

TEST(Optimize, EvaluationErrorsAreRecorded) {
  SearchSpace s = box({{0, 1}});
  int calls = 0;
  Objective f = [&](std::span<const double>) -> double {
    if (++calls % 2 == 0) throw Error(ErrorCode::kNumericError, "boom");
    return 1.0;
  };
  SearchConfig c;
  c.max_iterations = 10;
  Outcome o = optimize(s, f, c);
  EXPECT_EQ(o.iterations, 10);
  int errors = 0;
  for (const HistoryEntry& h : o.history) {
    if (!h.fitness) {
      ++errors;
      EXPECT_EQ(h.error, "NumericError: boom");
      EXPECT_FALSE(h.accepted);
    }
  }
  EXPECT_EQ(errors, 5);
  std::ostringstream out;
  write_history(out, s, o);
  EXPECT_NE(out.str().find(",NA,0\n"), std::string::npos);
  EXPECT_EQ(out.str().substr(0, 22), "iter,p0,fitness,accept");
}

TEST(Optimize, ConfigChecks) {
  SearchSpace s = box({{0, 1}});
  Objective f = [](std::span<const double>) { return 1.0; };
  SearchConfig c;
  c.max_iterations = 0;
  EXPECT_EQ(code_of([&] { optimize(s, f, c); }), ErrorCode::kInvalidArgument);
  c = SearchConfig{};
  c.cooling = 1.0;
  EXPECT_EQ(code_of([&] { optimize(s, f, c); }), ErrorCode::kInvalidArgument);
  c = SearchConfig{};
  c.budget_seconds = 0.0;
  EXPECT_EQ(code_of([&] { optimize(s, f, c); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { optimize(SearchSpace{}, f, SearchConfig{}); }),
            ErrorCode::kNoParameters);
  EXPECT_EQ(parse_algorithm("sa"), Algorithm::kSimulatedAnnealing);
  EXPECT_EQ(parse_algorithm("uniform_random"), Algorithm::kUniformRandom);
  EXPECT_EQ(code_of([] { parse_algorithm("genetic"); }), ErrorCode::kInvalidArgument);
}

TEST(Optimize, BudgetStopsEarly) {
  SearchSpace s = box({{0, 1}});
  SearchConfig c;
  c.max_iterations = 1000000;
  c.budget_seconds = 0.05;
  Outcome o = optimize(s, [](std::span<const double>) { return 1.0; }, c);
  EXPECT_LT(o.iterations, 1000000);
  EXPECT_GE(o.elapsed_ms, 50.0);
}

bool same_outcome(const Outcome& a, const Outcome& b) {
  if (a.status != b.status || a.values != b.values || a.fitness != b.fitness ||
      a.iterations != b.iterations || a.history.size() != b.history.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    if (a.history[i].values != b.history[i].values ||
        a.history[i].fitness != b.history[i].fitness ||
        a.history[i].accepted != b.history[i].accepted) {
      return false;
    }
  }
  return true;
}

TEST(Falsify, FaultyAtLiteIsFalsifiedReproducibly) {
  Bundle b = load_bundle("at_lite", true);
  SearchConfig c;
  c.seed = 1;
  Outcome o = falsify(b.model, b.pseq, b.assessment, c);
  EXPECT_EQ(o.status, Status::kFailureRevealing);
  EXPECT_LT(o.fitness, 0.0);
  EXPECT_TRUE(extract_space(b.pseq).contains(o.values));
  EXPECT_TRUE(same_outcome(o, falsify(b.model, b.pseq, b.assessment, c)));
  // The reported candidate replays to the same failing verdict.
  SimOptions opt;
  opt.assessment = compile(b.assessment);
  SimResult r = simulate(b.model, instantiate(b.pseq, o.values), {}, opt);
  EXPECT_EQ(r.verdict->final_fitness, o.fitness);
  EXPECT_EQ(r.verdict->overall, Outcome3::kFail);
}

TEST(Falsify, CorrectModelRunsTheFullBudget) {
  Bundle b = load_bundle("at_lite", false);
  SearchConfig c;
  c.max_iterations = 40;
  for (Algorithm a : {Algorithm::kSimulatedAnnealing, Algorithm::kUniformRandom}) {
    c.algorithm = a;
    Outcome o = falsify(b.model, b.pseq, b.assessment, c);
    EXPECT_EQ(o.status, Status::kNoFaultFound);
    EXPECT_EQ(o.iterations, 40);
    EXPECT_EQ(o.history.size(), 40u);
    EXPECT_GE(o.fitness, 0.0);
  }
}

TEST(Falsify, RejectsBadArtifacts) {
  Bundle b = load_bundle("at_lite", true);
  EXPECT_EQ(code_of([&] { falsify(b.model, b.sequence, b.assessment, SearchConfig{}); }),
            ErrorCode::kNoParameters);
  Bundle p = load_bundle("pacemaker");
  EXPECT_EQ(code_of([&] { falsify(b.model, p.pseq, b.assessment, SearchConfig{}); }),
            ErrorCode::kSignalMismatch);
}

TEST(Baseline, ProfileSpaceAndChecks) {
  Bundle b = load_bundle("heatpump", true);
  SearchSpace s = profile_space(b.profile);
  EXPECT_EQ(s.dimension(), b.profile.dimension());
  EXPECT_EQ(s.params[0].name, "T_SET[0]");
  SearchConfig c;
  c.max_iterations = 3;
  Outcome o = baseline_falsify(b.model, b.profile, b.formula, c);
  EXPECT_EQ(o.history.size(), static_cast<std::size_t>(o.iterations));
  Bundle other = load_bundle("tracker");
  EXPECT_EQ(code_of([&] { baseline_falsify(b.model, other.profile, b.formula, c); }),
            ErrorCode::kSignalMismatch);
  EXPECT_EQ(code_of([&] {
              baseline_falsify(b.model, b.profile, parse_stl("G[0, 400] T_ROOM < 30"), c);
            }),
            ErrorCode::kIntervalOutOfRange);
}

}  // namespace
}  // namespace tbf
