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


#include "tbf/experiment.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/test_util.h"
#include "tbf/config.h"
#include "tbf/error.h"

namespace tbf {
namespace {

using testing::code_of;

SearchConfig quick(int iters) {
  SearchConfig c;
  c.max_iterations = iters;
  return c;
}

std::vector<SummaryRow> rows_of(const std::vector<RunRecord>& records) {
  std::vector<SummaryRow> out;
  for (const RunRecord& r : records) out.push_back(summary_row(r));
  return out;
}

SummaryRow row(const std::string& method, Status status, int iters, double ms = 1.0) {
  SummaryRow r;
  r.model = "m";
  r.method = method;
  r.status = status;
  r.iterations = iters;
  r.elapsed_ms = ms;
  r.fitness = status == Status::kFailureRevealing ? -1.0 : 2.0;
  r.values = {0.5, 1.0};
  return r;
}

TEST(Methods, Names) {
  for (const char* n : {"tb_sa", "tb_uniform", "stl_sa", "stl_uniform"}) {
    EXPECT_EQ(method_name(parse_method(n)), n);
  }
  EXPECT_EQ(parse_method("stl_uniform").driver, Driver::kStl);
  EXPECT_EQ(parse_method("tb_uniform").algorithm, Algorithm::kUniformRandom);
  EXPECT_EQ(code_of([] { parse_method("tb_ga"); }), ErrorCode::kInvalidArgument);
}

TEST(Repetitions, SeedsAndOrder) {
  Bundle b = load_bundle("at_lite", true);
  SearchConfig c = quick(20);
  c.seed = 7;
  auto recs = run_repetitions(b, parse_method("tb_uniform"), c, 4);
  ASSERT_EQ(recs.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(recs[i].run_id, i);
    EXPECT_EQ(recs[i].seed, 7u + i);
    EXPECT_EQ(recs[i].model, "at_lite");
    EXPECT_EQ(recs[i].method, "tb_uniform");
  }
}

TEST(Repetitions, ParallelMatchesSerial) {
  for (const char* model : {"at_lite", "heatpump"}) {
    Bundle b = load_bundle(model, true);
    for (const char* m : {"tb_sa", "stl_uniform"}) {
      auto par = rows_of(run_repetitions(b, parse_method(m), quick(15), 4, 2));
      auto ser = rows_of(run_repetitions_serial(b, parse_method(m), quick(15), 4));
      ASSERT_EQ(par.size(), ser.size());
      for (std::size_t i = 0; i < par.size(); ++i) {
        EXPECT_TRUE(par[i].same_result(ser[i])) << model << " " << m << " run " << i;
      }
    }
  }
}

TEST(Repetitions, RunOnceMatchesFirstRepetition) {
  Bundle b = load_bundle("tracker", true);
  Outcome o = run_once(b, parse_method("tb_sa"), quick(10));
  auto recs = run_repetitions_serial(b, parse_method("tb_sa"), quick(10), 1);
  EXPECT_EQ(o.values, recs[0].outcome.values);
  EXPECT_EQ(o.iterations, recs[0].outcome.iterations);
}

TEST(Summary, RoundTrip) {
  Bundle b = load_bundle("heatpump", true);
  auto rows = rows_of(run_repetitions(b, parse_method("tb_sa"), quick(5), 3));
  std::stringstream ss;
  write_summary(ss, rows);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')),
            "run_id,model,method,seed,status,fitness,iterations,elapsed_ms,values");
  std::vector<SummaryRow> back = read_summary(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(back[i].same_result(rows[i]));
    EXPECT_EQ(back[i].elapsed_ms, rows[i].elapsed_ms);
  }
}

TEST(Summary, MalformedInput) {
  std::istringstream bad_header("run,model\n");
  EXPECT_EQ(code_of([&] { read_summary(bad_header); }), ErrorCode::kIoError);
  std::istringstream bad_row(
      "run_id,model,method,seed,status,fitness,iterations,elapsed_ms,values\n"
      "0,m,tb_sa,1,MAYBE,1,1,1,0.5\n");
  EXPECT_EQ(code_of([&] { read_summary(bad_row); }), ErrorCode::kIoError);
  std::istringstream short_row(
      "run_id,model,method,seed,status,fitness,iterations,elapsed_ms,values\n0,m\n");
  EXPECT_EQ(code_of([&] { read_summary(short_row); }), ErrorCode::kIoError);
}

TEST(Summary, SameResultIgnoresTiming) {
  SummaryRow a = row("tb_sa", Status::kFailureRevealing, 3, 1.0);
  SummaryRow b = row("tb_sa", Status::kFailureRevealing, 3, 99.0);
  EXPECT_TRUE(a.same_result(b));
  b.values[0] = 0.25;
  EXPECT_FALSE(a.same_result(b));
}

TEST(Compare, RatesAndMeans) {
  std::vector<SummaryRow> rows = {
      row("tb_sa", Status::kFailureRevealing, 4, 10), row("tb_sa", Status::kFailureRevealing, 8, 20),
      row("tb_sa", Status::kNoFaultFound, 300, 30), row("stl_uniform", Status::kNoFaultFound, 300, 5),
      row("stl_uniform", Status::kNoFaultFound, 300, 7)};
  std::vector<MethodSummary> t = compare(rows);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].method, "tb_sa");
  EXPECT_EQ(t[0].runs, 3);
  EXPECT_EQ(t[0].failures, 2);
  EXPECT_DOUBLE_EQ(t[0].rate, 2.0 / 3.0);
  EXPECT_EQ(*t[0].mean_iterations, 6.0);
  EXPECT_EQ(t[0].mean_elapsed_ms, 20.0);
  EXPECT_EQ(t[1].rate, 0.0);
  EXPECT_FALSE(t[1].mean_iterations);
  std::ostringstream out;
  write_comparison(out, t);
  EXPECT_EQ(out.str(),
            "model,method,runs,failures,rate,mean_iterations,mean_elapsed_ms\n"
            "m,tb_sa,3,2,0.6666666666666666,6,20\n"
            "m,stl_uniform,2,0,0,NA,6\n");
}

TEST(Compare, Errors) {
  std::vector<SummaryRow> one = {row("tb_sa", Status::kNoFaultFound, 1)};
  EXPECT_EQ(code_of([&] { compare(one); }), ErrorCode::kInvalidArgument);
  std::vector<SummaryRow> mixed = {row("tb_sa", Status::kNoFaultFound, 1),
                                   row("stl_sa", Status::kNoFaultFound, 1)};
  mixed[1].model = "other";
  EXPECT_EQ(code_of([&] { compare(mixed); }), ErrorCode::kInvalidArgument);
}

TEST(Consistency, DeterministicAndThreadIndependent) {
  Bundle b = load_bundle("at_lite", true);
  ConsistencyReport a = oracle_consistency(b, 12, 3, true);
  ConsistencyReport s = oracle_consistency(b, 12, 3, false);
  ASSERT_EQ(a.samples.size(), 12u);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].robustness, s.samples[i].robustness);
    EXPECT_EQ(a.samples[i].fitness, s.samples[i].fitness);
    EXPECT_EQ(a.samples[i].assessment, s.samples[i].assessment);
  }
  EXPECT_EQ(a.compared, s.compared);
  EXPECT_EQ(a.mismatches, 0);
  EXPECT_EQ(code_of([&] { oracle_consistency(b, 0, 1); }), ErrorCode::kInvalidArgument);
}

class ConfigTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("tbf_config_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }

  std::filesystem::path dir_;
};

TEST_F(ConfigTest, ParsesAndResolvesPaths) {
  write("req.stl", "G[0, 30] RPM <= 6000");
  std::string path = write("run.json", R"({
    "model": "at_lite", "fault": true,
    "stl": {"formula": "req.stl"},
    "use_stl": true,
    "search": {"max_iterations": 12, "seed": 5, "algorithm": "uniform_random",
               "cooling": 0.9},
    "repetitions": 3, "output_dir": "out"
  })");
  RunConfig c = load_run_config(path);
  EXPECT_EQ(c.model, "at_lite");
  EXPECT_TRUE(c.fault);
  EXPECT_TRUE(c.use_stl);
  EXPECT_EQ(c.search.max_iterations, 12);
  EXPECT_EQ(c.search.seed, 5u);
  EXPECT_EQ(c.search.algorithm, Algorithm::kUniformRandom);
  EXPECT_EQ(c.search.cooling, 0.9);
  EXPECT_EQ(c.repetitions, 3);
  EXPECT_EQ(*c.formula, (dir_ / "req.stl").string());
  EXPECT_EQ(c.output_dir, (dir_ / "out").string());
  Bundle b = resolve_bundle(c);
  EXPECT_TRUE(b.model.fault_enabled);
  EXPECT_EQ(to_string(b.formula), to_string(parse_stl("G[0, 30] RPM <= 6000")));
}

TEST_F(ConfigTest, InlineProfile) {
  RunConfig c = parse_run_config(R"({"model": "tracker", "stl": {"profile":
      {"signals": [{"name": "REF", "kind": "real", "control_points": 2, "range": [0, 1],
                    "interpolation": "pchip"},
                   {"name": "MODE", "kind": "int", "control_points": 1, "range": [1, 1],
                    "interpolation": "piecewise_constant"}]}}})");
  ASSERT_TRUE(c.profile);
  EXPECT_EQ(c.profile->dimension(), 3u);
  EXPECT_EQ(resolve_bundle(c).profile.dimension(), 3u);
}

TEST_F(ConfigTest, Rejections) {
  EXPECT_EQ(code_of([] { parse_run_config(R"({"model": "at_lite", "iters": 3})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_run_config(R"({"fault": true})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_run_config("{"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_run_config(R"({"model": "at_lite", "repetitions": 0})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] {
              parse_run_config(R"({"model": "at_lite", "search": {"algorithm": "ga"}})");
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] {
              parse_run_config(R"({"model": "at_lite", "sequence": "missing.tseq"})", dir_);
            }),
            ErrorCode::kIoError);
  EXPECT_EQ(code_of([&] { load_run_config((dir_ / "none.json").string()); }),
            ErrorCode::kIoError);
}

}  // namespace
}  // namespace tbf
