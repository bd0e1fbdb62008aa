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


#include "tbf/sim.h"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/test_util.h"
#include "tbf/bundle.h"
#include "tbf/error.h"

namespace tbf {
namespace {

using testing::code_of;

Trace constant_inputs(const ModelSpec& spec, std::vector<double> values) {
  const TimeGrid g = spec.grid();
  std::vector<Signal> s;
  for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
    s.push_back(Signal{spec.inputs[i].name, spec.inputs[i].kind,
                       std::vector<double>(g.n_samples(), values[i])});
  }
  return Trace(g, std::move(s));
}

TEST(Registry, BuiltInModels) {
  EXPECT_EQ(model_names(),
            (std::vector<std::string>{"pacemaker", "at_lite", "heatpump", "tracker"}));
  for (const ModelSpec& s : registry()) {
    EXPECT_NO_THROW(s.grid()) << s.name;
    EXPECT_NO_THROW(make_model(s)) << s.name;
  }
  EXPECT_EQ(model_spec("at_lite").grid().n_samples(), 3001u);
  EXPECT_TRUE(model_spec("at_lite", true).fault_enabled);
  EXPECT_EQ(code_of([] { model_spec("toaster"); }), ErrorCode::kInvalidArgument);
}

TEST(AtLite, FullThrottleApproachesDragLimit) {
  ModelSpec spec = model_spec("at_lite");
  SimResult r = simulate_inputs(spec, constant_inputs(spec, {100, 0}));
  const auto& v = r.outputs.signal("SPEED").values;
  // Euler recurrence v[k+1] = (1 - 0.08 dt) v[k] + 12 dt, limit 150.
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double want = 150.0 * (1.0 - std::pow(1.0 - 0.08 * spec.dt, static_cast<double>(k)));
    ASSERT_NEAR(v[k], want, 1e-9) << "k=" << k;
    if (k > 0) ASSERT_GT(v[k], v[k - 1]);
    ASSERT_LT(v[k], 150.0);
  }
  const auto& gear = r.outputs.signal("GEAR").values;
  EXPECT_EQ(gear.front(), 1.0);
  EXPECT_EQ(gear.back(), 3.0);
  EXPECT_TRUE(std::is_sorted(gear.begin(), gear.end()));
}

TEST(AtLite, HalvingTheStepChangesLittle) {
  ModelSpec spec = model_spec("at_lite");
  ModelSpec fine = spec.with_dt(spec.dt / 2);
  const double a = simulate_inputs(spec, constant_inputs(spec, {70, 5}))
                       .outputs.signal("SPEED").values.back();
  const double b = simulate_inputs(fine, constant_inputs(fine, {70, 5}))
                       .outputs.signal("SPEED").values.back();
  EXPECT_LT(std::fabs(a - b) / std::fabs(b), 0.01);
}

TEST(Pacemaker, PacesAfterOneSecondOfSilence) {
  ModelSpec spec = model_spec("pacemaker");
  SimResult r = simulate_inputs(spec, constant_inputs(spec, {3, 0}));
  const auto& pace = r.outputs.signal("ATR_PACE_CTRL").values;
  for (std::size_t k = 0; k < 3000; ++k) {
    ASSERT_EQ(pace[k], (k + 1) % 100 == 0 ? 1.0 : 0.0) << "k=" << k;
  }
  r = simulate_inputs(model_spec("pacemaker", true), constant_inputs(spec, {3, 0}));
  const auto& late = r.outputs.signal("ATR_PACE_CTRL").values;
  std::vector<std::size_t> at;
  for (std::size_t k = 0; k < late.size(); ++k) {
    if (late[k] != 0.0) at.push_back(k);
  }
  ASSERT_GE(at.size(), 3u);
  EXPECT_EQ(at[at.size() - 1] - at[at.size() - 2], 120u);
  EXPECT_EQ(at[1] - at[0], 100u);
}

TEST(Pacemaker, OtherModesNeverPace) {
  ModelSpec spec = model_spec("pacemaker", true);
  SimResult r = simulate_inputs(spec, constant_inputs(spec, {1, 0}));
  for (double p : r.outputs.signal("ATR_PACE_CTRL").values) ASSERT_EQ(p, 0.0);
}

TEST(HeatPump, RelayHoldsTheBand) {
  ModelSpec spec = model_spec("heatpump");
  SimResult r = simulate_inputs(spec, constant_inputs(spec, {20, 0}));
  const auto& t = r.outputs.signal("T_ROOM").values;
  for (std::size_t k = 1000; k < t.size(); ++k) {
    ASSERT_GT(t[k], 19.0);
    ASSERT_LT(t[k], 21.0);
  }
  r = simulate_inputs(model_spec("heatpump", true), constant_inputs(spec, {20, 0}));
  const auto& hot = r.outputs.signal("T_ROOM").values;
  EXPECT_GT(*std::max_element(hot.begin(), hot.end()), 23.0);
}

TEST(Tracker, ErrorDecaysWithTheModeGain) {
  ModelSpec spec = model_spec("tracker");
  for (int mode : {1, 2, 3}) {
    SimResult r = simulate_inputs(spec, constant_inputs(spec, {1, static_cast<double>(mode)}));
    const auto& err = r.outputs.signal("ERR").values;
    const double gain = mode == 1 ? 2.0 : mode == 2 ? 4.0 : 8.0;
    for (std::size_t k = 0; k < 200; ++k) {
      ASSERT_NEAR(err[k], std::pow(1.0 - gain * spec.dt, static_cast<double>(k)), 1e-12);
    }
  }
}

TEST(Simulate, SequenceDrivesTheModel) {
  Bundle b = load_bundle("pacemaker");
  SimOptions o;
  o.assessment = compile(b.assessment);
  SimResult r = simulate(b.model, b.sequence, {}, o);
  EXPECT_EQ(r.inputs.signal("MODE").values[0], 3.0);
  EXPECT_EQ(r.inputs.signal("ATR_CMP_DETECT").values[200], 1.0);
  ASSERT_TRUE(r.verdict);
  EXPECT_EQ(r.verdict->overall, Outcome3::kPass);
  EXPECT_EQ(r.verdict->samples, 6001u);
  b = load_bundle("pacemaker", true);
  r = simulate(b.model, b.sequence, {}, o);
  EXPECT_EQ(r.verdict->overall, Outcome3::kFail);
  EXPECT_LT(r.verdict->final_fitness, 0.0);
}

TEST(Simulate, FeedbackReadsThePreviousSample) {
  TestBlock seq = parse_block(
      "sequence s { inputs { SPEED: real; } outputs { THROTTLE: real; BRAKE: real; }\n"
      "  step Go { THROTTLE = 100; BRAKE = 0; }\n"
      "  step Stop { THROTTLE = 0; BRAKE = 100; }\n"
      "  trans Go -> Stop when SPEED > 20;\n"
      "  trans Stop -> Go when SPEED < 10;\n}\n");
  ModelSpec spec = model_spec("at_lite");
  SimResult r = simulate(spec, seq, {});
  const auto& v = r.outputs.signal("SPEED").values;
  const auto& brk = r.inputs.signal("BRAKE").values;
  for (std::size_t k = 1; k < v.size(); ++k) {
    // The sequence sees SPEED[k-1] before choosing the inputs of sample k.
    if (brk[k] != brk[k - 1]) {
      EXPECT_TRUE(brk[k] == 100.0 ? v[k - 1] > 20.0 : v[k - 1] < 10.0) << "k=" << k;
    }
  }
  EXPECT_LT(*std::max_element(v.begin(), v.end()), 21.0);
}

TEST(Simulate, InterfaceMismatches) {
  ModelSpec spec = model_spec("at_lite");
  TestBlock missing = parse_block("sequence s { outputs { THROTTLE: real; } step A { THROTTLE = 1; } }");
  EXPECT_EQ(code_of([&] { check_interface(spec, missing); }), ErrorCode::kSignalMismatch);
  TestBlock kind = parse_block(
      "sequence s { outputs { THROTTLE: real; BRAKE: int; } step A { THROTTLE = 1; } }");
  EXPECT_EQ(code_of([&] { check_interface(spec, kind); }), ErrorCode::kSignalMismatch);
  TestBlock feedback = parse_block(
      "sequence s { inputs { TORQUE: real; } outputs { THROTTLE: real; BRAKE: real; } "
      "step A { THROTTLE = 1; } }");
  EXPECT_EQ(code_of([&] { simulate(spec, feedback, {}); }), ErrorCode::kSignalMismatch);
  TestBlock assess = parse_block(
      "assessment a { inputs { TORQUE: real; } step A { verify(TORQUE > 0) as V; } }");
  EXPECT_EQ(code_of([&] { check_assessment(spec, assess); }), ErrorCode::kSignalMismatch);
  Trace shortened = constant_inputs(spec, {1, 1}).truncated(10);
  EXPECT_EQ(code_of([&] { simulate_inputs(spec, shortened); }), ErrorCode::kSignalMismatch);
}

TEST(Simulate, NonFiniteValuesAreReported) {
  ModelSpec spec = model_spec("tracker");
  auto m = make_model(spec);
  std::vector<double> out(2);
  std::vector<double> in = {std::numeric_limits<double>::infinity(), 1};
  EXPECT_EQ(code_of([&] { m->step(in, out); }), ErrorCode::kNumericError);
  std::vector<double> huge = {1e308, 3};
  ModelSpec coarse = spec;
  coarse.dt = 1.0;
  auto m2 = make_model(coarse);
  EXPECT_EQ(code_of([&] {
              for (int i = 0; i < 10; ++i) m2->step(huge, out);
            }),
            ErrorCode::kNumericError);
  std::vector<double> wrong(3);
  EXPECT_EQ(code_of([&] { m->step(wrong, out); }), ErrorCode::kSignalMismatch);
}

TEST(Simulate, ResetRestoresTheInitialState) {
  ModelSpec spec = model_spec("at_lite");
  auto m = make_model(spec);
  std::vector<double> out(3);
  std::vector<double> in = {100, 0};
  for (int i = 0; i < 50; ++i) m->step(in, out);
  EXPECT_GT(m->state()[0], 0.0);
  m->reset();
  EXPECT_EQ(std::vector<double>(m->state().begin(), m->state().end()), spec.initial_state);
}

}  // namespace
}  // namespace tbf
