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

// Test assessments compiled into quantitative fitness monitors: one
// robustness channel per verify/assert and the running minimum FIT_TOTAL.

#ifndef TBF_FITNESS_H_
#define TBF_FITNESS_H_

#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tbf/stepmachine.h"
#include "tbf/testlang.h"

namespace tbf {

inline constexpr double kRobustnessCap = 1e9;

// Space robustness of a boolean expression, clamped to [-cap, cap].
double robustness(const Expr& expr, const EvalEnv& env);

// A sample violates `expr` if robustness < 0, or robustness == 0 and the
// boolean reading is false (strict comparisons at their boundary).
bool violates(double rob, const Expr& expr, const EvalEnv& env);

struct ChannelInfo {
  std::string id;  // statement id; the channel is FIT_<id>
  StatementKind kind = StatementKind::kVerify;
  int step = kNoStep;
  int index = 0;  // position within the step's statements
};

struct CompiledAssessment {
  TestBlock block;
  std::vector<ChannelInfo> channels;
  // Signals the assessment reads, aligned with block.slots_with_role(kInput).
  std::vector<SignalDecl> inputs;
};

// kValidationFailed unless `assessment` is a valid assessment block.
std::shared_ptr<const CompiledAssessment> compile(const TestBlock& assessment);

enum class Outcome3 { kPass, kFail, kUntested };
std::string_view outcome_name(Outcome3 o);

struct Verdict {
  std::vector<Outcome3> statements;  // aligned with channels
  Outcome3 overall = Outcome3::kUntested;
  double final_fitness = kRobustnessCap;
  std::size_t samples = 0;
  bool stopped = false;
  // Some failing sample had robustness exactly 0.
  bool boundary = false;
};

class FitnessMonitor {
 public:
  FitnessMonitor(std::shared_ptr<const CompiledAssessment> compiled, double dt);

  struct Observation {
    std::vector<std::optional<double>> channels;  // nullopt = Untested
    double fit_total = kRobustnessCap;
    bool stop = false;
  };

  // Feeds sample k = samples(); `inputs` aligned with compiled->inputs.
  const Observation& observe(std::span<const double> inputs);

  Verdict finalize() const;

  std::size_t samples() const { return fit_total_.size(); }
  const std::vector<double>& fit_total() const { return fit_total_; }
  const std::vector<std::vector<std::optional<double>>>& channel_history() const {
    return history_;
  }
  const CompiledAssessment& compiled() const { return *compiled_; }
  const BlockMachine& machine() const { return machine_; }

  // Trace-format table with FIT_<id> columns and FIT_TOTAL; Untested is NA.
  void write_channels(std::ostream& out) const;

 private:
  std::shared_ptr<const CompiledAssessment> compiled_;
  double dt_;
  BlockMachine machine_;
  Observation last_;
  std::vector<std::vector<std::optional<double>>> history_;  // [k][channel]
  std::vector<double> fit_total_;
  std::vector<Outcome3> status_;
  bool boundary_ = false;
  bool stopped_ = false;
};

// Runs a monitor over a whole trace, binding inputs by name; honours assert
// stops. kUnknownSignal if the trace lacks a signal the assessment reads.
Verdict assess_trace(const std::shared_ptr<const CompiledAssessment>& compiled,
                     const Trace& trace,
                     std::unique_ptr<FitnessMonitor>* keep = nullptr);

}  // namespace tbf

#endif  // TBF_FITNESS_H_
