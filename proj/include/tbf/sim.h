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

// Fixed-step models and the sequence/model/monitor co-simulation loop.

#ifndef TBF_SIM_H_
#define TBF_SIM_H_

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbf/fitness.h"
#include "tbf/signal.h"
#include "tbf/testlang.h"

namespace tbf {

struct ModelSpec {
  std::string name;
  std::string description;
  std::vector<SignalDecl> inputs;
  std::vector<SignalDecl> outputs;
  double dt = 0.01;
  double duration = 1.0;
  bool fault_enabled = false;
  std::vector<double> initial_state;

  TimeGrid grid() const;
  // Same model at another step size; duration is kept.
  ModelSpec with_dt(double new_dt) const;
};

// One instance per run. step() maps (state, inputs at k) to outputs at k and
// advances the state by dt with forward Euler.
class Model {
 public:
  explicit Model(ModelSpec spec);
  virtual ~Model() = default;

  const ModelSpec& spec() const { return spec_; }
  std::span<const double> state() const { return state_; }
  void reset();
  // kNumericError if inputs, outputs or state become non-finite.
  void step(std::span<const double> inputs, std::span<double> outputs);

 protected:
  virtual void do_step(std::span<const double> in, std::span<double> out) = 0;

  ModelSpec spec_;
  std::vector<double> state_;
};

// Names of the built-in models.
std::vector<std::string> model_names();
// kInvalidArgument for unknown names.
ModelSpec model_spec(std::string_view name, bool fault_enabled = false);
std::vector<ModelSpec> registry();
std::unique_ptr<Model> make_model(const ModelSpec& spec);

struct SimOptions {
  std::shared_ptr<const CompiledAssessment> assessment;
  std::ostream* debug = nullptr;  // per-tick step-machine log of the sequence
};

struct SimResult {
  Trace inputs;
  Trace outputs;
  std::optional<Verdict> verdict;
  std::shared_ptr<FitnessMonitor> monitor;
  bool truncated = false;
};

// kSignalMismatch unless the sequence outputs are exactly the model inputs
// (names and kinds) and every sequence input is a model output.
void check_interface(const ModelSpec& model, const TestBlock& sequence);
// kSignalMismatch unless every assessment input is a model input or output.
void check_assessment(const ModelSpec& model, const TestBlock& assessment);

// Closed loop: sequence inputs read the model outputs of the previous sample
// (zero at k = 0); model inputs take the sequence outputs of the same sample.
SimResult simulate(const ModelSpec& model, const TestBlock& sequence,
                   const std::map<std::string, double>& params,
                   const SimOptions& options = {});

// Drives the model from a recorded input trace.
SimResult simulate_inputs(const ModelSpec& model, const Trace& inputs,
                          const SimOptions& options = {});

}  // namespace tbf

#endif  // TBF_SIM_H_
