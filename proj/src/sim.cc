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

#include <algorithm>
#include <cmath>
#include <functional>

#include "tbf/error.h"
#include "tbf/stepmachine.h"

namespace tbf {

TimeGrid ModelSpec::grid() const {
  double steps = duration / dt;
  auto n = static_cast<std::size_t>(std::llround(steps));
  if (!(dt > 0.0) || !(duration > 0.0) ||
      std::fabs(steps - static_cast<double>(n)) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                name + ": duration must be a positive multiple of dt");
  }
  return TimeGrid(dt, n + 1);
}

ModelSpec ModelSpec::with_dt(double new_dt) const {
  ModelSpec s = *this;
  s.dt = new_dt;
  return s;
}

Model::Model(ModelSpec spec) : spec_(std::move(spec)) { reset(); }

void Model::reset() { state_ = spec_.initial_state; }

void Model::step(std::span<const double> inputs, std::span<double> outputs) {
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (inputs.size() != spec_.inputs.size() ||
      outputs.size() != spec_.outputs.size()) {
    throw Error(ErrorCode::kSignalMismatch, spec_.name + ": wrong port count");
  }
  if (!finite(inputs)) {
    throw Error(ErrorCode::kNumericError, spec_.name + ": non-finite input");
  }
  do_step(inputs, outputs);
  if (!finite(outputs) || !finite(state_)) {
    throw Error(ErrorCode::kNumericError, spec_.name + ": non-finite state");
  }
}

namespace {

// AAI pacing: while MODE is 3 a counter of consecutive samples without atrial
// detection runs; reaching the limit emits a one-sample pace and restarts it.
// The limit is 60/LRL seconds with LRL = 60. The fault stretches it to 1.2 s
// once mode 3 has been held for more than 30 s.
class Pacemaker : public Model {
 public:
  using Model::Model;

 private:
  void do_step(std::span<const double> in, std::span<double> out) override {
    double& count = state_[0];
    double& in_mode = state_[1];
    const bool mode3 = std::nearbyint(in[0]) == 3.0;
    in_mode = mode3 ? in_mode + spec_.dt : 0.0;
    const double limit = spec_.fault_enabled && in_mode > 30.0 ? 120.0 : 100.0;
    bool pace = false;
    if (!mode3 || in[1] != 0.0) {
      count = 0.0;
    } else if (++count >= limit) {
      pace = true;
      count = 0.0;
    }
    out[0] = pace ? 1.0 : 0.0;
  }
};

// Longitudinal car: dv/dt = 12 u/100 - 20 b/100 - 0.08 v, v >= 0, with a
// speed-scheduled 3-gear box. Shifts: 1->2 at 40, 2->3 at 80, 3->2 below 65,
// 2->1 below 25. The fault delays the 3->2 downshift to below 38.
class AtLite : public Model {
 public:
  using Model::Model;

 private:
  void do_step(std::span<const double> in, std::span<double> out) override {
    static constexpr double kRatio[] = {0.0, 100.0, 60.0, 35.0};
    const double thr = std::clamp(in[0], 0.0, 100.0);
    const double brk = std::clamp(in[1], 0.0, 100.0);
    double& v = state_[0];
    double& gear = state_[1];
    const double down3 = spec_.fault_enabled ? 38.0 : 65.0;
    if (gear == 1.0 && v >= 40.0) {
      gear = 2.0;
    } else if (gear == 2.0 && v >= 80.0) {
      gear = 3.0;
    } else if (gear == 3.0 && v < down3) {
      gear = 2.0;
    } else if (gear == 2.0 && v < 25.0) {
      gear = 1.0;
    }
    out[0] = v;
    out[1] = v * kRatio[static_cast<int>(gear)];
    out[2] = gear;
    v += spec_.dt * (0.12 * thr - 0.2 * brk - 0.08 * v);
    v = std::max(v, 0.0);
  }
};

// Room temperature dT/dt = (T_amb - T)/100 + 0.3 h with a relay heater:
// on at T_set - 0.5, off at T_set + 0.5. The fault moves the off threshold
// to T_set + 4 after 200 s of uninterrupted ambient below 3 C.
class HeatPump : public Model {
 public:
  using Model::Model;

 private:
  void do_step(std::span<const double> in, std::span<double> out) override {
    double& temp = state_[0];
    double& heater = state_[1];
    double& cold = state_[2];
    cold = in[1] < 3.0 ? cold + spec_.dt : 0.0;
    const double off = in[0] + (spec_.fault_enabled && cold >= 200.0 ? 4.0 : 0.5);
    if (temp >= off) {
      heater = 0.0;
    } else if (temp <= in[0] - 0.5) {
      heater = 1.0;
    }
    out[0] = temp;
    out[1] = heater;
    temp += spec_.dt * ((in[1] - temp) / 100.0 + 0.3 * heater);
  }
};

// First-order tracker dY/dt = g(MODE) (REF - Y), gains 2/4/8 for modes 1-3,
// hold otherwise. The fault uses gain 2.5 in mode 2.
class Tracker : public Model {
 public:
  using Model::Model;

 private:
  void do_step(std::span<const double> in, std::span<double> out) override {
    double& y = state_[0];
    const double mode = std::nearbyint(in[1]);
    double gain = 0.0;
    if (mode == 1.0) gain = 2.0;
    if (mode == 2.0) gain = spec_.fault_enabled ? 2.5 : 4.0;
    if (mode == 3.0) gain = 8.0;
    out[0] = y;
    out[1] = in[0] - y;
    y += spec_.dt * gain * (in[0] - y);
  }
};

ModelSpec pacemaker_spec() {
  ModelSpec s;
  s.name = "pacemaker";
  s.description = "AAI pacing controller, LRL 60";
  s.inputs = {{"MODE", ValueKind::kInt}, {"ATR_CMP_DETECT", ValueKind::kBool}};
  s.outputs = {{"ATR_PACE_CTRL", ValueKind::kBool}};
  s.dt = 0.01;
  s.duration = 60.0;
  s.initial_state = {0.0, 0.0};
  return s;
}

ModelSpec at_lite_spec() {
  ModelSpec s;
  s.name = "at_lite";
  s.description = "throttle/brake to speed with 3-gear shift logic";
  s.inputs = {{"THROTTLE", ValueKind::kReal}, {"BRAKE", ValueKind::kReal}};
  s.outputs = {{"SPEED", ValueKind::kReal},
               {"RPM", ValueKind::kReal},
               {"GEAR", ValueKind::kInt}};
  s.dt = 0.01;
  s.duration = 30.0;
  s.initial_state = {0.0, 1.0};
  return s;
}

ModelSpec heatpump_spec() {
  ModelSpec s;
  s.name = "heatpump";
  s.description = "room thermal model with relay heater";
  s.inputs = {{"T_SET", ValueKind::kReal}, {"T_AMB", ValueKind::kReal}};
  s.outputs = {{"T_ROOM", ValueKind::kReal}, {"HEATER", ValueKind::kBool}};
  s.dt = 0.1;
  s.duration = 300.0;
  s.initial_state = {15.0, 0.0, 0.0};
  return s;
}

ModelSpec tracker_spec() {
  ModelSpec s;
  s.name = "tracker";
  s.description = "reference tracker with 3 gain modes";
  s.inputs = {{"REF", ValueKind::kReal}, {"MODE", ValueKind::kInt}};
  s.outputs = {{"Y", ValueKind::kReal}, {"ERR", ValueKind::kReal}};
  s.dt = 0.01;
  s.duration = 30.0;
  s.initial_state = {0.0};
  return s;
}

int find_decl(const std::vector<SignalDecl>& decls, std::string_view name) {
  for (std::size_t i = 0; i < decls.size(); ++i) {
    if (decls[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

// Source of an assessment input: model input (>= 0) or output (encoded -1-i).
std::vector<int> bind_assessment(const ModelSpec& model,
                                 const CompiledAssessment& compiled) {
  std::vector<int> out;
  for (const SignalDecl& d : compiled.inputs) {
    int i = find_decl(model.inputs, d.name);
    if (i >= 0) {
      out.push_back(i);
      continue;
    }
    int o = find_decl(model.outputs, d.name);
    if (o < 0) {
      throw Error(ErrorCode::kSignalMismatch,
                  "assessment reads '" + d.name + "', which " + model.name +
                      " does not provide");
    }
    out.push_back(-1 - o);
  }
  return out;
}

// Shared loop; `feed(k, prev_outputs, inputs)` fills the model inputs.
SimResult run_loop(
    const ModelSpec& spec, const SimOptions& options,
    const std::function<void(std::size_t, std::span<const double>,
                             std::span<double>)>& feed) {
  const TimeGrid grid = spec.grid();
  std::unique_ptr<Model> model = make_model(spec);
  std::shared_ptr<FitnessMonitor> monitor;
  std::vector<int> binding;
  if (options.assessment) {
    binding = bind_assessment(spec, *options.assessment);
    monitor = std::make_shared<FitnessMonitor>(options.assessment, spec.dt);
  }
  const std::size_t ni = spec.inputs.size();
  const std::size_t no = spec.outputs.size();
  std::vector<std::vector<double>> in_cols(ni), out_cols(no);
  std::vector<double> in(ni), out(no, 0.0), row(binding.size());
  std::size_t n = grid.n_samples();
  bool truncated = false;
  for (std::size_t k = 0; k < grid.n_samples(); ++k) {
    feed(k, out, in);
    model->step(in, out);
    for (std::size_t i = 0; i < ni; ++i) in_cols[i].push_back(in[i]);
    for (std::size_t o = 0; o < no; ++o) out_cols[o].push_back(out[o]);
    if (monitor) {
      for (std::size_t j = 0; j < binding.size(); ++j) {
        row[j] = binding[j] >= 0 ? in[binding[j]] : out[-1 - binding[j]];
      }
      if (monitor->observe(row).stop) {
        n = k + 1;
        truncated = n < grid.n_samples();
        break;
      }
    }
  }
  auto make_trace = [&](const std::vector<SignalDecl>& decls,
                        std::vector<std::vector<double>>& cols) {
    std::vector<Signal> sigs;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      sigs.push_back(Signal{decls[i].name, decls[i].kind, std::move(cols[i])});
    }
    return Trace(TimeGrid(spec.dt, n), std::move(sigs));
  };
  SimResult r{make_trace(spec.inputs, in_cols), make_trace(spec.outputs, out_cols),
              std::nullopt, monitor, truncated};
  if (monitor) r.verdict = monitor->finalize();
  return r;
}

}  // namespace

std::vector<std::string> model_names() {
  return {"pacemaker", "at_lite", "heatpump", "tracker"};
}

ModelSpec model_spec(std::string_view name, bool fault_enabled) {
  ModelSpec s;
  if (name == "pacemaker") {
    s = pacemaker_spec();
  } else if (name == "at_lite") {
    s = at_lite_spec();
  } else if (name == "heatpump") {
    s = heatpump_spec();
  } else if (name == "tracker") {
    s = tracker_spec();
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown model '" + std::string(name) + "'");
  }
  s.fault_enabled = fault_enabled;
  return s;
}

std::vector<ModelSpec> registry() {
  std::vector<ModelSpec> out;
  for (const std::string& n : model_names()) out.push_back(model_spec(n));
  return out;
}

std::unique_ptr<Model> make_model(const ModelSpec& spec) {
  if (spec.name == "pacemaker") return std::make_unique<Pacemaker>(spec);
  if (spec.name == "at_lite") return std::make_unique<AtLite>(spec);
  if (spec.name == "heatpump") return std::make_unique<HeatPump>(spec);
  if (spec.name == "tracker") return std::make_unique<Tracker>(spec);
  throw Error(ErrorCode::kInvalidArgument, "unknown model '" + spec.name + "'");
}

void check_interface(const ModelSpec& model, const TestBlock& sequence) {
  std::vector<SignalDecl> outs = sequence.signals_with_role(SymbolRole::kOutput);
  std::string problem;
  for (const SignalDecl& d : model.inputs) {
    int i = find_decl(outs, d.name);
    if (i < 0) {
      problem = "model input '" + d.name + "' is not driven by the sequence";
    } else if (outs[i].kind != d.kind) {
      problem = "'" + d.name + "' is " + std::string(kind_name(outs[i].kind)) +
                " in the sequence but " + std::string(kind_name(d.kind)) +
                " in the model";
    }
    if (!problem.empty()) break;
  }
  if (problem.empty()) {
    for (const SignalDecl& d : outs) {
      if (find_decl(model.inputs, d.name) < 0) {
        problem = "sequence output '" + d.name + "' is not a model input";
        break;
      }
    }
  }
  if (problem.empty()) {
    for (const SignalDecl& d : sequence.signals_with_role(SymbolRole::kInput)) {
      if (find_decl(model.outputs, d.name) < 0) {
        problem = "sequence input '" + d.name + "' is not a model output";
        break;
      }
    }
  }
  if (!problem.empty()) {
    throw Error(ErrorCode::kSignalMismatch,
                sequence.name + " vs " + model.name + ": " + problem);
  }
}

void check_assessment(const ModelSpec& model, const TestBlock& assessment) {
  for (const SignalDecl& d : assessment.signals_with_role(SymbolRole::kInput)) {
    if (find_decl(model.inputs, d.name) < 0 &&
        find_decl(model.outputs, d.name) < 0) {
      throw Error(ErrorCode::kSignalMismatch,
                  "assessment reads '" + d.name + "', which " + model.name +
                      " does not provide");
    }
  }
}

SimResult simulate(const ModelSpec& model, const TestBlock& sequence,
                   const std::map<std::string, double>& params,
                   const SimOptions& options) {
  check_interface(model, sequence);
  std::vector<double> pv = parameter_vector(sequence, params);
  BlockMachine machine(sequence, model.dt, pv);
  machine.set_debug(options.debug);
  std::vector<int> feedback;  // model output index per sequence input
  for (int slot : sequence.slots_with_role(SymbolRole::kInput)) {
    feedback.push_back(find_decl(model.outputs, sequence.symbols[slot].name));
  }
  std::vector<int> drive;  // sequence slot per model input
  for (const SignalDecl& d : model.inputs) drive.push_back(sequence.find_symbol(d.name));
  std::vector<double> seq_in(feedback.size(), 0.0);
  return run_loop(model, options,
                  [&](std::size_t k, std::span<const double> prev_out,
                      std::span<double> in) {
                    for (std::size_t j = 0; j < feedback.size(); ++j) {
                      seq_in[j] = k == 0 ? 0.0 : prev_out[feedback[j]];
                    }
                    machine.advance(seq_in);
                    for (std::size_t i = 0; i < drive.size(); ++i) {
                      in[i] = machine.values()[drive[i]];
                    }
                  });
}

SimResult simulate_inputs(const ModelSpec& model, const Trace& inputs,
                          const SimOptions& options) {
  std::vector<const Signal*> cols;
  for (const SignalDecl& d : model.inputs) {
    const Signal& s = inputs.signal(d.name);
    if (s.kind != d.kind) {
      throw Error(ErrorCode::kSignalMismatch,
                  "input '" + d.name + "' has the wrong kind");
    }
    cols.push_back(&s);
  }
  const std::size_t n = model.grid().n_samples();
  if (inputs.grid().n_samples() < n) {
    throw Error(ErrorCode::kSignalMismatch, "input trace is shorter than the run");
  }
  return run_loop(model, options,
                  [&](std::size_t k, std::span<const double>, std::span<double> in) {
                    for (std::size_t i = 0; i < cols.size(); ++i) {
                      in[i] = cols[i]->values[k];
                    }
                  });
}

}  // namespace tbf
