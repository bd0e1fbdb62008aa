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

#include "tbf/stepmachine.h"

#include <cmath>

#include "tbf/error.h"

namespace tbf {

bool ActiveConfiguration::contains(int step) const {
  for (const ActiveStep& a : path) {
    if (a.step == step) return true;
  }
  return false;
}

std::size_t ActiveConfiguration::entry_of(int step) const {
  for (const ActiveStep& a : path) {
    if (a.step == step) return a.entry_k;
  }
  throw Error(ErrorCode::kUnknownStep, "step is not active");
}

std::string ActiveConfiguration::describe(const TestBlock& block) const {
  std::string out;
  for (const ActiveStep& a : path) {
    if (!out.empty()) out += '/';
    out += block.steps[a.step].name;
  }
  return out;
}

double elapsed(const ActiveConfiguration& config, int step,
               const SampleView& view) {
  std::size_t entry = step == kNoStep ? 0 : config.entry_of(step);
  return static_cast<double>(view.k - entry) * view.dt;
}

EvalEnv env_for(const ActiveConfiguration& config, int step,
                const SampleView& view) {
  EvalEnv env;
  env.k = view.k;
  env.t = view.t();
  env.now = view.now;
  env.prev = view.prev;
  env.et = elapsed(config, step, view);
  return env;
}

namespace {

// Child of a when-decomposed `parent` selected at this sample; guards see
// the parent's elapsed time.
int select_child(const TestBlock& block, int parent,
                 const ActiveConfiguration& config, const SampleView& view) {
  EvalEnv env = env_for(config, parent, view);
  for (int c : block.children_of(parent)) {
    const TestStep& s = block.steps[c];
    if (s.is_otherwise) return c;
    if (s.when_guard && holds(*s.when_guard, env)) return c;
  }
  const std::string where =
      parent == kNoStep ? block.name : block.steps[parent].name;
  throw Error(ErrorCode::kNoActiveChild,
              "no when guard holds under '" + where + "' at t=" +
                  format_double(view.t()));
}

// Pushes `step` and its initial descendants, all entered at view.k.
void enter(const TestBlock& block, int step, ActiveConfiguration& config,
           const SampleView& view) {
  while (true) {
    config.path.push_back(ActiveStep{step, view.k});
    const auto& kids = block.steps[step].children;
    if (kids.empty()) return;
    step = block.steps[step].child_mode == ChildMode::kWhen
               ? select_child(block, step, config, view)
               : kids.front();
  }
}

void check_path(const ActiveConfiguration& config, const TestBlock& block) {
  if (config.path.empty()) {
    throw Error(ErrorCode::kUnknownStep, "empty active configuration");
  }
  int parent = kNoStep;
  for (const ActiveStep& a : config.path) {
    if (a.step < 0 || a.step >= static_cast<int>(block.steps.size()) ||
        block.steps[a.step].parent != parent) {
      throw Error(ErrorCode::kUnknownStep,
                  "active configuration does not match block " + block.name);
    }
    parent = a.step;
  }
  if (!block.is_leaf(parent)) {
    throw Error(ErrorCode::kUnknownStep, "active path does not end in a leaf");
  }
}

double coerce(double v, ValueKind kind) {
  switch (kind) {
    case ValueKind::kBool: return v != 0.0 ? 1.0 : 0.0;
    case ValueKind::kInt: return std::nearbyint(v);
    case ValueKind::kReal: return v;
  }
  return v;
}

}  // namespace

ActiveConfiguration init(const TestBlock& block, const SampleView& view) {
  if (block.roots.empty()) {
    throw Error(ErrorCode::kNoActiveChild, "block " + block.name + " has no steps");
  }
  ActiveConfiguration config;
  int first = block.root_mode == ChildMode::kWhen
                  ? select_child(block, kNoStep, config, view)
                  : block.roots.front();
  enter(block, first, config, view);
  return config;
}

TickResult tick(const ActiveConfiguration& config, const TestBlock& block,
                const SampleView& view) {
  check_path(config, block);
  for (std::size_t d = 0; d < config.path.size(); ++d) {
    const int parent = d == 0 ? kNoStep : config.path[d - 1].step;
    const int active = config.path[d].step;
    ActiveConfiguration next;
    next.path.assign(config.path.begin(), config.path.begin() + d);

    if (block.mode_of(parent) == ChildMode::kWhen) {
      int chosen = select_child(block, parent, config, view);
      if (chosen == active) continue;
      enter(block, chosen, next, view);
      return {std::move(next), FiredTransition{active, chosen, true, -1}};
    }

    EvalEnv env = env_for(config, active, view);
    for (int ti : block.steps[active].outgoing) {
      const Transition& tr = block.transitions[ti];
      if (!holds(*tr.guard, env)) continue;
      int dst = block.find_step(tr.destination);
      if (dst == kNoStep) {
        throw Error(ErrorCode::kUnknownStep,
                    "unknown destination '" + tr.destination + "'");
      }
      enter(block, dst, next, view);
      return {std::move(next), FiredTransition{active, dst, false, ti}};
    }
  }
  return {config, std::nullopt};
}

void emit_actions(const ActiveConfiguration& config, const TestBlock& block,
                  const SampleView& view, std::vector<double>& values) {
  for (const ActiveStep& a : config.path) {
    const TestStep& s = block.steps[a.step];
    if (s.actions.empty()) continue;
    EvalEnv env = env_for(config, a.step, view);
    for (const Assignment& as : s.actions) {
      env.now = values;
      double v = evaluate(*as.value, env);
      values[as.slot] = coerce(v, block.symbols[as.slot].kind);
    }
  }
}

BlockMachine::BlockMachine(const TestBlock& block, double dt,
                           std::span<const double> params)
    : block_(block), dt_(dt), input_slots_(block.slots_with_role(SymbolRole::kInput)) {
  now_.assign(block.symbols.size(), 0.0);
  std::vector<int> param_slots = block.slots_with_role(SymbolRole::kParam);
  if (!param_slots.empty() && params.size() != param_slots.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected " + std::to_string(param_slots.size()) +
                    " parameter values for " + block.name);
  }
  for (std::size_t i = 0; i < param_slots.size(); ++i) {
    now_[param_slots[i]] = params[i];
  }
  for (std::size_t i = 0; i < block.symbols.size(); ++i) {
    const Symbol& s = block.symbols[i];
    if (s.role != SymbolRole::kParam && s.value) now_[i] = *s.value;
  }
}

SampleView BlockMachine::view() const {
  SampleView v;
  v.k = k();
  v.dt = dt_;
  v.now = now_;
  if (v.k > 0) v.prev = prev_;
  return v;
}

void BlockMachine::advance(std::span<const double> inputs) {
  if (inputs.size() != input_slots_.size()) {
    throw Error(ErrorCode::kSignalMismatch,
                "expected " + std::to_string(input_slots_.size()) +
                    " inputs for " + block_.name);
  }
  if (k_ > 0) prev_ = now_;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    now_[input_slots_[i]] = coerce(inputs[i], block_.symbols[input_slots_[i]].kind);
  }
  ++k_;
  SampleView v = view();
  if (v.k == 0) {
    config_ = init(block_, v);
    fired_.reset();
  } else {
    TickResult r = tick(config_, block_, v);
    config_ = std::move(r.config);
    fired_ = r.fired;
  }
  emit_actions(config_, block_, v, now_);
  if (debug_) {
    *debug_ << "t=" << format_double(v.t()) << " leaf=" << config_.describe(block_)
            << " fired=";
    if (fired_) {
      *debug_ << block_.steps[fired_->source].name << "->"
              << block_.steps[fired_->destination].name;
    } else {
      *debug_ << "-";
    }
    *debug_ << "\n";
  }
}

std::vector<double> parameter_vector(const TestBlock& block,
                                     const std::map<std::string, double>& params) {
  std::vector<double> out;
  for (int slot : block.slots_with_role(SymbolRole::kParam)) {
    const Symbol& s = block.symbols[slot];
    auto it = params.find(s.name);
    if (it == params.end()) {
      throw Error(ErrorCode::kOutOfDomain, "no value for parameter " + s.name);
    }
    double v = it->second;
    if (!(v >= s.lower.value_or(v) && v <= s.upper.value_or(v))) {
      throw Error(ErrorCode::kOutOfDomain,
                  s.name + "=" + format_double(v) + " is outside [" +
                      format_double(s.lower.value_or(v)) + ", " +
                      format_double(s.upper.value_or(v)) + "]");
    }
    out.push_back(v);
  }
  for (const auto& [name, value] : params) {
    int slot = block.find_symbol(name);
    if (slot < 0 || block.symbols[slot].role != SymbolRole::kParam) {
      throw Error(ErrorCode::kInvalidArgument, "unknown parameter " + name);
    }
  }
  return out;
}

Trace run_sequence(const TestBlock& block,
                   const std::map<std::string, double>& params,
                   const TimeGrid& grid, std::ostream* debug) {
  if (block.kind != BlockKind::kSequence) {
    throw Error(ErrorCode::kInvalidArgument, block.name + " is not a sequence");
  }
  std::vector<double> pv = parameter_vector(block, params);
  BlockMachine m(block, grid.dt(), pv);
  m.set_debug(debug);
  std::vector<int> out_slots = block.slots_with_role(SymbolRole::kOutput);
  std::vector<Signal> signals;
  for (int slot : out_slots) {
    signals.push_back(Signal{block.symbols[slot].name, block.symbols[slot].kind, {}});
    signals.back().values.reserve(grid.n_samples());
  }
  std::vector<double> zeros(block.slots_with_role(SymbolRole::kInput).size(), 0.0);
  for (std::size_t k = 0; k < grid.n_samples(); ++k) {
    m.advance(zeros);
    for (std::size_t i = 0; i < out_slots.size(); ++i) {
      signals[i].values.push_back(m.values()[out_slots[i]]);
    }
  }
  return Trace(grid, std::move(signals));
}

}  // namespace tbf
