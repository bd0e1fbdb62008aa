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

#include "tbf/fitness.h"

#include <algorithm>
#include <cmath>

#include "tbf/error.h"

namespace tbf {

namespace {

double clamp_cap(double v) {
  if (std::isnan(v)) {
    throw Error(ErrorCode::kEvalError, "robustness is NaN");
  }
  return std::clamp(v, -kRobustnessCap, kRobustnessCap);
}

double atom(bool truth) { return truth ? kRobustnessCap : -kRobustnessCap; }

}  // namespace

double robustness(const Expr& e, const EvalEnv& env) {
  if (e.type != ValueKind::kBool) {
    throw Error(ErrorCode::kTypeError,
                "robustness of non-boolean expression '" + to_string(e) + "'");
  }
  auto num = [&](std::size_t i) { return evaluate(*e.args[i], env); };
  switch (e.op) {
    case ExprOp::kLt:
    case ExprOp::kLe:
      return clamp_cap(num(1) - num(0));
    case ExprOp::kGt:
    case ExprOp::kGe:
      return clamp_cap(num(0) - num(1));
    case ExprOp::kEq:
      return clamp_cap(-std::fabs(num(0) - num(1)));
    case ExprOp::kNe:
      return clamp_cap(std::fabs(num(0) - num(1)));
    case ExprOp::kAnd:
      return std::min(robustness(*e.args[0], env), robustness(*e.args[1], env));
    case ExprOp::kOr:
      return std::max(robustness(*e.args[0], env), robustness(*e.args[1], env));
    case ExprOp::kNot:
      return -robustness(*e.args[0], env);
    default:
      return atom(holds(e, env));
  }
}

bool violates(double rob, const Expr& expr, const EvalEnv& env) {
  if (rob < 0.0) return true;
  if (rob > 0.0) return false;
  return !holds(expr, env);
}

std::shared_ptr<const CompiledAssessment> compile(const TestBlock& assessment) {
  if (assessment.kind != BlockKind::kAssessment) {
    throw Error(ErrorCode::kValidationFailed,
                assessment.name + " is not an assessment");
  }
  std::vector<Diagnostic> diags = validate(assessment);
  if (!diags.empty()) {
    std::string msg = assessment.name + ": " + to_string(diags.front());
    if (diags.size() > 1) {
      msg += " (+" + std::to_string(diags.size() - 1) + " more)";
    }
    throw Error(ErrorCode::kValidationFailed, msg);
  }
  auto out = std::make_shared<CompiledAssessment>();
  out->block = assessment;
  for (std::size_t s = 0; s < assessment.steps.size(); ++s) {
    const auto& sts = assessment.steps[s].statements;
    for (std::size_t i = 0; i < sts.size(); ++i) {
      out->channels.push_back(ChannelInfo{sts[i].id, sts[i].kind,
                                          static_cast<int>(s),
                                          static_cast<int>(i)});
    }
  }
  out->inputs = assessment.signals_with_role(SymbolRole::kInput);
  return out;
}

std::string_view outcome_name(Outcome3 o) {
  switch (o) {
    case Outcome3::kPass: return "Pass";
    case Outcome3::kFail: return "Fail";
    case Outcome3::kUntested: return "Untested";
  }
  return "Untested";
}

FitnessMonitor::FitnessMonitor(
    std::shared_ptr<const CompiledAssessment> compiled, double dt)
    : compiled_(std::move(compiled)),
      dt_(dt),
      machine_(compiled_->block, dt),
      status_(compiled_->channels.size(), Outcome3::kUntested) {
  last_.channels.resize(compiled_->channels.size());
}

const FitnessMonitor::Observation& FitnessMonitor::observe(
    std::span<const double> inputs) {
  if (stopped_) {
    throw Error(ErrorCode::kInvalidArgument, "monitor already stopped by assert");
  }
  machine_.advance(inputs);
  const SampleView view = machine_.view();
  const ActiveConfiguration& config = machine_.config();
  const TestBlock& block = compiled_->block;

  double total = fit_total_.empty() ? kRobustnessCap : fit_total_.back();
  last_.stop = false;
  for (std::size_t c = 0; c < compiled_->channels.size(); ++c) {
    const ChannelInfo& ch = compiled_->channels[c];
    if (!config.contains(ch.step)) {
      last_.channels[c].reset();
      continue;
    }
    const Expr& body = *block.steps[ch.step].statements[ch.index].body;
    EvalEnv env = env_for(config, ch.step, view);
    double rob = robustness(body, env);
    last_.channels[c] = rob;
    total = std::min(total, rob);
    if (violates(rob, body, env)) {
      status_[c] = Outcome3::kFail;
      if (rob == 0.0) boundary_ = true;
      if (ch.kind == StatementKind::kAssert) last_.stop = true;
    } else if (status_[c] == Outcome3::kUntested) {
      status_[c] = Outcome3::kPass;
    }
  }
  last_.fit_total = total;
  fit_total_.push_back(total);
  history_.push_back(last_.channels);
  stopped_ = last_.stop;
  return last_;
}

Verdict FitnessMonitor::finalize() const {
  Verdict v;
  v.statements = status_;
  v.samples = fit_total_.size();
  v.stopped = stopped_;
  v.boundary = boundary_;
  v.final_fitness = fit_total_.empty() ? kRobustnessCap : fit_total_.back();
  bool any_pass = false;
  bool any_fail = false;
  for (Outcome3 o : status_) {
    any_pass |= o == Outcome3::kPass;
    any_fail |= o == Outcome3::kFail;
  }
  v.overall = any_fail ? Outcome3::kFail
              : any_pass ? Outcome3::kPass
                         : Outcome3::kUntested;
  return v;
}

void FitnessMonitor::write_channels(std::ostream& out) const {
  out << "# dt=" << format_double(dt_) << " n=" << fit_total_.size() << "\n";
  out << "time";
  for (const ChannelInfo& ch : compiled_->channels) {
    out << "\tFIT_" << ch.id << ":real";
  }
  out << "\tFIT_TOTAL:real\n";
  for (std::size_t k = 0; k < fit_total_.size(); ++k) {
    out << format_double(static_cast<double>(k) * dt_);
    for (const auto& v : history_[k]) {
      out << '\t' << (v ? format_double(*v) : "NA");
    }
    out << '\t' << format_double(fit_total_[k]) << "\n";
  }
}

Verdict assess_trace(const std::shared_ptr<const CompiledAssessment>& compiled,
                     const Trace& trace,
                     std::unique_ptr<FitnessMonitor>* keep) {
  std::vector<const Signal*> bound;
  for (const SignalDecl& d : compiled->inputs) bound.push_back(&trace.signal(d.name));
  auto monitor = std::make_unique<FitnessMonitor>(compiled, trace.grid().dt());
  std::vector<double> row(bound.size());
  for (std::size_t k = 0; k < trace.grid().n_samples(); ++k) {
    for (std::size_t i = 0; i < bound.size(); ++i) row[i] = bound[i]->values[k];
    if (monitor->observe(row).stop) break;
  }
  Verdict v = monitor->finalize();
  if (keep) *keep = std::move(monitor);
  return v;
}

}  // namespace tbf
