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
#include <chrono>
#include <cmath>

#include "tbf/error.h"

namespace tbf {

std::vector<double> SearchSpace::midpoint() const {
  std::vector<double> m;
  for (const Parameter& p : params) m.push_back(p.lower + 0.5 * (p.upper - p.lower));
  return m;
}

bool SearchSpace::contains(std::span<const double> values) const {
  if (values.size() != params.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= params[i].lower && values[i] <= params[i].upper)) return false;
  }
  return true;
}

SearchSpace extract_space(const TestBlock& pseq) {
  SearchSpace space;
  for (int slot : pseq.slots_with_role(SymbolRole::kParam)) {
    const Symbol& s = pseq.symbols[slot];
    if (!s.lower || !s.upper || *s.lower > *s.upper) {
      throw Error(ErrorCode::kInvalidArgument, s.name + " has no valid domain");
    }
    space.params.push_back(Parameter{s.name, *s.lower, *s.upper});
  }
  if (space.params.empty()) {
    throw Error(ErrorCode::kNoParameters, pseq.name + " declares no parameters");
  }
  return space;
}

TestBlock instantiate(const TestBlock& pseq, std::span<const double> values) {
  std::vector<int> slots = pseq.slots_with_role(SymbolRole::kParam);
  if (values.size() != slots.size()) {
    throw Error(ErrorCode::kOutOfDomain,
                "expected " + std::to_string(slots.size()) + " parameter values, got " +
                    std::to_string(values.size()));
  }
  TestBlock out = pseq;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    Symbol& s = out.symbols[slots[i]];
    if (!(values[i] >= s.lower.value_or(values[i]) &&
          values[i] <= s.upper.value_or(values[i]))) {
      throw Error(ErrorCode::kOutOfDomain,
                  s.name + "=" + format_double(values[i]) + " is outside [" +
                      format_double(*s.lower) + ", " + format_double(*s.upper) + "]");
    }
    s.role = SymbolRole::kConst;
    s.value = values[i];
    s.lower.reset();
    s.upper.reset();
  }
  auto sub = [&](ExprPtr& e) {
    if (e) e = substitute(e, slots, values);
  };
  for (TestStep& step : out.steps) {
    sub(step.when_guard);
    for (Assignment& a : step.actions) sub(a.value);
    for (VerificationStatement& st : step.statements) sub(st.body);
  }
  for (Transition& t : out.transitions) sub(t.guard);
  return out;
}

std::string_view algorithm_name(Algorithm a) {
  return a == Algorithm::kSimulatedAnnealing ? "simulated_annealing" : "uniform_random";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "simulated_annealing" || name == "sa") return Algorithm::kSimulatedAnnealing;
  if (name == "uniform_random" || name == "uniform") return Algorithm::kUniformRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

void SearchConfig::check() const {
  if (max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  }
  if (!(cooling > 0.0 && cooling < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cooling factor must be in (0, 1)");
  }
  if (!(stddev_fraction > 0.0 && stddev_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "stddev fraction must be in (0, 1]");
  }
  if (!(temperature_scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature scale must be positive");
  }
  if (budget_seconds && !(*budget_seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "budget must be positive");
  }
}

namespace {

double reflect(double x, double lo, double hi) {
  const double w = hi - lo;
  if (w <= 0.0) return lo;
  double y = std::fmod(std::fabs(x - lo), 2.0 * w);
  if (y > w) y = 2.0 * w - y;
  return std::clamp(lo + y, lo, hi);
}

}  // namespace

std::vector<double> propose(std::span<const double> current,
                            const SearchSpace& space, double temperature,
                            double t0, double stddev_fraction, Rng& rng) {
  std::vector<double> out(current.begin(), current.end());
  const double scale = t0 > 0.0 ? std::max(temperature, 0.0) / t0 : 0.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Parameter& p = space.params[i];
    const double sd = stddev_fraction * (p.upper - p.lower) * scale;
    const double z = gauss(rng);
    out[i] = reflect(out[i] + sd * z, p.lower, p.upper);
  }
  return out;
}

std::vector<double> uniform_point(const SearchSpace& space, Rng& rng) {
  std::vector<double> out;
  for (const Parameter& p : space.params) {
    std::uniform_real_distribution<double> u(p.lower, p.upper);
    out.push_back(p.lower == p.upper ? p.lower : u(rng));
  }
  return out;
}

bool metropolis_accept(double delta, double temperature, Rng& rng) {
  if (delta <= 0.0) return true;
  if (!(temperature > 0.0)) return false;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < std::exp(-delta / temperature);
}

std::string_view status_name(Status s) {
  return s == Status::kFailureRevealing ? "TC" : "NFF";
}

Outcome optimize(const SearchSpace& space, const Objective& objective,
                 const SearchConfig& config) {
  config.check();
  if (space.dimension() == 0) {
    throw Error(ErrorCode::kNoParameters, "empty search space");
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };
  Rng rng(config.seed);
  const bool sa = config.algorithm == Algorithm::kSimulatedAnnealing;

  Outcome out;
  out.values = space.midpoint();
  std::vector<double> current = space.midpoint();
  std::optional<double> current_f;
  double t0 = 0.0;
  double temperature = 0.0;
  bool have_best = false;

  for (int it = 1; it <= config.max_iterations; ++it) {
    HistoryEntry h;
    h.iteration = it;
    if (!sa) {
      h.values = uniform_point(space, rng);
    } else if (it == 1) {
      h.values = current;
    } else {
      h.values = propose(current, space, current_f ? temperature : 1.0,
                         current_f ? t0 : 1.0, config.stddev_fraction, rng);
    }
    try {
      h.fitness = objective(h.values);
    } catch (const Error& e) {
      h.error = e.what();
    }
    if (h.fitness) {
      const double f = *h.fitness;
      if (sa) {
        if (!current_f) {
          t0 = config.temperature_scale * std::max(std::fabs(f), 1.0);
          temperature = t0;
          h.accepted = true;
        } else {
          h.accepted = metropolis_accept(f - *current_f, temperature, rng);
        }
        if (h.accepted) {
          current = h.values;
          current_f = f;
        }
      } else {
        h.accepted = !have_best || f < out.fitness;
      }
      if (!have_best || f < out.fitness) {
        have_best = true;
        out.fitness = f;
        out.values = h.values;
      }
    }
    out.iterations = it;
    const bool failed = h.fitness && *h.fitness < 0.0;
    out.history.push_back(std::move(h));
    if (failed) {
      out.status = Status::kFailureRevealing;
      break;
    }
    if (current_f) temperature *= config.cooling;
    if (config.budget_seconds && elapsed_ms() >= *config.budget_seconds * 1000.0) break;
  }
  out.elapsed_ms = elapsed_ms();
  return out;
}

Outcome falsify(const ModelSpec& model, const TestBlock& pseq,
                const TestBlock& assessment, const SearchConfig& config) {
  std::vector<Diagnostic> diags = validate(pseq);
  if (!diags.empty()) {
    throw Error(ErrorCode::kValidationFailed, pseq.name + ": " + to_string(diags.front()));
  }
  check_interface(model, pseq);
  check_assessment(model, assessment);
  SimOptions options;
  options.assessment = compile(assessment);
  const SearchSpace space = extract_space(pseq);
  auto objective = [&](std::span<const double> values) {
    TestBlock concrete = instantiate(pseq, values);
    SimResult r = simulate(model, concrete, {}, options);
    return r.verdict->final_fitness;
  };
  return optimize(space, objective, config);
}

SearchSpace profile_space(const InputProfile& profile) {
  profile.check();
  SearchSpace space;
  for (const SignalProfile& p : profile.signals) {
    for (int j = 0; j < p.control_points; ++j) {
      space.params.push_back(
          Parameter{p.name + "[" + std::to_string(j) + "]", p.lo, p.hi});
    }
  }
  return space;
}

Outcome baseline_falsify(const ModelSpec& model, const InputProfile& profile,
                         const StlFormula& formula, const SearchConfig& config) {
  if (profile.signals.size() != model.inputs.size()) {
    throw Error(ErrorCode::kSignalMismatch, "profile does not cover the model inputs");
  }
  for (const SignalDecl& d : model.inputs) {
    bool found = false;
    for (const SignalProfile& p : profile.signals) {
      found |= p.name == d.name && p.kind == d.kind;
    }
    if (!found) {
      throw Error(ErrorCode::kSignalMismatch,
                  "profile has no " + std::string(kind_name(d.kind)) + " signal '" +
                      d.name + "'");
    }
  }
  const TimeGrid grid = model.grid();
  if (horizon_samples(*formula.root, grid.dt()) > grid.n_samples() - 1) {
    throw Error(ErrorCode::kIntervalOutOfRange, "formula horizon exceeds the run");
  }
  const SearchSpace space = profile_space(profile);
  auto objective = [&](std::span<const double> values) {
    SimResult r = simulate_inputs(model, profile_trace(profile, values, grid));
    return stl_robustness(formula, Trace::merge(r.inputs, r.outputs)).robustness;
  };
  return optimize(space, objective, config);
}

void write_history(std::ostream& out, const SearchSpace& space,
                   const Outcome& outcome) {
  out << "iter";
  for (const Parameter& p : space.params) out << ',' << p.name;
  out << ",fitness,accepted\n";
  for (const HistoryEntry& h : outcome.history) {
    out << h.iteration;
    for (double v : h.values) out << ',' << format_double(v);
    out << ',' << (h.fitness ? format_double(*h.fitness) : "NA") << ','
        << (h.accepted ? 1 : 0) << '\n';
  }
}

}  // namespace tbf
