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

// Search phase: parameter spaces of parameterized sequences, simulated
// annealing and uniform random sampling, and the falsification loop.

#ifndef TBF_SEARCH_H_
#define TBF_SEARCH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbf/sim.h"
#include "tbf/stl.h"
#include "tbf/testlang.h"

namespace tbf {

using Rng = std::mt19937_64;

struct Parameter {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
};

struct SearchSpace {
  std::vector<Parameter> params;

  std::size_t dimension() const { return params.size(); }
  std::vector<double> midpoint() const;
  bool contains(std::span<const double> values) const;
};

// kNoParameters if the sequence declares none.
SearchSpace extract_space(const TestBlock& pseq);

// Replaces every parameter by its value; the parameters become constants.
// kOutOfDomain for values outside their domain.
TestBlock instantiate(const TestBlock& pseq, std::span<const double> values);

enum class Algorithm { kSimulatedAnnealing, kUniformRandom };
std::string_view algorithm_name(Algorithm a);
// kInvalidArgument for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct SearchConfig {
  int max_iterations = 300;
  std::optional<double> budget_seconds;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::kSimulatedAnnealing;
  // T0 = temperature_scale * max(|f(midpoint)|, 1).
  double temperature_scale = 1.0;
  double cooling = 0.97;
  double stddev_fraction = 0.25;

  // kInvalidArgument on out-of-range settings.
  void check() const;
};

// Gaussian step with stddev = fraction * width * temperature / t0 per
// component, reflected into the box.
std::vector<double> propose(std::span<const double> current,
                            const SearchSpace& space, double temperature,
                            double t0, double stddev_fraction, Rng& rng);

std::vector<double> uniform_point(const SearchSpace& space, Rng& rng);

// Metropolis rule for minimisation.
bool metropolis_accept(double delta, double temperature, Rng& rng);

struct HistoryEntry {
  int iteration = 0;
  std::vector<double> values;
  std::optional<double> fitness;  // unset: evaluation error
  bool accepted = false;
  std::string error;
};

enum class Status { kFailureRevealing, kNoFaultFound };
std::string_view status_name(Status s);

struct Outcome {
  Status status = Status::kNoFaultFound;
  // Failure-revealing candidate, or the best one seen.
  std::vector<double> values;
  double fitness = kRobustnessCap;
  int iterations = 0;
  double elapsed_ms = 0.0;
  std::vector<HistoryEntry> history;
};

// Fitness of a candidate; throw tbf::Error to report an evaluation error.
using Objective = std::function<double(std::span<const double>)>;

// Stops at the first negative fitness, at max_iterations or at the budget.
Outcome optimize(const SearchSpace& space, const Objective& objective,
                 const SearchConfig& config);

// Assessment-driven falsification of `model` over the parameters of `pseq`.
Outcome falsify(const ModelSpec& model, const TestBlock& pseq,
                const TestBlock& assessment, const SearchConfig& config);

// STL-driven falsification: the decision vector is the flattened control
// points of `profile`, the fitness the robustness of the model I/O trace.
Outcome baseline_falsify(const ModelSpec& model, const InputProfile& profile,
                         const StlFormula& formula, const SearchConfig& config);

// Box of control-point values of a profile (names SIGNAL[j]).
SearchSpace profile_space(const InputProfile& profile);

// CSV `iter,<names...>,fitness,accepted`; evaluation errors have fitness NA.
void write_history(std::ostream& out, const SearchSpace& space,
                   const Outcome& outcome);

}  // namespace tbf

#endif  // TBF_SEARCH_H_
