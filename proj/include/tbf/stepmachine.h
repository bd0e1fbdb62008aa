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

// Execution of hierarchical test blocks.
//
// Per sample k: at k = 0 the initial configuration is entered, for k >= 1 one
// tick runs (at most one transition or when-switch, outermost first), then the
// actions of every active step are applied root to leaf.

#ifndef TBF_STEPMACHINE_H_
#define TBF_STEPMACHINE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tbf/signal.h"
#include "tbf/testlang.h"

namespace tbf {

struct ActiveStep {
  int step = kNoStep;
  std::size_t entry_k = 0;
};

struct ActiveConfiguration {
  // Root first, leaf last.
  std::vector<ActiveStep> path;

  int leaf() const { return path.back().step; }
  bool contains(int step) const;
  // Entry sample of `step`, which must be on the path.
  std::size_t entry_of(int step) const;
  std::string describe(const TestBlock& block) const;  // "A/B/C"

  friend bool operator==(const ActiveConfiguration& a,
                         const ActiveConfiguration& b) {
    if (a.path.size() != b.path.size()) return false;
    for (std::size_t i = 0; i < a.path.size(); ++i) {
      if (a.path[i].step != b.path[i].step ||
          a.path[i].entry_k != b.path[i].entry_k) {
        return false;
      }
    }
    return true;
  }
};

// Valuation of one sample: `now` and `prev` are indexed by symbol slot.
struct SampleView {
  std::size_t k = 0;
  double dt = 0.01;
  std::span<const double> now;
  std::span<const double> prev;  // empty at k = 0

  double t() const { return static_cast<double>(k) * dt; }
};

// Elapsed time of `step` (kNoStep: the block itself, entered at 0).
double elapsed(const ActiveConfiguration& config, int step,
               const SampleView& view);

EvalEnv env_for(const ActiveConfiguration& config, int step,
                const SampleView& view);

struct FiredTransition {
  int source = kNoStep;
  int destination = kNoStep;
  // Set for a when-decomposition switch, unset for a standard transition.
  bool is_switch = false;
  int transition = -1;  // index into TestBlock::transitions
};

struct TickResult {
  ActiveConfiguration config;
  std::optional<FiredTransition> fired;
};

// kNoActiveChild if a when-decomposition has no true guard and no otherwise.
ActiveConfiguration init(const TestBlock& block, const SampleView& view);

// kUnknownStep if `config` does not describe a path of `block`.
TickResult tick(const ActiveConfiguration& config, const TestBlock& block,
                const SampleView& view);

// Applies the assignments of the active steps, root to leaf, to `values`
// (indexed by slot). Later statements see earlier results, so the deepest
// assignment to a signal wins. Int outputs are rounded, bool outputs
// normalised to 0/1.
void emit_actions(const ActiveConfiguration& config, const TestBlock& block,
                  const SampleView& view, std::vector<double>& values);

// Incremental driver used by the sequence runner, the simulator and the
// fitness monitor. The block must outlive the machine.
class BlockMachine {
 public:
  // `params` is aligned with block.slots_with_role(kParam).
  BlockMachine(const TestBlock& block, double dt,
               std::span<const double> params = {});

  // Advances to the next sample. `inputs` is aligned with
  // block.slots_with_role(kInput).
  void advance(std::span<const double> inputs);

  std::size_t k() const { return k_ - 1; }
  bool started() const { return k_ > 0; }
  const ActiveConfiguration& config() const { return config_; }
  const std::optional<FiredTransition>& fired() const { return fired_; }
  const std::vector<double>& values() const { return now_; }
  SampleView view() const;
  const TestBlock& block() const { return block_; }

  void set_debug(std::ostream* out) { debug_ = out; }

 private:
  const TestBlock& block_;
  double dt_;
  std::vector<int> input_slots_;
  std::vector<double> now_;
  std::vector<double> prev_;
  std::size_t k_ = 0;  // samples consumed
  ActiveConfiguration config_;
  std::optional<FiredTransition> fired_;
  std::ostream* debug_ = nullptr;
};

// Open-loop generation of a sequence's outputs over `grid`. Sequence inputs,
// if declared, read as zero. kOutOfDomain if a parameter is missing or
// outside its domain.
Trace run_sequence(const TestBlock& block,
                   const std::map<std::string, double>& params,
                   const TimeGrid& grid, std::ostream* debug = nullptr);

// Parameter vector aligned with slots_with_role(kParam); checks domains.
std::vector<double> parameter_vector(const TestBlock& block,
                                     const std::map<std::string, double>& params);

}  // namespace tbf

#endif  // TBF_STEPMACHINE_H_
