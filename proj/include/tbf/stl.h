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

// Bounded-time STL over sampled traces, and control-point input profiles.
//
// Syntax (loosest binding first):
//
//   phi := phi "->" phi | phi ("or" | "||") phi | phi ("and" | "&&") phi
//        | phi "U" "[" a "," b "]" phi
//        | ("not" | "!" | "~") phi | ("G" | "F") "[" a "," b "]" phi
//        | "(" phi ")" | "true" | "false" | arith relop arith
//
// Intervals are in seconds and map to sample windows
// [ceil(a/dt), floor(b/dt)] relative to the current sample.

#ifndef TBF_STL_H_
#define TBF_STL_H_

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbf/expr.h"
#include "tbf/signal.h"

namespace tbf {

enum class StlOp { kPredicate, kNot, kAnd, kOr, kImplies, kAlways, kEventually, kUntil };

struct StlNode;
using StlPtr = std::shared_ptr<const StlNode>;

struct StlNode {
  StlOp op = StlOp::kPredicate;
  ExprPtr predicate;  // kPredicate: boolean expression over signals
  double a = 0.0;     // temporal bounds, seconds
  double b = 0.0;
  std::vector<StlPtr> args;
};

struct StlFormula {
  // Signals referenced by predicates; expression slots index into it.
  std::vector<Symbol> symbols;
  StlPtr root;
};

// kSyntaxError for malformed or unbounded formulas.
StlFormula parse_stl(std::string_view text);
StlFormula load_stl(const std::string& path);
std::string to_string(const StlFormula& formula);
std::string to_string(const StlNode& node, const std::vector<Symbol>& symbols);

// Sample window [lo, hi] of a temporal bound pair at step dt.
std::size_t window_lo(double a, double dt);
std::size_t window_hi(double b, double dt);

// Largest sample offset the formula inspects from time 0.
std::size_t horizon_samples(const StlNode& node, double dt);

struct StlVerdictReport {
  double robustness = 0.0;
  bool verdict = true;
};

// Serial monitor (sliding-window extrema). kUnknownSignal,
// kIntervalOutOfRange.
StlVerdictReport stl_robustness(const StlFormula& formula, const Trace& trace);
// Same values computed with OpenMP over sample indices.
StlVerdictReport stl_robustness_parallel(const StlFormula& formula,
                                         const Trace& trace);
// Robustness of the root at every sample; windows past the end are clipped.
std::vector<double> stl_signal(const StlFormula& formula, const Trace& trace,
                               bool parallel = false);

enum class Interpolation { kPiecewiseConstant, kPchip };

struct SignalProfile {
  std::string name;
  ValueKind kind = ValueKind::kReal;
  int control_points = 1;
  double lo = 0.0;
  double hi = 1.0;
  Interpolation interpolation = Interpolation::kPiecewiseConstant;
};

struct InputProfile {
  std::vector<SignalProfile> signals;

  std::size_t dimension() const;
  // kInvalidArgument if malformed.
  void check() const;
};

// {"signals": [{"name", "kind", "control_points", "range": [lo, hi],
//               "interpolation": "pchip" | "piecewise_constant"}]}
InputProfile parse_profile(std::string_view json_text);

// Fritsch-Carlson slopes of the monotone cubic Hermite interpolant.
std::vector<double> pchip_slopes(std::span<const double> x,
                                 std::span<const double> y);
double pchip_eval(std::span<const double> x, std::span<const double> y,
                  std::span<const double> slopes, double t);

// Control point times over [0, duration]: pchip spans both ends, piecewise
// constant points start equal-length hold intervals.
std::vector<double> control_times(const SignalProfile& p, double duration);
std::vector<double> interpolate(const SignalProfile& p,
                                std::span<const double> control_values,
                                const TimeGrid& grid);

// Flattened control values (signal-major) to an input trace. Int signals are
// rounded, bool signals thresholded at 0.5.
Trace profile_trace(const InputProfile& profile,
                    std::span<const double> control_values,
                    const TimeGrid& grid);
Trace profile_sample(const InputProfile& profile, const TimeGrid& grid,
                     std::mt19937_64& rng);

}  // namespace tbf

#endif  // TBF_STL_H_
