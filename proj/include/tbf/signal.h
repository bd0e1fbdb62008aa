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

// Uniform time grids, sampled signals and multi-signal traces.
//
// Every signal of a trace is sampled on the same fixed-step grid with t(k) =
// k * dt. Values are stored as doubles; boolean samples are 0.0/1.0 and integer
// samples are whole numbers, with the kind kept alongside so that writers and
// robustness evaluation can tell them apart.

#ifndef TBF_SIGNAL_H_
#define TBF_SIGNAL_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tbf {

enum class ValueKind { kReal, kBool, kInt };

std::string_view kind_name(ValueKind kind);
// Returns false if `text` is not one of "real", "bool", "int".
bool parse_kind(std::string_view text, ValueKind& kind);

class TimeGrid {
 public:
  TimeGrid(double dt, std::size_t n_samples);

  double dt() const { return dt_; }
  std::size_t n_samples() const { return n_samples_; }
  double time(std::size_t k) const { return static_cast<double>(k) * dt_; }
  double duration() const { return time(n_samples_ - 1); }

  // Number of whole samples covering `seconds`, tolerant to rounding noise in
  // the division (0.3 / 0.1 counts as 3).
  std::size_t samples_for(double seconds) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double dt_;
  std::size_t n_samples_;
};

struct SignalDecl {
  std::string name;
  ValueKind kind = ValueKind::kReal;

  friend bool operator==(const SignalDecl&, const SignalDecl&) = default;
};

struct Signal {
  std::string name;
  ValueKind kind = ValueKind::kReal;
  std::vector<double> values;

  friend bool operator==(const Signal&, const Signal&) = default;
};

// Immutable after construction.
class Trace {
 public:
  // Throws kInvalidArgument on length mismatch, duplicate names, or values
  // that do not fit the declared kind.
  Trace(TimeGrid grid, std::vector<Signal> signals);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<Signal>& signals() const { return signals_; }

  bool has(std::string_view name) const;
  // Throws kUnknownSignal.
  const Signal& signal(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  // Throws kUnknownSignal or kIndexOutOfRange.
  double sample_at(std::string_view name, std::size_t k) const;

  // Copy of this trace with only the first `n` samples (n >= 1).
  Trace truncated(std::size_t n) const;
  // Signals of both traces on a shared grid; names must be disjoint.
  static Trace merge(const Trace& a, const Trace& b);

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  TimeGrid grid_;
  std::vector<Signal> signals_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
// Full-string parse; throws kInvalidArgument on trailing garbage.
double parse_double(std::string_view text);

void write_trace(std::ostream& out, const Trace& trace);
// Throws kIoError with the offending line number on malformed input.
Trace read_trace(std::istream& in);

void save_trace(const std::string& path, const Trace& trace);
Trace load_trace(const std::string& path);

}  // namespace tbf

#endif  // TBF_SIGNAL_H_
