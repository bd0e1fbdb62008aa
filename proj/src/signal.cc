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

#include "tbf/signal.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tbf/error.h"

namespace tbf {

std::string_view kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::kReal: return "real";
    case ValueKind::kBool: return "bool";
    case ValueKind::kInt: return "int";
  }
  return "real";
}

bool parse_kind(std::string_view text, ValueKind& kind) {
  if (text == "real") {
    kind = ValueKind::kReal;
  } else if (text == "bool") {
    kind = ValueKind::kBool;
  } else if (text == "int") {
    kind = ValueKind::kInt;
  } else {
    return false;
  }
  return true;
}

TimeGrid::TimeGrid(double dt, std::size_t n_samples)
    : dt_(dt), n_samples_(n_samples) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::kInvalidArgument, "time step must be positive");
  }
  if (n_samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least one sample");
  }
}

std::size_t TimeGrid::samples_for(double seconds) const {
  if (seconds <= 0.0) return 0;
  return static_cast<std::size_t>(std::floor(seconds / dt_ + 1e-9));
}

Trace::Trace(TimeGrid grid, std::vector<Signal> signals)
    : grid_(grid), signals_(std::move(signals)) {
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    const Signal& s = signals_[i];
    if (s.values.size() != grid_.n_samples()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "signal '" + s.name + "' has " +
                      std::to_string(s.values.size()) + " samples, grid has " +
                      std::to_string(grid_.n_samples()));
    }
    for (double v : s.values) {
      bool ok = true;
      switch (s.kind) {
        case ValueKind::kBool: ok = v == 0.0 || v == 1.0; break;
        case ValueKind::kInt: ok = std::isfinite(v) && v == std::trunc(v); break;
        case ValueKind::kReal: break;
      }
      if (!ok) {
        throw Error(ErrorCode::kInvalidArgument,
                    "signal '" + s.name + "' holds " + format_double(v) +
                        ", not a valid " + std::string(kind_name(s.kind)));
      }
    }
    if (!index_.emplace(s.name, i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate signal name '" + s.name + "'");
    }
  }
}

bool Trace::has(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::size_t Trace::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw Error(ErrorCode::kUnknownSignal,
                "no signal named '" + std::string(name) + "'");
  }
  return it->second;
}

const Signal& Trace::signal(std::string_view name) const {
  return signals_[index_of(name)];
}

double Trace::sample_at(std::string_view name, std::size_t k) const {
  const Signal& s = signal(name);
  if (k >= s.values.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "sample " + std::to_string(k) + " outside grid of " +
                    std::to_string(s.values.size()));
  }
  return s.values[k];
}

Trace Trace::truncated(std::size_t n) const {
  if (n == 0 || n > grid_.n_samples()) {
    throw Error(ErrorCode::kIndexOutOfRange, "bad truncation length");
  }
  std::vector<Signal> out = signals_;
  for (Signal& s : out) s.values.resize(n);
  return Trace(TimeGrid(grid_.dt(), n), std::move(out));
}

Trace Trace::merge(const Trace& a, const Trace& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorCode::kInvalidArgument, "cannot merge traces on different grids");
  }
  std::vector<Signal> out = a.signals();
  out.insert(out.end(), b.signals().begin(), b.signals().end());
  return Trace(a.grid(), std::move(out));
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw Error(ErrorCode::kInvalidArgument,
                "not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kIoError,
              "trace line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  const TimeGrid& grid = trace.grid();
  out << "# dt=" << format_double(grid.dt()) << " n=" << grid.n_samples()
      << '\n';
  out << "time";
  for (const Signal& s : trace.signals()) {
    out << '\t' << s.name << ':' << kind_name(s.kind);
  }
  out << '\n';
  for (std::size_t k = 0; k < grid.n_samples(); ++k) {
    out << format_double(grid.time(k));
    for (const Signal& s : trace.signals()) {
      out << '\t';
      if (s.kind == ValueKind::kBool) {
        out << (s.values[k] != 0.0 ? "true" : "false");
      } else {
        out << format_double(s.values[k]);
      }
    }
    out << '\n';
  }
}

Trace read_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) bad_line(line_no, "missing header");
  double dt = 0.0;
  std::size_t n = 0;
  {
    std::istringstream header(line);
    std::string hash, dt_field, n_field;
    header >> hash >> dt_field >> n_field;
    if (hash != "#" || dt_field.rfind("dt=", 0) != 0 ||
        n_field.rfind("n=", 0) != 0) {
      bad_line(line_no, "expected '# dt=<float> n=<int>'");
    }
    try {
      dt = parse_double(std::string_view(dt_field).substr(3));
      n = static_cast<std::size_t>(std::stoull(n_field.substr(2)));
    } catch (const std::exception&) {
      bad_line(line_no, "bad dt or n");
    }
  }
  ++line_no;
  if (!std::getline(in, line)) bad_line(line_no, "missing column header");
  auto columns = split_tabs(line);
  if (columns.empty() || columns[0] != "time") {
    bad_line(line_no, "first column must be 'time'");
  }
  std::vector<Signal> signals;
  for (std::size_t c = 1; c < columns.size(); ++c) {
    auto colon = columns[c].rfind(':');
    Signal s;
    if (colon == std::string_view::npos ||
        !parse_kind(columns[c].substr(colon + 1), s.kind)) {
      bad_line(line_no, "column '" + std::string(columns[c]) +
                            "' is not name:kind");
    }
    s.name = std::string(columns[c].substr(0, colon));
    s.values.reserve(n);
    signals.push_back(std::move(s));
  }
  for (std::size_t k = 0; k < n; ++k) {
    ++line_no;
    if (!std::getline(in, line)) bad_line(line_no, "missing sample row");
    auto cells = split_tabs(line);
    if (cells.size() != signals.size() + 1) bad_line(line_no, "wrong cell count");
    for (std::size_t c = 0; c < signals.size(); ++c) {
      std::string_view cell = cells[c + 1];
      Signal& s = signals[c];
      if (s.kind == ValueKind::kBool) {
        if (cell == "true") {
          s.values.push_back(1.0);
        } else if (cell == "false") {
          s.values.push_back(0.0);
        } else {
          bad_line(line_no, "expected true/false");
        }
      } else {
        try {
          s.values.push_back(parse_double(cell));
        } catch (const Error&) {
          bad_line(line_no, "bad number '" + std::string(cell) + "'");
        }
      }
    }
  }
  return Trace(TimeGrid(dt, n), std::move(signals));
}

void save_trace(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  write_trace(out, trace);
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  return read_trace(in);
}

}  // namespace tbf
