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

#include "tbf/experiment.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include <omp.h>

#include "tbf/error.h"

namespace tbf {

std::string method_name(const Method& m) {
  std::string out = m.driver == Driver::kAssessment ? "tb_" : "stl_";
  out += m.algorithm == Algorithm::kSimulatedAnnealing ? "sa" : "uniform";
  return out;
}

Method parse_method(std::string_view name) {
  for (Driver d : {Driver::kAssessment, Driver::kStl}) {
    for (Algorithm a : {Algorithm::kSimulatedAnnealing, Algorithm::kUniformRandom}) {
      if (method_name({d, a}) == name) return {d, a};
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

Outcome run_once(const Bundle& bundle, const Method& method, const SearchConfig& config) {
  SearchConfig c = config;
  c.algorithm = method.algorithm;
  if (method.driver == Driver::kStl) {
    return baseline_falsify(bundle.model, bundle.profile, bundle.formula, c);
  }
  return falsify(bundle.model, bundle.pseq, bundle.assessment, c);
}

namespace {

RunRecord run_indexed(const Bundle& bundle, const Method& method,
                      const SearchConfig& config, int i) {
  SearchConfig c = config;
  c.seed = config.seed + static_cast<std::uint64_t>(i);
  RunRecord r;
  r.run_id = i;
  r.model = bundle.model.name;
  r.method = method_name(method);
  r.seed = c.seed;
  r.outcome = run_once(bundle, method, c);
  return r;
}

void check_repetitions(int repetitions) {
  if (repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1");
  }
}

}  // namespace

std::vector<RunRecord> run_repetitions(const Bundle& bundle, const Method& method,
                                       const SearchConfig& config, int repetitions,
                                       int jobs) {
  check_repetitions(repetitions);
  config.check();
  std::vector<RunRecord> out(repetitions);
  std::vector<std::exception_ptr> errors(repetitions);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < repetitions; ++i) {
    try {
      out[i] = run_indexed(bundle, method, config, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<RunRecord> run_repetitions_serial(const Bundle& bundle, const Method& method,
                                              const SearchConfig& config,
                                              int repetitions) {
  check_repetitions(repetitions);
  config.check();
  std::vector<RunRecord> out;
  for (int i = 0; i < repetitions; ++i) out.push_back(run_indexed(bundle, method, config, i));
  return out;
}

bool SummaryRow::same_result(const SummaryRow& o) const {
  return run_id == o.run_id && model == o.model && method == o.method && seed == o.seed &&
         status == o.status && fitness == o.fitness && iterations == o.iterations &&
         values == o.values;
}

SummaryRow summary_row(const RunRecord& r) {
  SummaryRow row;
  row.run_id = r.run_id;
  row.model = r.model;
  row.method = r.method;
  row.seed = r.seed;
  row.status = r.outcome.status;
  row.fitness = r.outcome.fitness;
  row.iterations = r.outcome.iterations;
  row.elapsed_ms = r.outcome.elapsed_ms;
  row.values = r.outcome.values;
  return row;
}

void write_summary_header(std::ostream& out) {
  out << "run_id,model,method,seed,status,fitness,iterations,elapsed_ms,values\n";
}

void write_summary_row(std::ostream& out, const SummaryRow& row) {
  out << row.run_id << ',' << row.model << ',' << row.method << ',' << row.seed << ','
      << status_name(row.status) << ',' << format_double(row.fitness) << ','
      << row.iterations << ',' << format_double(row.elapsed_ms) << ',';
  for (std::size_t i = 0; i < row.values.size(); ++i) {
    if (i) out << ';';
    out << format_double(row.values[i]);
  }
  out << '\n';
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  write_summary_header(out);
  for (const SummaryRow& r : rows) write_summary_row(out, r);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<SummaryRow> read_summary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "run_id,model,method,seed,status,fitness,iterations,elapsed_ms,values") {
    throw Error(ErrorCode::kIoError, "summary: bad header");
  }
  std::vector<SummaryRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 9) {
      throw Error(ErrorCode::kIoError,
                  "summary line " + std::to_string(line_no) + ": expected 9 fields");
    }
    try {
      SummaryRow r;
      r.run_id = std::stoi(f[0]);
      r.model = f[1];
      r.method = f[2];
      r.seed = std::stoull(f[3]);
      if (f[4] == "TC") {
        r.status = Status::kFailureRevealing;
      } else if (f[4] == "NFF") {
        r.status = Status::kNoFaultFound;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "bad status '" + f[4] + "'");
      }
      r.fitness = parse_double(f[5]);
      r.iterations = std::stoi(f[6]);
      r.elapsed_ms = parse_double(f[7]);
      if (!f[8].empty()) {
        for (const std::string& v : split(f[8], ';')) r.values.push_back(parse_double(v));
      }
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kIoError,
                  "summary line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

MethodSummary summarize(const std::vector<SummaryRow>& rows) {
  MethodSummary s;
  if (rows.empty()) return s;
  s.model = rows.front().model;
  s.method = rows.front().method;
  double iters = 0.0;
  double elapsed = 0.0;
  for (const SummaryRow& r : rows) {
    ++s.runs;
    elapsed += r.elapsed_ms;
    if (r.status == Status::kFailureRevealing) {
      ++s.failures;
      iters += r.iterations;
    }
  }
  s.rate = static_cast<double>(s.failures) / s.runs;
  if (s.failures > 0) s.mean_iterations = iters / s.failures;
  s.mean_elapsed_ms = elapsed / s.runs;
  return s;
}

std::vector<MethodSummary> compare(const std::vector<SummaryRow>& rows) {
  std::vector<std::string> methods;
  for (const SummaryRow& r : rows) {
    if (r.model != rows.front().model) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mismatched models: " + rows.front().model + " and " + r.model);
    }
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  if (methods.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need two methods");
  std::vector<MethodSummary> table;
  for (const std::string& m : methods) {
    std::vector<SummaryRow> subset;
    for (const SummaryRow& r : rows) {
      if (r.method == m) subset.push_back(r);
    }
    table.push_back(summarize(subset));
  }
  return table;
}

void write_comparison(std::ostream& out, const std::vector<MethodSummary>& table) {
  out << "model,method,runs,failures,rate,mean_iterations,mean_elapsed_ms\n";
  for (const MethodSummary& s : table) {
    out << s.model << ',' << s.method << ',' << s.runs << ',' << s.failures << ','
        << format_double(s.rate) << ','
        << (s.mean_iterations ? format_double(*s.mean_iterations) : "NA") << ','
        << format_double(s.mean_elapsed_ms) << '\n';
  }
}

namespace {

ConsistencySample consistency_sample(const Bundle& bundle,
                                     const std::shared_ptr<const CompiledAssessment>& compiled,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Trace inputs = profile_sample(bundle.profile, bundle.model.grid(), rng);
  SimOptions options;
  options.assessment = compiled;
  SimResult r = simulate_inputs(bundle.model, inputs, options);
  ConsistencySample s;
  s.assessment = r.verdict->overall;
  s.fitness = r.verdict->final_fitness;
  s.robustness = stl_robustness(bundle.formula, Trace::merge(r.inputs, r.outputs)).robustness;
  s.boundary = std::fabs(s.robustness) <= 1e-9;
  s.agree = (s.assessment == Outcome3::kFail) == (s.robustness < 0.0);
  return s;
}

}  // namespace

ConsistencyReport oracle_consistency(const Bundle& bundle, int samples,
                                     std::uint64_t seed, bool parallel) {
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  auto compiled = compile(bundle.assessment);
  ConsistencyReport report;
  report.samples.resize(samples);
  std::vector<std::exception_ptr> errors(samples);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int i = 0; i < samples; ++i) {
    try {
      report.samples[i] =
          consistency_sample(bundle, compiled, seed + static_cast<std::uint64_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const ConsistencySample& s : report.samples) {
    if (s.boundary) continue;
    ++report.compared;
    if (!s.agree) ++report.mismatches;
  }
  return report;
}

}  // namespace tbf
