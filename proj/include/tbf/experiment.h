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

// Batch experiments: repeated falsification runs, summary CSVs, per-method
// comparison and assessment/STL verdict consistency over random inputs.
//
// Summary CSV columns:
//   run_id,model,method,seed,status,fitness,iterations,elapsed_ms,values
// where status is TC or NFF and values joins the best candidate with ';'.

#ifndef TBF_EXPERIMENT_H_
#define TBF_EXPERIMENT_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tbf/bundle.h"
#include "tbf/search.h"

namespace tbf {

// Which fitness drives the search.
enum class Driver { kAssessment, kStl };

struct Method {
  Driver driver = Driver::kAssessment;
  Algorithm algorithm = Algorithm::kSimulatedAnnealing;
};

// "tb_sa", "tb_uniform", "stl_sa" or "stl_uniform".
std::string method_name(const Method& m);
// kInvalidArgument for unknown names.
Method parse_method(std::string_view name);

struct RunRecord {
  int run_id = 0;
  std::string model;
  std::string method;
  std::uint64_t seed = 0;
  Outcome outcome;
};

// One search with `config` (its algorithm is overridden by `method`).
Outcome run_once(const Bundle& bundle, const Method& method, const SearchConfig& config);

// Runs i = 0..repetitions-1 with seed = config.seed + i on up to `jobs`
// threads (0: all available). Records come back in run-id order.
std::vector<RunRecord> run_repetitions(const Bundle& bundle, const Method& method,
                                       const SearchConfig& config, int repetitions,
                                       int jobs = 0);
// Single-threaded reference of run_repetitions.
std::vector<RunRecord> run_repetitions_serial(const Bundle& bundle, const Method& method,
                                              const SearchConfig& config,
                                              int repetitions);

struct SummaryRow {
  int run_id = 0;
  std::string model;
  std::string method;
  std::uint64_t seed = 0;
  Status status = Status::kNoFaultFound;
  double fitness = 0.0;
  int iterations = 0;
  double elapsed_ms = 0.0;
  std::vector<double> values;

  // Equality without elapsed_ms.
  bool same_result(const SummaryRow& other) const;
};

SummaryRow summary_row(const RunRecord& record);
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const SummaryRow& row);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);
// kIoError on a malformed file.
std::vector<SummaryRow> read_summary(std::istream& in);

struct MethodSummary {
  std::string model;
  std::string method;
  int runs = 0;
  int failures = 0;
  double rate = 0.0;                      // failures / runs
  std::optional<double> mean_iterations;  // over failure-revealing runs
  double mean_elapsed_ms = 0.0;
};

MethodSummary summarize(const std::vector<SummaryRow>& rows);

// One summary per method, in order of first appearance. kInvalidArgument
// unless all rows share one model and at least two methods are present.
std::vector<MethodSummary> compare(const std::vector<SummaryRow>& rows);
// CSV `model,method,runs,failures,rate,mean_iterations,mean_elapsed_ms`.
void write_comparison(std::ostream& out, const std::vector<MethodSummary>& table);

struct ConsistencySample {
  Outcome3 assessment = Outcome3::kUntested;
  double fitness = 0.0;
  double robustness = 0.0;
  bool agree = true;
  bool boundary = false;  // |robustness| <= 1e-9, excluded from the check
};

struct ConsistencyReport {
  std::vector<ConsistencySample> samples;
  int compared = 0;
  int mismatches = 0;
};

// Simulates `samples` profile-sampled inputs (sample i drawn with seed + i)
// and compares the assessment's overall Fail with a negative STL robustness.
ConsistencyReport oracle_consistency(const Bundle& bundle, int samples,
                                     std::uint64_t seed, bool parallel = true);

}  // namespace tbf

#endif  // TBF_EXPERIMENT_H_
