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

// tbf: check artifacts, simulate, falsify, compare and report.
//
// Exit status: 0 ok, 1 validation or usage error, 2 runtime error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbf/bundle.h"
#include "tbf/config.h"
#include "tbf/error.h"
#include "tbf/experiment.h"
#include "tbf/search.h"
#include "tbf/sim.h"
#include "tbf/stl.h"
#include "tbf/testlang.h"

namespace fs = std::filesystem;
using namespace tbf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
    case ErrorCode::kNumericError:
    case ErrorCode::kEvalError:
    case ErrorCode::kNoActiveChild:
    case ErrorCode::kUnknownStep:
    case ErrorCode::kIndexOutOfRange:
      return kExitRuntime;
    default:
      return kExitInvalid;
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  return out;
}

// ---- check ----------------------------------------------------------------

struct CheckArgs {
  std::vector<std::string> files;
  std::string model;
  std::string bundle;
  bool fault = false;
};

int cmd_check(const CheckArgs& a) {
  int problems = 0;
  auto report = [&](const std::string& where, const std::string& what) {
    std::cout << where << ": " << what << '\n';
    ++problems;
  };
  std::optional<ModelSpec> model;
  if (!a.model.empty()) model = model_spec(a.model, a.fault);

  auto check_block = [&](const std::string& where, const TestBlock& b) {
    for (const Diagnostic& d : validate(b)) report(where, to_string(d));
    if (!model) return;
    try {
      if (b.kind == BlockKind::kSequence) {
        check_interface(*model, b);
      } else {
        check_assessment(*model, b);
      }
    } catch (const Error& e) {
      report(where, e.what());
    }
  };

  if (!a.bundle.empty()) {
    for (std::string_view f : {kSequenceFile, kParamSequenceFile, kAssessmentFile}) {
      const std::string where = a.bundle + "/" + std::string(f);
      try {
        TestBlock b = parse_block(bundle_text(a.bundle, f));
        if (!model) model = model_spec(a.bundle, a.fault);
        check_block(where, b);
      } catch (const Error& e) {
        report(where, e.what());
      }
    }
    try {
      Bundle b = load_bundle(a.bundle, a.fault);
      if (horizon_samples(*b.formula.root, b.model.dt) > b.model.grid().n_samples() - 1) {
        report(a.bundle + "/" + std::string(kStlFile), "formula horizon exceeds the run");
      }
    } catch (const Error& e) {
      report(a.bundle, e.what());
    }
  }

  for (const std::string& path : a.files) {
    try {
      const std::string ext = fs::path(path).extension().string();
      if (ext == ".stl") {
        load_stl(path);
      } else if (ext == ".json") {
        const std::string text = read_text(path);
        if (text.find("\"signals\"") != std::string::npos &&
            text.find("\"model\"") == std::string::npos) {
          parse_profile(text);
        } else {
          RunConfig c = parse_run_config(text, fs::path(path).parent_path());
          resolve_bundle(c);
        }
      } else {
        check_block(path, load_block(path));
      }
    } catch (const Error& e) {
      report(path, e.what());
    }
  }
  if (problems == 0) std::cout << "ok\n";
  return problems == 0 ? kExitOk : kExitInvalid;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  bool fault = false;
  std::string sequence;
  std::string assessment;
  std::string inputs;
  std::string stl;
  std::vector<std::string> params;
  std::string trace_out;
  std::string channels_out;
  std::string debug_out;
  bool no_assessment = false;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "expected NAME=VALUE, got '" + item + "'");
    }
    out[item.substr(0, eq)] = parse_double(item.substr(eq + 1));
  }
  return out;
}

int cmd_simulate(const SimulateArgs& a) {
  Bundle b = load_bundle(a.model, a.fault);
  TestBlock seq = a.sequence.empty() ? b.sequence : load_block(a.sequence);
  TestBlock assess = a.assessment.empty() ? b.assessment : load_block(a.assessment);
  for (const TestBlock* blk : {&seq, &assess}) {
    std::vector<Diagnostic> d = validate(*blk);
    if (!d.empty()) throw Error(ErrorCode::kValidationFailed, blk->name + ": " + to_string(d[0]));
  }

  SimOptions options;
  if (!a.no_assessment) options.assessment = compile(assess);
  std::ofstream debug_file;
  if (!a.debug_out.empty()) {
    if (a.debug_out == "-") {
      options.debug = &std::cout;
    } else {
      debug_file = open_out(a.debug_out);
      options.debug = &debug_file;
    }
  }
  SimResult r = a.inputs.empty()
                    ? simulate(b.model, seq, parse_params(a.params), options)
                    : simulate_inputs(b.model, load_trace(a.inputs), options);
  const Trace io = Trace::merge(r.inputs, r.outputs);
  if (!a.trace_out.empty()) save_trace(a.trace_out, io);
  if (!a.channels_out.empty() && r.monitor) {
    std::ofstream out = open_out(a.channels_out);
    r.monitor->write_channels(out);
  }

  std::cout << "model " << b.model.name << (b.model.fault_enabled ? " (fault)" : "")
            << ", " << io.grid().n_samples() << " samples"
            << (r.truncated ? ", stopped by assert" : "") << '\n';
  if (r.verdict) {
    const CompiledAssessment& c = r.monitor->compiled();
    for (std::size_t i = 0; i < c.channels.size(); ++i) {
      std::cout << "  " << std::left << std::setw(16) << c.channels[i].id
                << outcome_name(r.verdict->statements[i]) << '\n';
    }
    std::cout << "verdict " << outcome_name(r.verdict->overall) << ", fitness "
              << format_double(r.verdict->final_fitness) << '\n';
  }
  if (!a.stl.empty()) {
    StlVerdictReport s = stl_robustness(load_stl(a.stl), io);
    std::cout << "stl robustness " << format_double(s.robustness) << " ("
              << (s.verdict ? "satisfied" : "violated") << ")\n";
  }
  return kExitOk;
}

// ---- falsify ---------------------------------------------------------------

struct FalsifyArgs {
  std::string config;
  std::string model;
  bool fault = false;
  std::string sequence;
  std::string assessment;
  std::string formula;
  std::string profile;
  bool stl = false;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::optional<int> iters;
  std::optional<int> reps;
  std::optional<int> jobs;
  std::optional<double> budget;
  std::string out;
};

RunConfig falsify_config(const FalsifyArgs& a) {
  RunConfig c = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (!a.model.empty()) c.model = a.model;
  if (a.fault) c.fault = true;
  if (!a.sequence.empty()) c.sequence = a.sequence;
  if (!a.assessment.empty()) c.assessment = a.assessment;
  if (!a.formula.empty()) c.formula = a.formula;
  if (!a.profile.empty()) c.profile = parse_profile(read_text(a.profile));
  if (a.stl) c.use_stl = true;
  if (!a.algorithm.empty()) c.search.algorithm = parse_algorithm(a.algorithm);
  if (a.seed) c.search.seed = *a.seed;
  if (a.iters) c.search.max_iterations = *a.iters;
  if (a.reps) c.repetitions = *a.reps;
  if (a.jobs) c.jobs = *a.jobs;
  if (a.budget) c.search.budget_seconds = *a.budget;
  if (!a.out.empty()) c.output_dir = a.out;
  c.check();
  return c;
}

int cmd_falsify(const FalsifyArgs& a) {
  const RunConfig c = falsify_config(a);
  const Bundle b = resolve_bundle(c);
  const Method method{c.use_stl ? Driver::kStl : Driver::kAssessment, c.search.algorithm};
  // Fail fast on artifact problems before any run starts.
  const SearchSpace space = c.use_stl ? profile_space(b.profile) : extract_space(b.pseq);
  if (!c.use_stl) {
    for (const TestBlock* blk : {&b.pseq, &b.assessment}) {
      std::vector<Diagnostic> d = validate(*blk);
      if (!d.empty()) {
        throw Error(ErrorCode::kValidationFailed, blk->name + ": " + to_string(d[0]));
      }
    }
    check_interface(b.model, b.pseq);
    check_assessment(b.model, b.assessment);
  }

  const std::vector<RunRecord> records =
      run_repetitions(b, method, c.search, c.repetitions, c.jobs);

  fs::create_directories(c.output_dir);
  const std::string tag = b.model.name + "_" + method_name(method);
  std::vector<SummaryRow> rows;
  for (const RunRecord& r : records) {
    rows.push_back(summary_row(r));
    std::ofstream h = open_out(
        (fs::path(c.output_dir) / (tag + "_history_" + std::to_string(r.run_id) + ".csv"))
            .string());
    write_history(h, space, r.outcome);
  }
  const std::string summary_path = (fs::path(c.output_dir) / (tag + "_summary.csv")).string();
  {
    std::ofstream s = open_out(summary_path);
    write_summary(s, rows);
  }

  const MethodSummary m = summarize(rows);
  std::cout << b.model.name << " " << m.method << ": " << m.failures << "/" << m.runs
            << " failure-revealing";
  if (m.mean_iterations) std::cout << ", mean iterations " << format_double(*m.mean_iterations);
  std::cout << '\n';
  for (const RunRecord& r : records) {
    if (r.outcome.status != Status::kFailureRevealing) continue;
    std::cout << "  run " << r.run_id << " TC at iteration " << r.outcome.iterations
              << ", fitness " << format_double(r.outcome.fitness) << ":";
    for (std::size_t i = 0; i < space.params.size(); ++i) {
      std::cout << ' ' << space.params[i].name << '=' << format_double(r.outcome.values[i]);
    }
    std::cout << '\n';
  }
  std::cout << "summary written to " << summary_path << '\n';
  return kExitOk;
}

// ---- compare / report -------------------------------------------------------

std::vector<SummaryRow> read_summaries(const std::vector<std::string>& paths) {
  std::vector<SummaryRow> rows;
  for (const std::string& p : paths) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p);
    std::vector<SummaryRow> r = read_summary(in);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return rows;
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& out) {
  const std::vector<MethodSummary> table = compare(read_summaries(paths));
  if (out.empty()) {
    write_comparison(std::cout, table);
  } else {
    std::ofstream f = open_out(out);
    write_comparison(f, table);
    std::cout << "comparison written to " << out << '\n';
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& paths) {
  const std::vector<SummaryRow> rows = read_summaries(paths);
  std::map<std::pair<std::string, std::string>, std::vector<SummaryRow>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (const SummaryRow& r : rows) {
    auto key = std::make_pair(r.model, r.method);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r);
  }
  std::cout << std::left << std::setw(12) << "model" << std::setw(14) << "method"
            << std::setw(8) << "runs" << std::setw(8) << "TC" << std::setw(8) << "rate"
            << std::setw(12) << "mean_iter" << "mean_ms\n";
  for (const auto& key : order) {
    const MethodSummary s = summarize(groups[key]);
    std::ostringstream rate, iters, ms;
    rate << std::fixed << std::setprecision(2) << s.rate;
    if (s.mean_iterations) {
      iters << std::fixed << std::setprecision(1) << *s.mean_iterations;
    } else {
      iters << "NA";
    }
    ms << std::fixed << std::setprecision(1) << s.mean_elapsed_ms;
    std::cout << std::setw(12) << s.model << std::setw(14) << s.method << std::setw(8)
              << s.runs << std::setw(8) << s.failures << std::setw(8) << rate.str()
              << std::setw(12) << iters.str() << ms.str() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test-block driven falsification of built-in models"};
  app.require_subcommand(1);

  CheckArgs check;
  CLI::App* c = app.add_subcommand("check", "Parse and validate artifacts");
  c->add_option("files", check.files, "Sequence, assessment, STL, profile or config files");
  c->add_option("--model", check.model, "Check interfaces against this model");
  c->add_option("--bundle", check.bundle, "Check a built-in bundle");
  c->add_flag("--fault", check.fault, "Use the seeded-fault variant");

  SimulateArgs sim;
  CLI::App* s = app.add_subcommand("simulate", "Run one simulation");
  s->add_option("--model", sim.model, "Model name")->required();
  s->add_flag("--fault", sim.fault, "Enable the seeded fault");
  s->add_option("--sequence", sim.sequence, "Test sequence (default: built-in)");
  s->add_option("--assessment", sim.assessment, "Test assessment (default: built-in)");
  s->add_flag("--no-assessment", sim.no_assessment, "Skip the assessment");
  s->add_option("--inputs", sim.inputs, "Replay an input trace instead of a sequence");
  s->add_option("-p,--param", sim.params, "Parameter value NAME=VALUE");
  s->add_option("--stl", sim.stl, "Also report the robustness of this formula");
  s->add_option("--trace", sim.trace_out, "Write the I/O trace");
  s->add_option("--channels", sim.channels_out, "Write the fitness channels");
  s->add_option("--debug", sim.debug_out, "Per-tick step log ('-' for stdout)");

  FalsifyArgs fal;
  CLI::App* f = app.add_subcommand("falsify", "Search for a failure-revealing test");
  f->add_option("--config", fal.config, "JSON run configuration");
  f->add_option("--model", fal.model, "Model name");
  f->add_flag("--fault", fal.fault, "Enable the seeded fault");
  f->add_option("--sequence", fal.sequence, "Parameterized test sequence");
  f->add_option("--assessment", fal.assessment, "Test assessment");
  f->add_option("--formula", fal.formula, "STL requirement (with --stl)");
  f->add_option("--profile", fal.profile, "Input profile JSON (with --stl)");
  f->add_flag("--stl", fal.stl, "Search input profiles against the STL requirement");
  f->add_option("--algorithm", fal.algorithm, "simulated_annealing | uniform_random");
  f->add_option("--seed", fal.seed, "Base seed; run i uses seed + i");
  f->add_option("--iters", fal.iters, "Iterations per run");
  f->add_option("--reps", fal.reps, "Repetitions");
  f->add_option("--jobs", fal.jobs, "Worker threads (0: all cores)");
  f->add_option("--budget", fal.budget, "Wall-clock budget per run, seconds");
  f->add_option("--out", fal.out, "Output directory");

  std::vector<std::string> cmp_files;
  std::string cmp_out;
  CLI::App* cm = app.add_subcommand("compare", "Compare methods from summary CSVs");
  cm->add_option("summaries", cmp_files, "Summary CSV files")->required();
  cm->add_option("--out", cmp_out, "Write the table to this file");

  std::vector<std::string> rep_files;
  CLI::App* rp = app.add_subcommand("report", "Tabulate summary CSVs");
  rp->add_option("summaries", rep_files, "Summary CSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*c) return cmd_check(check);
    if (*s) return cmd_simulate(sim);
    if (*f) return cmd_falsify(fal);
    if (*cm) return cmd_compare(cmp_files, cmp_out);
    if (*rp) return cmd_report(rep_files);
  } catch (const Error& e) {
    std::cerr << "tbf: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "tbf: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
