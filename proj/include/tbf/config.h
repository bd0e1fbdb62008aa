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

// Run configuration for the command-line front end.
//
// JSON layout (every key optional except "model"):
//
//   {
//     "model": "pacemaker", "fault": true,
//     "sequence": "param.tseq", "assessment": "assessment.tassess",
//     "stl": {"formula": "requirement.stl", "profile": "profile.json"},
//     "use_stl": false,
//     "search": {"max_iterations": 300, "seed": 1,
//                "algorithm": "simulated_annealing", "budget_seconds": 60,
//                "temperature_scale": 1, "cooling": 0.97,
//                "stddev_fraction": 0.25},
//     "repetitions": 20, "jobs": 0, "output_dir": "out"
//   }
//
// Relative paths are resolved against the config file's directory. Missing
// artifacts fall back to the model's built-in bundle. "profile" may also be
// an inline profile object.

#ifndef TBF_CONFIG_H_
#define TBF_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tbf/bundle.h"
#include "tbf/search.h"

namespace tbf {

struct RunConfig {
  std::string model;
  bool fault = false;
  std::optional<std::string> sequence;  // parameterized sequence
  std::optional<std::string> assessment;
  std::optional<std::string> formula;
  std::optional<InputProfile> profile;
  bool use_stl = false;
  SearchConfig search;
  int repetitions = 1;
  int jobs = 0;
  std::string output_dir = ".";

  // kInvalidArgument on bad settings; kIoError for missing files.
  void check() const;
};

// kInvalidArgument on malformed JSON, unknown keys or bad settings; kIoError
// for missing artifact files.
RunConfig parse_run_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::string& path);

// Built-in bundle of config.model with the configured artifacts swapped in.
Bundle resolve_bundle(const RunConfig& config);

}  // namespace tbf

#endif  // TBF_CONFIG_H_
