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

#include "tbf/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tbf/error.h"

namespace tbf {

namespace fs = std::filesystem;

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.string();
}

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::kInvalidArgument, where + ": unknown key '" + key + "'");
    }
  }
}

void read_search(const json& j, SearchConfig& s) {
  reject_unknown(j,
                 {"max_iterations", "seed", "algorithm", "budget_seconds",
                  "temperature_scale", "cooling", "stddev_fraction"},
                 "search");
  s.max_iterations = j.value("max_iterations", s.max_iterations);
  s.seed = j.value("seed", s.seed);
  if (j.contains("algorithm")) {
    s.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  }
  if (j.contains("budget_seconds")) s.budget_seconds = j.at("budget_seconds").get<double>();
  s.temperature_scale = j.value("temperature_scale", s.temperature_scale);
  s.cooling = j.value("cooling", s.cooling);
  s.stddev_fraction = j.value("stddev_fraction", s.stddev_fraction);
}

}  // namespace

void RunConfig::check() const {
  if (model.empty()) throw Error(ErrorCode::kInvalidArgument, "config: no model");
  model_spec(model);
  if (repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "config: repetitions must be >= 1");
  }
  if (jobs < 0) throw Error(ErrorCode::kInvalidArgument, "config: jobs must be >= 0");
  search.check();
  for (const auto* p : {&sequence, &assessment, &formula}) {
    if (*p && !fs::exists(**p)) throw Error(ErrorCode::kIoError, "no such file: " + **p);
  }
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  RunConfig c;
  try {
    json j = json::parse(json_text);
    reject_unknown(j,
                   {"model", "fault", "sequence", "assessment", "stl", "use_stl", "search",
                    "repetitions", "jobs", "output_dir"},
                   "config");
    c.model = j.value("model", std::string());
    c.fault = j.value("fault", false);
    if (j.contains("sequence")) c.sequence = resolve(base_dir, j.at("sequence"));
    if (j.contains("assessment")) c.assessment = resolve(base_dir, j.at("assessment"));
    if (j.contains("stl")) {
      const json& stl = j.at("stl");
      reject_unknown(stl, {"formula", "profile"}, "stl");
      if (stl.contains("formula")) c.formula = resolve(base_dir, stl.at("formula"));
      if (stl.contains("profile")) {
        const json& p = stl.at("profile");
        c.profile = parse_profile(p.is_string()
                                      ? read_file(resolve(base_dir, p.get<std::string>()))
                                      : p.dump());
      }
    }
    c.use_stl = j.value("use_stl", false);
    if (j.contains("search")) read_search(j.at("search"), c.search);
    c.repetitions = j.value("repetitions", 1);
    c.jobs = j.value("jobs", 0);
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  c.check();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_file(path), fs::path(path).parent_path());
}

Bundle resolve_bundle(const RunConfig& config) {
  Bundle b = load_bundle(config.model, config.fault);
  if (config.sequence) b.pseq = load_block(*config.sequence);
  if (config.assessment) b.assessment = load_block(*config.assessment);
  if (config.formula) b.formula = load_stl(*config.formula);
  if (config.profile) b.profile = *config.profile;
  return b;
}

}  // namespace tbf
