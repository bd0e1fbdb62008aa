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

// Artifacts shipped with each built-in model (sources under models/<name>/,
// compiled into the library).

#ifndef TBF_BUNDLE_H_
#define TBF_BUNDLE_H_

#include <string>
#include <string_view>
#include <vector>

#include "tbf/sim.h"
#include "tbf/stl.h"
#include "tbf/testlang.h"

namespace tbf {

// File names inside a bundle.
inline constexpr std::string_view kSequenceFile = "sequence.tseq";
inline constexpr std::string_view kParamSequenceFile = "param.tseq";
inline constexpr std::string_view kAssessmentFile = "assessment.tassess";
inline constexpr std::string_view kStlFile = "requirement.stl";
inline constexpr std::string_view kProfileFile = "profile.json";

// Embedded source text; kInvalidArgument if absent.
std::string_view bundle_text(std::string_view model, std::string_view file);

struct Bundle {
  ModelSpec model;
  TestBlock sequence;    // default, parameter-free
  TestBlock pseq;        // parameterized
  TestBlock assessment;
  StlFormula formula;
  InputProfile profile;
};

Bundle load_bundle(std::string_view name, bool fault_enabled = false);

}  // namespace tbf

#endif  // TBF_BUNDLE_H_
