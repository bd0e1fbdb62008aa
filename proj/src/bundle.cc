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

#include "tbf/bundle.h"

#include "bundle_data.h"
#include "tbf/error.h"

namespace tbf {

std::string_view bundle_text(std::string_view model, std::string_view file) {
  for (const detail::EmbeddedFile& f : detail::embedded_files()) {
    if (f.model == model && f.file == file) return f.text;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "no bundled " + std::string(file) + " for model '" + std::string(model) + "'");
}

Bundle load_bundle(std::string_view name, bool fault_enabled) {
  Bundle b;
  b.model = model_spec(name, fault_enabled);
  b.sequence = parse_block(bundle_text(name, kSequenceFile));
  b.pseq = parse_block(bundle_text(name, kParamSequenceFile));
  b.assessment = parse_block(bundle_text(name, kAssessmentFile));
  b.formula = parse_stl(bundle_text(name, kStlFile));
  b.profile = parse_profile(bundle_text(name, kProfileFile));
  return b;
}

}  // namespace tbf
