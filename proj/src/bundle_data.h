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

// Table of model artifacts; the definition is generated at build time.

#ifndef TBF_SRC_BUNDLE_DATA_H_
#define TBF_SRC_BUNDLE_DATA_H_

#include <span>
#include <string_view>

namespace tbf::detail {

struct EmbeddedFile {
  std::string_view model;
  std::string_view file;
  std::string_view text;
};

std::span<const EmbeddedFile> embedded_files();

}  // namespace tbf::detail

#endif  // TBF_SRC_BUNDLE_DATA_H_
