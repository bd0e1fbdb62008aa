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

#include "tbf/error.h"

namespace tbf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSignal: return "UnknownSignal";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateStepName: return "DuplicateStepName";
    case ErrorCode::kUndeclaredIdentifier: return "UndeclaredIdentifier";
    case ErrorCode::kTypeError: return "TypeError";
    case ErrorCode::kNoActiveChild: return "NoActiveChild";
    case ErrorCode::kUnknownStep: return "UnknownStep";
    case ErrorCode::kEvalError: return "EvalError";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kSignalMismatch: return "SignalMismatch";
    case ErrorCode::kNumericError: return "NumericError";
    case ErrorCode::kNoParameters: return "NoParameters";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kIntervalOutOfRange: return "IntervalOutOfRange";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, int line,
                     int column) {
  std::string out(error_code_name(code));
  if (line > 0) {
    out += " at " + std::to_string(line) + ":" + std::to_string(column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, int line, int column)
    : std::runtime_error(decorate(code, message, line, column)),
      code_(code),
      line_(line),
      column_(column) {}

}  // namespace tbf
