// Copyright 2026 The maxsive Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAXSIVE_ERROR_H_
#define MAXSIVE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace maxsive {

enum class ErrorCode {
  kInvalidInput,
  kSymmetryViolation,
  kUnsupportedShape,
  kShape,
  kDegenerateInput,
  kConfig,
  kContract,
  kGeometryDegeneracy,
  kInjection,
  kNoTemplate,
  kParse,
  kCalibrationPrecision,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; the code
// lets callers branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kSymmetryViolation: return "symmetry violation";
    case ErrorCode::kUnsupportedShape: return "unsupported shape";
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kDegenerateInput: return "degenerate input";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kContract: return "contract error";
    case ErrorCode::kGeometryDegeneracy: return "geometry degeneracy";
    case ErrorCode::kInjection: return "injection error";
    case ErrorCode::kNoTemplate: return "no template";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kCalibrationPrecision: return "calibration precision";
    case ErrorCode::kIo: return "io error";
  }
  return "error";
}

}  // namespace maxsive

#endif  // MAXSIVE_ERROR_H_
