// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sibmatch/error.h"

#include <utility>

namespace sibmatch {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
      return "VALIDATION_ERROR";
    case ErrorCode::kPairNotFeasible:
      return "PAIR_NOT_FEASIBLE";
    case ErrorCode::kInvalidMatching:
      return "INVALID_MATCHING";
    case ErrorCode::kInconsistentZ:
      return "INCONSISTENT_Z";
    case ErrorCode::kSearchTooLarge:
      return "SEARCH_TOO_LARGE";
    case ErrorCode::kModelTooLarge:
      return "MODEL_TOO_LARGE";
    case ErrorCode::kAssumptionViolation:
      return "ASSUMPTION_VIOLATION";
    case ErrorCode::kInfeasibleInput:
      return "INFEASIBLE_INPUT";
    case ErrorCode::kInfeasibleImport:
      return "INFEASIBLE_IMPORT";
    case ErrorCode::kIoError:
      return "IO_ERROR";
    case ErrorCode::kUnknownFixture:
      return "UNKNOWN_FIXTURE";
  }
  return "UNKNOWN";
}

namespace {

std::string Compose(ErrorCode code, const std::string& message,
                    const std::vector<std::string>& details) {
  std::string out = std::string(ErrorCodeName(code)) + ": " + message;
  for (const auto& d : details) out += "\n  " + d;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::vector<std::string> details)
    : std::runtime_error(Compose(code, message, details)),
      code_(code),
      details_(std::move(details)) {}

}  // namespace sibmatch
