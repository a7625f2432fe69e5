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

#ifndef SIBMATCH_ERROR_H_
#define SIBMATCH_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace sibmatch {

enum class ErrorCode {
  kValidation,
  kPairNotFeasible,
  kInvalidMatching,
  kInconsistentZ,
  kSearchTooLarge,
  kModelTooLarge,
  kAssumptionViolation,
  kInfeasibleInput,
  kInfeasibleImport,
  kIoError,
  kUnknownFixture,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {});

  ErrorCode code() const { return code_; }
  // Per-field diagnostics (validation) or offending rows (imports).
  const std::vector<std::string>& details() const { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace sibmatch

#endif  // SIBMATCH_ERROR_H_
