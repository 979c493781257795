// Copyright 2026 The crisp Authors
//
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

#ifndef CRISP_ERRORS_HPP_
#define CRISP_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace crisp {

// Every failure mode in the library maps to exactly one kind, so callers can
// branch on kind() instead of parsing messages.
enum class ErrorKind {
  // Robot description parsing.
  kMalformedXml,
  kUnsupportedJoint,
  kMissingRange,
  kDuplicateName,
  kUnknownJoint,
  // Kinematics and trajectories.
  kPoseLengthMismatch,
  kEmptyPlan,
  // Critic transport.
  kTransport,
  kSchemaViolation,
  kScriptExhausted,
  kOracleUnsupportedRole,
  kModelMismatch,
  // Behavior pipeline.
  kCapabilityMismatch,
  kNoCandidateJoints,
  kIndexOutOfRange,
  kInvalidProposal,
  // Adaptive search.
  kDegenerateRange,
  kScorerFailure,
  kInvalidConfig,
  // Artifact persistence.
  kIo,
  kSchemaVersionMismatch,
  kNonMonotonicIteration,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Schema violations keep the individual findings and the raw backend
// replies so a caller can reprompt with specifics or log what failed.
class SchemaViolationError : public Error {
 public:
  SchemaViolationError(std::vector<std::string> issues,
                       std::vector<std::string> raw_replies = {})
      : Error(ErrorKind::kSchemaViolation, join(issues)),
        issues_(std::move(issues)),
        raw_replies_(std::move(raw_replies)) {}

  const std::vector<std::string>& issues() const { return issues_; }
  const std::vector<std::string>& raw_replies() const { return raw_replies_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const std::string& issue : issues) {
      if (!out.empty()) out += "; ";
      out += issue;
    }
    return out.empty() ? std::string("schema violation") : out;
  }

  std::vector<std::string> issues_;
  std::vector<std::string> raw_replies_;
};

}  // namespace crisp

#endif  // CRISP_ERRORS_HPP_
