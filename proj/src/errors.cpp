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

#include "crisp/errors.hpp"

namespace crisp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedXml:
      return "MalformedXml";
    case ErrorKind::kUnsupportedJoint:
      return "UnsupportedJoint";
    case ErrorKind::kMissingRange:
      return "MissingRange";
    case ErrorKind::kDuplicateName:
      return "DuplicateName";
    case ErrorKind::kUnknownJoint:
      return "UnknownJoint";
    case ErrorKind::kPoseLengthMismatch:
      return "PoseLengthMismatch";
    case ErrorKind::kEmptyPlan:
      return "EmptyPlan";
    case ErrorKind::kTransport:
      return "Transport";
    case ErrorKind::kSchemaViolation:
      return "SchemaViolation";
    case ErrorKind::kScriptExhausted:
      return "ScriptExhausted";
    case ErrorKind::kOracleUnsupportedRole:
      return "OracleUnsupportedRole";
    case ErrorKind::kModelMismatch:
      return "ModelMismatch";
    case ErrorKind::kCapabilityMismatch:
      return "CapabilityMismatch";
    case ErrorKind::kNoCandidateJoints:
      return "NoCandidateJoints";
    case ErrorKind::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorKind::kInvalidProposal:
      return "InvalidProposal";
    case ErrorKind::kDegenerateRange:
      return "DegenerateRange";
    case ErrorKind::kScorerFailure:
      return "ScorerFailure";
    case ErrorKind::kInvalidConfig:
      return "InvalidConfig";
    case ErrorKind::kIo:
      return "Io";
    case ErrorKind::kSchemaVersionMismatch:
      return "SchemaVersionMismatch";
    case ErrorKind::kNonMonotonicIteration:
      return "NonMonotonicIteration";
  }
  return "UnknownError";
}

}  // namespace crisp
