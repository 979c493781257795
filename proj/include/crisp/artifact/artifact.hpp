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

#ifndef CRISP_ARTIFACT_ARTIFACT_HPP_
#define CRISP_ARTIFACT_ARTIFACT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crisp/critic/types.hpp"
#include "crisp/pipeline/types.hpp"
#include "crisp/ras/search.hpp"

namespace crisp::artifact {

// Bumped on any change to the serialized layout; readers reject every other
// version with SchemaVersionMismatch.
inline constexpr int kSchemaVersion = 1;

// accepted requires that the last critique passed.
enum class ArtifactStatus { kInProgress, kAccepted, kAbandoned };

const char* to_string(ArtifactStatus status);

struct Critique {
  bool pass = false;
  std::string text;
};

// Summary of one proposal's value refinement. Deletes have no scalar to
// search; they keep searched false and the numeric fields at zero.
struct ProposalOutcome {
  ras::RefinementStatus status = ras::RefinementStatus::kSuccess;
  bool searched = false;
  double v_final = 0.0;
  int reward_final = 0;
  int iterations_used = 0;
};

// Candidate history for one refined step. Iteration numbers run 0, 1, 2, ...
// without gaps; records are append-only.
struct StepLog {
  int step_index = 1;
  std::vector<ras::CandidateSet> records;
  std::vector<std::string> blacklist;  // joints retired on joint_failure
};

// Appends record and returns the log. record.iteration must be one past the
// last record (0 for an empty log), else NonMonotonicIteration. Existing
// records are never touched.
StepLog& append_step_record(StepLog& log, const ras::CandidateSet& record);

// Everything one behavior run produced: the plan, the commands, every
// critique, every repair proposal with its refinement outcome, and the
// per-step candidate history. proposals and outcomes stay index-aligned.
struct BehaviorArtifact {
  std::string context;
  std::string model_name;
  std::string model_hash;  // content_hash of the robot description bytes
  pipeline::BehaviorPlan plan;
  pipeline::CommandSequence sequence;
  std::vector<Critique> critiques;               // oldest first
  std::vector<critic::ProposalReply> proposals;  // oldest first
  std::vector<ProposalOutcome> outcomes;
  std::vector<StepLog> step_logs;  // one per searched proposal, in order
  ArtifactStatus status = ArtifactStatus::kInProgress;
  ras::RasConfig config;
  std::uint64_t seed = 0;  // master seed for the whole run
};

// FNV-1a 64 over the raw bytes, rendered as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

// Canonical JSON: sorted keys, two-space indent, LF newlines, floats through
// format_double. Identical artifacts serialize to identical bytes and
// serialize(parse(text)) == text on canonical input. Refuses artifacts that
// break the alignment or acceptance invariants.
std::string serialize_artifact(const BehaviorArtifact& artifact);

// Inverse of serialize_artifact. Throws SchemaVersionMismatch when the file
// declares a different schema_version, Io on anything malformed.
BehaviorArtifact parse_artifact(const std::string& text);

// Writes bytes to a sibling temp file and renames it into place, so a reader
// never observes a partial artifact. Creates missing parent directories.
void write_artifact(const BehaviorArtifact& artifact,
                    const std::filesystem::path& path);

BehaviorArtifact read_artifact(const std::filesystem::path& path);

}  // namespace crisp::artifact

#endif  // CRISP_ARTIFACT_ARTIFACT_HPP_
