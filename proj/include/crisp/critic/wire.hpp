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

#ifndef CRISP_CRITIC_WIRE_HPP_
#define CRISP_CRITIC_WIRE_HPP_

#include <string>

#include "crisp/critic/types.hpp"
#include "json.hpp"

namespace crisp::critic {

// Parses raw critic text (optionally fenced) against the expected schema.
// Throws SchemaViolationError listing every problem found.
StructuredReply parse_reply(ReplySchema schema, const std::string& raw);

nlohmann::json reply_to_json(const StructuredReply& reply);

nlohmann::json command_to_json(const pipeline::JointCommand& command);
pipeline::JointCommand command_from_json(const nlohmann::json& value,
                                         std::vector<std::string>& issues);

// Stable 64-bit FNV-1a over the request's identity: role, schema, text
// sections, image labels. Pixel payloads are excluded so a re-render with
// identical captions matches. Returned as 16 lowercase hex digits.
std::string request_hash(const CriticRequest& request);

// Drops a leading ``` fence (with optional language tag) and its closing
// fence, plus surrounding whitespace.
std::string strip_code_fences(const std::string& text);

// One-line JSON shape contract for prompts and corrective reprompts.
const char* schema_contract(ReplySchema schema);

std::string base64_encode(const std::vector<uint8_t>& bytes);

}  // namespace crisp::critic

#endif  // CRISP_CRITIC_WIRE_HPP_
