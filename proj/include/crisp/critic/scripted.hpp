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

#ifndef CRISP_CRITIC_SCRIPTED_HPP_
#define CRISP_CRITIC_SCRIPTED_HPP_

#include <deque>
#include <map>
#include <string>

#include "crisp/critic/types.hpp"
#include "json.hpp"

namespace crisp::critic {

// Replays canned replies from a JSONL script. Each line is an object with
// "role", "reply", and optionally "request_hash". A request first consumes
// the oldest entry whose hash matches exactly, then falls back to the
// oldest hash-free entry for its role. Running dry raises ScriptExhausted,
// so fixtures also pin how many calls a flow makes.
class ScriptedBackend : public CriticBackend {
 public:
  static ScriptedBackend from_file(const std::string& path);
  static ScriptedBackend from_text(const std::string& jsonl);

  StructuredReply complete(const CriticRequest& request) override;
  std::string name() const override { return "scripted"; }

  size_t replies_remaining() const;

 private:
  struct Entry {
    nlohmann::json reply;
  };

  // Keyed by role name; exact entries additionally keyed by request hash.
  std::map<std::string, std::map<std::string, std::deque<Entry>>> exact_;
  std::map<std::string, std::deque<Entry>> wildcard_;
};

}  // namespace crisp::critic

#endif  // CRISP_CRITIC_SCRIPTED_HPP_
