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

#include "crisp/critic/scripted.hpp"

#include <fstream>
#include <sstream>

#include "crisp/critic/wire.hpp"
#include "crisp/errors.hpp"

namespace crisp::critic {

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    throw Error(ErrorKind::kIo, "cannot open script " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return from_text(text.str());
}

ScriptedBackend ScriptedBackend::from_text(const std::string& jsonl) {
  ScriptedBackend backend;
  std::istringstream in(jsonl);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;

    nlohmann::json obj =
        nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("role") ||
        !obj["role"].is_string() || !obj.contains("reply")) {
      throw Error(ErrorKind::kIo,
                  "script line " + std::to_string(line_no) +
                      " needs {role, reply[, request_hash]}");
    }
    std::string role = obj["role"].get<std::string>();
    Entry entry{obj["reply"]};
    if (obj.contains("request_hash")) {
      if (!obj["request_hash"].is_string()) {
        throw Error(ErrorKind::kIo,
                    "script line " + std::to_string(line_no) +
                        ": request_hash must be a string");
      }
      backend.exact_[role][obj["request_hash"].get<std::string>()].push_back(
          std::move(entry));
    } else {
      backend.wildcard_[role].push_back(std::move(entry));
    }
  }
  return backend;
}

StructuredReply ScriptedBackend::complete(const CriticRequest& request) {
  std::string role = role_name(request.role);
  std::string hash = request_hash(request);

  nlohmann::json reply;
  bool found = false;
  auto by_role = exact_.find(role);
  if (by_role != exact_.end()) {
    auto by_hash = by_role->second.find(hash);
    if (by_hash != by_role->second.end() && !by_hash->second.empty()) {
      reply = std::move(by_hash->second.front().reply);
      by_hash->second.pop_front();
      found = true;
    }
  }
  if (!found) {
    auto queue = wildcard_.find(role);
    if (queue != wildcard_.end() && !queue->second.empty()) {
      reply = std::move(queue->second.front().reply);
      queue->second.pop_front();
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorKind::kScriptExhausted,
                "no scripted reply left for role " + role + " (request " +
                    hash + ")");
  }
  return parse_reply(request.schema, reply.dump());
}

size_t ScriptedBackend::replies_remaining() const {
  size_t count = 0;
  for (const auto& [role, by_hash] : exact_) {
    for (const auto& [hash, queue] : by_hash) count += queue.size();
  }
  for (const auto& [role, queue] : wildcard_) count += queue.size();
  return count;
}

}  // namespace crisp::critic
