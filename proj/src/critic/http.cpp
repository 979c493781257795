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

#include "crisp/critic/http.hpp"

#include <cstdlib>

#include "crisp/critic/wire.hpp"
#include "crisp/errors.hpp"
#include "crisp/kinesim/png.hpp"
#include "httplib.h"
#include "json.hpp"

namespace crisp::critic {
namespace {

using nlohmann::json;

std::string system_prompt(const CriticRequest& request) {
  std::string text = "You are the ";
  text += role_name(request.role);
  text += " in a robot behavior synthesis pipeline. Study the provided "
          "context and frames, then answer with a single JSON object and "
          "nothing else. Expected shape: ";
  text += schema_contract(request.schema);
  return text;
}

json user_content(const CriticRequest& request) {
  json content = json::array();
  for (const TextSection& section : request.sections) {
    content.push_back(
        {{"type", "text"}, {"text", "## " + section.title + "\n" + section.body}});
  }
  for (const kinesim::LabeledImage& image : request.images) {
    content.push_back({{"type", "text"}, {"text", "Frame: " + image.label}});
    std::string uri =
        "data:image/png;base64," + base64_encode(kinesim::encode_png(image.image));
    content.push_back(
        {{"type", "image_url"}, {"image_url", {{"url", uri}}}});
  }
  return content;
}

}  // namespace

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw Error(ErrorKind::kTransport, "http backend needs an endpoint");
  }
  if (config_.endpoint.rfind("https://", 0) == 0) {
    throw Error(ErrorKind::kTransport,
                "this build speaks plain http only; point the endpoint at a "
                "local gateway");
  }
  if (config_.api_key.empty()) {
    if (const char* key = std::getenv("CRISP_API_KEY")) config_.api_key = key;
  }
  if (config_.max_attempts < 1) config_.max_attempts = 1;
}

std::string HttpBackend::post_chat(const std::string& body) const {
  httplib::Client client(config_.endpoint);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  auto result = client.Post(config_.path, headers, body, "application/json");
  if (!result) {
    throw Error(ErrorKind::kTransport,
                "post to " + config_.endpoint + config_.path + " failed: " +
                    httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw Error(ErrorKind::kTransport,
                "critic endpoint returned status " +
                    std::to_string(result->status) + ": " + result->body);
  }
  return result->body;
}

StructuredReply HttpBackend::complete(const CriticRequest& request) {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", system_prompt(request)}});
  messages.push_back({{"role", "user"}, {"content", user_content(request)}});

  std::vector<std::string> raw_replies;
  std::vector<std::string> last_issues;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    json body = {{"model", config_.model},
                 {"temperature", config_.temperature},
                 {"messages", messages}};
    std::string response = post_chat(body.dump());

    json parsed = json::parse(response, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.contains("choices") ||
        !parsed["choices"].is_array() || parsed["choices"].empty() ||
        !parsed["choices"][0].contains("message") ||
        !parsed["choices"][0]["message"].contains("content") ||
        !parsed["choices"][0]["message"]["content"].is_string()) {
      throw Error(ErrorKind::kTransport,
                  "critic endpoint reply is not a chat completion");
    }
    std::string content =
        parsed["choices"][0]["message"]["content"].get<std::string>();
    raw_replies.push_back(content);

    try {
      return parse_reply(request.schema, content);
    } catch (const SchemaViolationError& violation) {
      last_issues = violation.issues();
      std::string complaint = "Your reply violated the expected schema: ";
      complaint += violation.what();
      complaint += ". Answer again with only a JSON object shaped like ";
      complaint += schema_contract(request.schema);
      messages.push_back({{"role", "assistant"}, {"content", content}});
      messages.push_back({{"role", "user"}, {"content", complaint}});
    }
  }
  if (last_issues.empty()) last_issues = {"schema violation"};
  last_issues.push_back("giving up after " +
                        std::to_string(config_.max_attempts) + " attempts");
  throw SchemaViolationError(last_issues, raw_replies);
}

}  // namespace crisp::critic
