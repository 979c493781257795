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

#ifndef CRISP_CRITIC_HTTP_HPP_
#define CRISP_CRITIC_HTTP_HPP_

#include <string>

#include "crisp/critic/types.hpp"

namespace crisp::critic {

struct HttpConfig {
  std::string endpoint;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  std::string api_key;   // empty reads the CRISP_API_KEY environment variable
  double temperature = 0.0;
  int max_attempts = 3;  // schema violations trigger corrective reprompts
  int timeout_seconds = 120;
};

// Chat-completions client. Sends the request sections as markdown-ish text
// blocks and the frames as base64 PNG data URIs, demands a JSON-only reply,
// and reprompts with the concrete violations when validation fails. After
// max_attempts the SchemaViolationError carries every raw reply.
class HttpBackend : public CriticBackend {
 public:
  explicit HttpBackend(HttpConfig config);

  StructuredReply complete(const CriticRequest& request) override;
  std::string name() const override { return "http"; }

  const HttpConfig& config() const { return config_; }

 private:
  std::string post_chat(const std::string& body) const;

  HttpConfig config_;
};

}  // namespace crisp::critic

#endif  // CRISP_CRITIC_HTTP_HPP_
