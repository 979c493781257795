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

#ifndef CRISP_CRITIC_INSTRUMENTED_HPP_
#define CRISP_CRITIC_INSTRUMENTED_HPP_

#include <map>
#include <string>
#include <vector>

#include "crisp/critic/types.hpp"

namespace crisp::critic {

struct UsageStats {
  int requests = 0;
  int images = 0;
  std::map<std::string, int> requests_per_role;
  std::map<std::string, int> images_per_role;
};

// Pass-through wrapper that tallies traffic, for the run reports that track
// how much the critic was consulted.
class InstrumentedBackend : public CriticBackend {
 public:
  explicit InstrumentedBackend(CriticBackend& inner) : inner_(inner) {}

  StructuredReply complete(const CriticRequest& request) override {
    stats_.requests += 1;
    stats_.images += static_cast<int>(request.images.size());
    stats_.requests_per_role[role_name(request.role)] += 1;
    stats_.images_per_role[role_name(request.role)] +=
        static_cast<int>(request.images.size());
    return inner_.complete(request);
  }

  std::string name() const override { return inner_.name(); }

  const UsageStats& stats() const { return stats_; }
  void reset() { stats_ = {}; }

 private:
  CriticBackend& inner_;
  UsageStats stats_;
};

}  // namespace crisp::critic

#endif  // CRISP_CRITIC_INSTRUMENTED_HPP_
