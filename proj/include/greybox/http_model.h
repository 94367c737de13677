//
// Copyright 2026 The Greybox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Client for remote classifiers speaking a minimal JSON protocol:
//
//   POST <endpoint>  {"text": "..."}
//   200              {"labels": ["negative", "positive"], "scores": [0.1, 0.9]}
//
// Every failure surfaces as a QueryFailure subclass so that callers can tell
// "model unavailable" apart from "model not fooled".

#ifndef GREYBOX_HTTP_MODEL_H_
#define GREYBOX_HTTP_MODEL_H_

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "greybox/model.h"

namespace greybox {

inline constexpr char kBearerEnvVar[] = "GREYBOX_HTTP_BEARER";

struct HttpModelOptions {
  std::chrono::milliseconds timeout{5000};
  int max_in_flight = 4;
  // Expected labels. When empty they are adopted from the first response.
  std::vector<std::string> labels;
  // Defaults to the GREYBOX_HTTP_BEARER environment variable.
  std::optional<std::string> bearer_token;
  // Defaults to the endpoint URL.
  std::string name;
};

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

// Only plain http:// URLs. Throws InvalidArgumentError.
ParsedUrl ParseHttpUrl(std::string_view url);

std::string EncodeClassifyRequest(std::string_view text);
// Throws MalformedResponseError or InvariantViolationError.
LabelDistribution DecodeClassifyResponse(std::string_view body,
                                         const std::string& endpoint);

class HttpModel : public ModelAdapter {
 public:
  explicit HttpModel(std::string endpoint, HttpModelOptions options = {});

  const std::string& name() const override { return name_; }
  // Issues a probe query for the empty string when labels are not known yet.
  std::vector<std::string> labels() const override;
  LabelDistribution Classify(std::string_view text) const override;

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  ParsedUrl url_;
  std::string name_;
  std::chrono::milliseconds timeout_;
  std::optional<std::string> bearer_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
  mutable std::mutex labels_mutex_;
  mutable std::vector<std::string> labels_;
};

}  // namespace greybox

#endif  // GREYBOX_HTTP_MODEL_H_
