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

#include "greybox/http_model.h"

#include <cstdlib>

#include "greybox/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace greybox {

ParsedUrl ParseHttpUrl(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw InvalidArgumentError("only http:// endpoints are supported: " +
                               std::string(url));
  }
  std::string_view rest = url.substr(kScheme.size());
  ParsedUrl parsed;
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) parsed.path = std::string(rest.substr(slash));
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const std::string port(authority.substr(colon + 1));
    char* end = nullptr;
    const long value = std::strtol(port.c_str(), &end, 10);
    if (port.empty() || *end != '\0' || value <= 0 || value > 65535) {
      throw InvalidArgumentError("bad port in " + std::string(url));
    }
    parsed.port = static_cast<int>(value);
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) {
    throw InvalidArgumentError("missing host in " + std::string(url));
  }
  parsed.host = std::string(authority);
  return parsed;
}

std::string EncodeClassifyRequest(std::string_view text) {
  nlohmann::json body = {{"text", std::string(text)}};
  return body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

LabelDistribution DecodeClassifyResponse(std::string_view body,
                                         const std::string& endpoint) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponseError(endpoint,
                                 std::string("response is not JSON: ") + e.what());
  }
  std::vector<std::string> labels;
  std::vector<double> scores;
  try {
    labels = doc.at("labels").get<std::vector<std::string>>();
    scores = doc.at("scores").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponseError(
        endpoint, std::string("response lacks labels/scores: ") + e.what());
  }
  try {
    return LabelDistribution(std::move(labels), std::move(scores));
  } catch (const InvalidArgumentError& e) {
    throw InvariantViolationError(endpoint, e.what());
  }
}

HttpModel::HttpModel(std::string endpoint, HttpModelOptions options)
    : endpoint_(std::move(endpoint)),
      url_(ParseHttpUrl(endpoint_)),
      name_(options.name.empty() ? endpoint_ : options.name),
      timeout_(options.timeout),
      bearer_(options.bearer_token),
      in_flight_(std::make_unique<std::counting_semaphore<>>(
          std::max(1, options.max_in_flight))),
      labels_(std::move(options.labels)) {
  if (!bearer_) {
    if (const char* env = std::getenv(kBearerEnvVar); env && *env) {
      bearer_ = env;
    }
  }
}

std::vector<std::string> HttpModel::labels() const {
  {
    std::lock_guard lock(labels_mutex_);
    if (!labels_.empty()) return labels_;
  }
  return Classify("").labels();
}

LabelDistribution HttpModel::Classify(std::string_view text) const {
  in_flight_->acquire();
  struct Release {
    std::counting_semaphore<>* s;
    ~Release() { s->release(); }
  } release{in_flight_.get()};

  httplib::Client client(url_.host, url_.port);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers;
  if (bearer_) headers.emplace("Authorization", "Bearer " + *bearer_);

  const auto started = std::chrono::steady_clock::now();
  auto result = client.Post(url_.path, headers, EncodeClassifyRequest(text),
                            "application/json");
  if (!result) {
    const auto error = result.error();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const bool timed_out =
        error == httplib::Error::ConnectionTimeout ||
        (error == httplib::Error::Read && elapsed >= timeout_ * 9 / 10);
    if (timed_out) {
      throw TimeoutError(endpoint_, "no response within " +
                                        std::to_string(timeout_.count()) + " ms");
    }
    throw TransportError(endpoint_, "request failed: " + httplib::to_string(error));
  }
  if (result->status < 200 || result->status >= 300) {
    throw HttpStatusError(endpoint_,
                          "HTTP status " + std::to_string(result->status),
                          result->status);
  }
  LabelDistribution distribution = DecodeClassifyResponse(result->body, endpoint_);

  std::lock_guard lock(labels_mutex_);
  if (labels_.empty()) {
    labels_ = distribution.labels();
  } else if (distribution.labels() != labels_) {
    throw InvariantViolationError(endpoint_,
                                  "response labels differ from declared labels");
  }
  return distribution;
}

}  // namespace greybox
