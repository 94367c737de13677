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

// In-process HTTP classifier with one route per failure mode.

#ifndef GREYBOX_TESTS_MOCK_ENDPOINT_H_
#define GREYBOX_TESTS_MOCK_ENDPOINT_H_

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <string>
#include <thread>

#include "httplib.h"

namespace greybox::testing {

class MockEndpoint {
 public:
  MockEndpoint() {
    Json("/ok", R"({"labels":["negative","positive"],"scores":[0.086,0.914]})");
    Json("/bad-sum", R"({"labels":["negative","positive"],"scores":[0.5,0.6]})");
    Json("/garbage", "{not json");
    Json("/missing", R"({"labels":["negative","positive"]})");
    Json("/other-labels", R"({"labels":["neg","pos"],"scores":[0.5,0.5]})");
    server_.Post("/status", [](const httplib::Request&, httplib::Response& res) {
      res.status = 503;
      res.set_content("overloaded", "text/plain");
    });
    server_.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(800));
      res.set_content(R"({"labels":["a","b"],"scores":[0.5,0.5]})",
                      "application/json");
    });
    server_.Post("/auth", [](const httplib::Request& req, httplib::Response& res) {
      if (req.get_header_value("Authorization") != "Bearer s3cret") {
        res.status = 401;
        return;
      }
      res.set_content(R"({"labels":["a","b"],"scores":[1,0]})", "application/json");
    });
    // Positive exactly when the request text contains "short".
    server_.Post("/keyword", [](const httplib::Request& req, httplib::Response& res) {
      const bool hit = req.body.find("short") != std::string::npos;
      res.set_content(hit ? R"({"labels":["negative","positive"],"scores":[0.1,0.9]})"
                          : R"({"labels":["negative","positive"],"scores":[0.8,0.2]})",
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string Url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  void Json(const std::string& path, std::string body) {
    server_.Post(path, [body](const httplib::Request&, httplib::Response& res) {
      res.set_content(body, "application/json");
    });
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

// A local port with nothing listening on it.
inline int ClosedPort() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace greybox::testing

#endif  // GREYBOX_TESTS_MOCK_ENDPOINT_H_
