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

// Serves a builtin classifier over the HTTP classify protocol. Useful for
// exercising remote targets locally.
//
//   greybox_mock_server --model data/target.json --port 8080

#include <csignal>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "greybox/builtin_classifier.h"
#include "greybox/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace {

httplib::Server* g_server = nullptr;

void Stop(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serve a builtin model over HTTP"};
  std::string model_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string path = "/classify";
  std::string bearer;
  app.add_option("--model", model_path, "Builtin model file")->required();
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str();
  app.add_option("--path", path)->capture_default_str();
  app.add_option("--bearer", bearer, "Require this bearer token");
  CLI11_PARSE(app, argc, argv);

  std::optional<greybox::BuiltinClassifier> loaded;
  try {
    loaded.emplace(greybox::BuiltinClassifier::Load(model_path));
  } catch (const greybox::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  const greybox::BuiltinClassifier& model = *loaded;

  httplib::Server server;
  server.Post(path, [&](const httplib::Request& req, httplib::Response& res) {
    if (!bearer.empty() && req.get_header_value("Authorization") != "Bearer " + bearer) {
      res.status = 401;
      return;
    }
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("text") || !body["text"].is_string()) {
      res.status = 400;
      res.set_content(R"({"error":"expected {\"text\": string}"})", "application/json");
      return;
    }
    const auto dist = model.Classify(body["text"].get<std::string>());
    nlohmann::json out = {{"labels", dist.labels()}, {"scores", dist.scores()}};
    res.set_content(out.dump(), "application/json");
  });

  g_server = &server;
  std::signal(SIGINT, Stop);
  std::signal(SIGTERM, Stop);
  std::fprintf(stderr, "serving %s on http://%s:%d%s\n", model_path.c_str(),
               host.c_str(), port, path.c_str());
  return server.listen(host, port) ? 0 : 1;
}
