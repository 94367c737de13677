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

#include "greybox/model_spec.h"

#include <filesystem>
#include <map>

#include "greybox/builtin_classifier.h"
#include "greybox/errors.h"
#include "greybox/http_model.h"

namespace greybox {
namespace {

// Forwards to another adapter under a different name.
class RenamedModel : public ModelAdapter {
 public:
  RenamedModel(std::unique_ptr<ModelAdapter> inner, std::string name)
      : inner_(std::move(inner)), name_(std::move(name)) {}

  const std::string& name() const override { return name_; }
  std::vector<std::string> labels() const override { return inner_->labels(); }
  LabelDistribution Classify(std::string_view text) const override {
    return inner_->Classify(text);
  }

 private:
  std::unique_ptr<ModelAdapter> inner_;
  std::string name_;
};

}  // namespace

ModelSpec ParseModelSpec(std::string_view spec) {
  constexpr std::string_view kBuiltin = "builtin:";
  constexpr std::string_view kHttp = "http:";
  ModelSpec parsed;
  if (spec.substr(0, kBuiltin.size()) == kBuiltin) {
    parsed.kind = ModelSpec::Kind::kBuiltin;
    parsed.location = std::string(spec.substr(kBuiltin.size()));
  } else if (spec.substr(0, 7) == "http://") {
    parsed.kind = ModelSpec::Kind::kHttp;
    parsed.location = std::string(spec);
  } else if (spec.substr(0, kHttp.size()) == kHttp) {
    parsed.kind = ModelSpec::Kind::kHttp;
    parsed.location = std::string(spec.substr(kHttp.size()));
    if (parsed.location.substr(0, 7) != "http://") {
      parsed.location = "http://" + parsed.location;
    }
  } else {
    throw InvalidArgumentError("model spec must be builtin:<path> or http:<url>, got '" +
                               std::string(spec) + "'");
  }
  if (parsed.location.empty()) {
    throw InvalidArgumentError("empty model location in '" + std::string(spec) + "'");
  }
  return parsed;
}

std::unique_ptr<ModelAdapter> LoadModel(const ModelSpec& spec,
                                        const ModelLoadOptions& options) {
  if (spec.kind == ModelSpec::Kind::kBuiltin) {
    auto model = std::make_unique<BuiltinClassifier>(
        BuiltinClassifier::Load(spec.location));
    model->set_name(std::filesystem::path(spec.location).stem().string());
    return model;
  }
  HttpModelOptions http;
  http.timeout = options.http_timeout;
  http.max_in_flight = options.http_max_in_flight;
  return std::make_unique<HttpModel>(spec.location, http);
}

std::vector<std::unique_ptr<ModelAdapter>> LoadModels(
    const std::vector<std::string>& specs, const ModelLoadOptions& options) {
  std::vector<std::unique_ptr<ModelAdapter>> out;
  std::map<std::string, int> seen;
  for (const auto& spec : specs) {
    auto model = LoadModel(ParseModelSpec(spec), options);
    const int count = ++seen[model->name()];
    if (count > 1) {
      std::string name = model->name() + "#" + std::to_string(count);
      model = std::make_unique<RenamedModel>(std::move(model), std::move(name));
    }
    out.push_back(std::move(model));
  }
  return out;
}

}  // namespace greybox
