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

#include "greybox/corpus.h"

#include <fstream>
#include <iterator>

#include "greybox/errors.h"

namespace greybox {
namespace {

struct Record {
  std::vector<std::string> fields;
  int line = 0;
};

// Splits RFC 4180 content into records. Quoted fields may span lines.
std::vector<Record> SplitCsv(const std::string& data) {
  std::vector<Record> records;
  Record current;
  std::string field;
  int line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;
  std::size_t i = 0;
  if (data.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (record_has_content) records.push_back(std::move(current));
    current = Record{};
    record_has_content = false;
  };

  for (; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw ParseError("stray quote inside unquoted field", line);
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < data.size() && data[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        if (field_was_quoted) {
          throw ParseError("text after closing quote", line);
        }
        field.push_back(c);
        record_has_content = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", current.line);
  end_record();
  return records;
}

}  // namespace

std::vector<LabeledText> ParseCorpusCsv(std::istream& in) {
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure while parsing corpus");
  const std::vector<Record> records = SplitCsv(data);
  if (records.empty()) throw ParseError("missing header `text,label`", 1);
  const Record& header = records.front();
  if (header.fields.size() != 2 || header.fields[0] != "text" ||
      header.fields[1] != "label") {
    throw ParseError("header must be `text,label`", header.line);
  }
  std::vector<LabeledText> out;
  out.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& record = records[r];
    if (record.fields.size() != 2) {
      throw ParseError("expected 2 fields, got " +
                           std::to_string(record.fields.size()),
                       record.line);
    }
    if (record.fields[1].empty()) throw ParseError("empty label", record.line);
    out.push_back({record.fields[0], record.fields[1]});
  }
  return out;
}

std::vector<LabeledText> LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseCorpusCsv(in);
}

std::vector<std::string> LoadSentences(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace greybox
