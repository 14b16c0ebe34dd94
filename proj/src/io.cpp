// Copyright 2026 The threadtree Authors
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

#include "threadtree/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <string_view>
#include <unordered_set>

#include <json.hpp>

namespace threadtree {
namespace {

struct ParsedLine {
  std::string id;
  std::vector<NodeId> parents;
};

// Either a parsed line or the reason it was rejected.
struct LineOutcome {
  std::optional<ParsedLine> value;
  std::string error;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

LineOutcome fail(std::string msg) { return {std::nullopt, std::move(msg)}; }

LineOutcome parse_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    return fail("malformed JSON");
  }
  if (!j.is_object()) return fail("expected a JSON object");
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) return fail("missing string field \"id\"");
  const auto parents = j.find("parents");
  if (parents == j.end() || !parents->is_array()) {
    return fail("missing array field \"parents\"");
  }
  ParsedLine out{id->get<std::string>(), {}};
  out.parents.reserve(parents->size());
  for (const auto& p : *parents) {
    if (!p.is_number_integer() || p.get<std::int64_t>() < 1 ||
        p.get<std::int64_t>() > std::numeric_limits<NodeId>::max()) {
      return fail("parents must be positive integers");
    }
    out.parents.push_back(static_cast<NodeId>(p.get<std::int64_t>()));
  }
  return {std::move(out), {}};
}

LineOutcome parse_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields[0].empty()) return fail("missing id");
  ParsedLine out{std::string(fields[0]), {}};
  // "id," is the root-only form.
  if (fields.size() == 2 && fields[1].empty()) return {std::move(out), {}};
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const std::string_view f = fields[i];
    NodeId v = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || v == 0) {
      return fail("parents must be positive integers");
    }
    out.parents.push_back(v);
  }
  return {std::move(out), {}};
}

}  // namespace

DatasetFormat format_for_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "csv") return DatasetFormat::kCsv;
  }
  return DatasetFormat::kJsonLines;
}

IngestResult ingest(std::istream& in, DatasetFormat format, bool strict,
                    const std::string& source_label) {
  IngestResult result;
  std::vector<ParentVector> threads;
  std::vector<std::string> ids;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t number = 0;

  auto reject = [&](std::string msg) {
    const std::string full = "line " + std::to_string(number) + ": " + msg;
    if (strict) throw IngestError(full, number);
    result.skipped.push_back({number, std::move(msg)});
  };

  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    LineOutcome parsed = format == DatasetFormat::kCsv ? parse_csv_line(body)
                                                       : parse_json_line(body);
    if (!parsed.value) {
      reject(parsed.error);
      continue;
    }
    ParentVector pv(std::move(parsed.value->parents));
    if (auto bad = validate(pv)) {
      reject(bad->reason);
      continue;
    }
    if (!seen.insert(parsed.value->id).second) {
      reject("duplicate id \"" + parsed.value->id + "\"");
      continue;
    }
    threads.push_back(std::move(pv));
    ids.push_back(std::move(parsed.value->id));
  }
  if (in.bad()) throw IngestError("read error");
  if (threads.empty()) throw IngestError("no valid threads");
  result.dataset = ThreadDataset(std::move(threads), source_label, std::move(ids));
  return result;
}

IngestResult ingest_file(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path);
  try {
    return ingest(in, format_for_path(path), strict, path);
  } catch (const IngestError& e) {
    throw IngestError(path + ": " + e.what(), e.line());
  }
}

void write_jsonl(std::ostream& out, const ThreadDataset& data) {
  std::string line;
  char buf[16];
  for (std::size_t i = 0; i < data.count(); ++i) {
    line = "{\"id\":";
    line += nlohmann::json(data.ids()[i]).dump();
    line += ",\"parents\":[";
    bool first = true;
    for (NodeId p : data.thread(i).parents()) {
      if (!first) line += ',';
      first = false;
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
      line.append(buf, end);
    }
    line += "]}\n";
    out << line;
  }
}

void write_csv(std::ostream& out, const ThreadDataset& data) {
  std::string line;
  char buf[16];
  for (std::size_t i = 0; i < data.count(); ++i) {
    const std::string& id = data.ids()[i];
    if (id.find_first_of(",\r\n") != std::string::npos || trim(id) != id ||
        id.empty()) {
      throw std::invalid_argument("id not representable in CSV: " + id);
    }
    line = id;
    for (NodeId p : data.thread(i).parents()) {
      line += ',';
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
      line.append(buf, end);
    }
    line += '\n';
    out << line;
  }
}

void write_dataset(std::ostream& out, const ThreadDataset& data,
                   DatasetFormat format) {
  if (format == DatasetFormat::kCsv) {
    write_csv(out, data);
  } else {
    write_jsonl(out, data);
  }
}

}  // namespace threadtree
