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

#ifndef THREADTREE_IO_HPP_
#define THREADTREE_IO_HPP_

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "threadtree/thread_core.hpp"

namespace threadtree {

// JSON lines: {"id": "...", "parents": [1, 1, 2]} per line.
// CSV: id,1,1,2 per line; "id" or "id," alone is a root-only thread.
enum class DatasetFormat { kJsonLines, kCsv };

// ".csv" selects CSV, anything else JSON lines.
DatasetFormat format_for_path(const std::string& path);

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

// Unreadable input, a malformed line in strict mode, or no valid thread.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct IngestResult {
  ThreadDataset dataset;
  // Lines skipped in lenient mode.
  std::vector<LineError> skipped;
};

// Strict mode throws on the first bad line; lenient mode skips and records
// it. Blank lines are ignored in both. Duplicate ids are errors.
IngestResult ingest(std::istream& in, DatasetFormat format, bool strict,
                    const std::string& source_label = {});
IngestResult ingest_file(const std::string& path, bool strict);

void write_jsonl(std::ostream& out, const ThreadDataset& data);
// Throws std::invalid_argument for ids containing ',' or a line break.
void write_csv(std::ostream& out, const ThreadDataset& data);
void write_dataset(std::ostream& out, const ThreadDataset& data,
                   DatasetFormat format);

}  // namespace threadtree

#endif  // THREADTREE_IO_HPP_
