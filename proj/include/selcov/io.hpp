// Copyright 2026 The selcov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "selcov/types.hpp"

namespace selcov {

enum class RecordFormat { auto_detect, jsonl, csv };

struct IngestConfig {
  RecordFormat format = RecordFormat::auto_detect;
};

struct IngestResult {
  std::vector<PredictionRecord> records;
  DatasetReport report;
};

/// Line-oriented ingestion. Well-formed lines become records; malformed lines
/// are counted with their line numbers and skipped. The class count K is fixed
/// by the first record (JSONL) or the header (CSV) and a later record with a
/// different vector length is a hard InconsistentClassCount error. Zero
/// well-formed records is EmptyInput. Format must not be auto_detect here.
IngestResult ingest_predictions(std::istream& stream, const IngestConfig& config);

/// Same, resolving auto_detect from the file extension (falls back to peeking
/// at the first byte).
IngestResult ingest_predictions_file(const std::filesystem::path& path, IngestConfig config = {});

std::string record_to_jsonl(const PredictionRecord& record);
std::string records_csv_header(int class_count);
std::string record_to_csv(const PredictionRecord& record);

void write_records_jsonl(std::ostream& out, std::span<const PredictionRecord> records);
void write_records_csv(std::ostream& out, std::span<const PredictionRecord> records);

// Minimal RFC-4180-style CSV helpers shared by the report serializers.
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split(std::string_view line);

std::string json_escape(std::string_view text);

}  // namespace selcov
