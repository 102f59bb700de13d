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

#include "selcov/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "selcov/numfmt.hpp"

namespace selcov {

namespace {

using nlohmann::json;

bool blank_line(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::optional<std::string> json_optional_string(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) raise(Errc::invalid_field, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<SpecimenMeta> specimen_from_fields(std::optional<std::string> species,
                                                 std::optional<std::string> date,
                                                 std::optional<std::string> nativity,
                                                 std::optional<std::string> growth_form,
                                                 std::optional<std::string> wetland) {
  const bool any = species || date || nativity || growth_form || wetland;
  if (!any) return std::nullopt;
  if (!species || !date) {
    raise(Errc::invalid_field, "specimen fields require both species and date");
  }
  SpecimenMeta meta;
  meta.species = std::move(*species);
  meta.collection_date = Date::parse(*date);
  if (nativity) {
    meta.nativity = nativity_from_string(*nativity);
    if (!meta.nativity) raise(Errc::invalid_field, "unknown nativity '" + *nativity + "'");
  }
  if (growth_form) {
    meta.growth_form = growth_form_from_string(*growth_form);
    if (!meta.growth_form) raise(Errc::invalid_field, "unknown growth_form '" + *growth_form + "'");
  }
  if (wetland) {
    meta.wetland_status = wetland_status_from_string(*wetland);
    if (!meta.wetland_status) raise(Errc::invalid_field, "unknown wetland '" + *wetland + "'");
  }
  return meta;
}

struct ParsedLine {
  std::string id;
  std::vector<double> probabilities;
  std::optional<int> true_label;
  std::optional<SpecimenMeta> specimen;
};

ParsedLine parse_jsonl_line(const std::string& line) {
  json object;
  try {
    object = json::parse(line);
  } catch (const json::parse_error& e) {
    raise(Errc::bad_format, std::string("not valid JSON: ") + e.what());
  }
  if (!object.is_object()) raise(Errc::bad_format, "line is not a JSON object");

  ParsedLine parsed;
  auto id_it = object.find("id");
  if (id_it == object.end() || !id_it->is_string()) {
    raise(Errc::invalid_field, "'id' must be a string");
  }
  parsed.id = id_it->get<std::string>();

  auto probs_it = object.find("probs");
  if (probs_it == object.end() || !probs_it->is_array()) {
    raise(Errc::invalid_field, "'probs' must be an array");
  }
  parsed.probabilities.reserve(probs_it->size());
  for (const auto& entry : *probs_it) {
    if (!entry.is_number()) raise(Errc::invalid_field, "'probs' entries must be numbers");
    parsed.probabilities.push_back(entry.get<double>());
  }

  auto label_it = object.find("label");
  if (label_it != object.end() && !label_it->is_null()) {
    if (!label_it->is_number_integer()) raise(Errc::invalid_field, "'label' must be an integer");
    parsed.true_label = label_it->get<int>();
  }

  parsed.specimen = specimen_from_fields(
      json_optional_string(object, "species"), json_optional_string(object, "date"),
      json_optional_string(object, "nativity"), json_optional_string(object, "growth_form"),
      json_optional_string(object, "wetland"));
  return parsed;
}

int parse_csv_header(const std::string& line) {
  const auto fields = csv_split(line);
  if (fields.size() < 9 || fields[0] != "id") {
    raise(Errc::bad_format, "CSV header must start with id,prob_0,...");
  }
  const int class_count = static_cast<int>(fields.size()) - 7;
  for (int k = 0; k < class_count; ++k) {
    if (fields[1 + static_cast<size_t>(k)] != "prob_" + format_int(k)) {
      raise(Errc::bad_format, "CSV header column " + format_int(k + 1) + " must be prob_" +
                                  format_int(k));
    }
  }
  static constexpr const char* kTrailing[] = {"label",    "species",     "date",
                                              "nativity", "growth_form", "wetland"};
  for (int i = 0; i < 6; ++i) {
    if (fields[static_cast<size_t>(1 + class_count + i)] != kTrailing[i]) {
      raise(Errc::bad_format, std::string("CSV header must end with ") +
                                  "label,species,date,nativity,growth_form,wetland");
    }
  }
  return class_count;
}

ParsedLine parse_csv_line(const std::string& line, int class_count) {
  const auto fields = csv_split(line);
  const size_t expected = static_cast<size_t>(class_count) + 7;
  if (fields.size() != expected) {
    raise(Errc::invalid_field, "expected " + format_int(static_cast<std::int64_t>(expected)) +
                                   " fields, got " + format_int(fields.size()));
  }
  ParsedLine parsed;
  parsed.id = fields[0];
  parsed.probabilities.reserve(static_cast<size_t>(class_count));
  for (int k = 0; k < class_count; ++k) {
    const auto value = parse_double(fields[1 + static_cast<size_t>(k)]);
    if (!value) raise(Errc::invalid_field, "prob_" + format_int(k) + " is not a number");
    parsed.probabilities.push_back(*value);
  }
  auto opt = [&](size_t index) -> std::optional<std::string> {
    if (fields[index].empty()) return std::nullopt;
    return fields[index];
  };
  const size_t base = 1 + static_cast<size_t>(class_count);
  if (const auto label = opt(base)) {
    const auto value = parse_int(*label);
    if (!value) raise(Errc::invalid_field, "label is not an integer");
    parsed.true_label = static_cast<int>(*value);
  }
  parsed.specimen =
      specimen_from_fields(opt(base + 1), opt(base + 2), opt(base + 3), opt(base + 4), opt(base + 5));
  return parsed;
}

}  // namespace

IngestResult ingest_predictions(std::istream& stream, const IngestConfig& config) {
  if (config.format == RecordFormat::auto_detect) {
    raise(Errc::bad_format, "stream ingestion needs an explicit format");
  }
  IngestResult result;
  DatasetReport& report = result.report;

  std::string line;
  std::int64_t line_number = 0;
  int class_count = 0;  // 0 until fixed by the first record / header

  if (config.format == RecordFormat::csv) {
    if (!std::getline(stream, line)) raise(Errc::empty_input, "missing CSV header");
    ++line_number;
    class_count = parse_csv_header(line);
  }

  while (std::getline(stream, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank_line(line)) continue;
    try {
      ParsedLine parsed = config.format == RecordFormat::jsonl
                              ? parse_jsonl_line(line)
                              : parse_csv_line(line, class_count);
      if (config.format == RecordFormat::jsonl && class_count != 0 &&
          static_cast<int>(parsed.probabilities.size()) != class_count) {
        raise(Errc::inconsistent_class_count,
              "line " + format_int(line_number) + ": vector length " +
                  format_int(parsed.probabilities.size()) + " != " + format_int(class_count));
      }
      PredictionRecord record =
          PredictionRecord::make(std::move(parsed.id), std::move(parsed.probabilities),
                                 parsed.true_label, std::move(parsed.specimen));
      if (class_count == 0) class_count = record.class_count();
      if (record.true_label()) {
        ++report.labeled_count;
      }
      result.records.push_back(std::move(record));
    } catch (const Error& e) {
      if (e.code() == Errc::inconsistent_class_count) throw;
      ++report.malformed_count;
      report.malformed_lines.push_back(MalformedLine{line_number, e.what()});
    }
  }

  if (result.records.empty()) raise(Errc::empty_input, "no well-formed records");

  report.record_count = static_cast<std::int64_t>(result.records.size());
  report.class_count = class_count;
  report.label_histogram.assign(static_cast<size_t>(class_count), 0);
  for (const auto& record : result.records) {
    if (record.true_label()) ++report.label_histogram[static_cast<size_t>(*record.true_label())];
  }
  return result;
}

IngestResult ingest_predictions_file(const std::filesystem::path& path, IngestConfig config) {
  std::ifstream stream(path);
  if (!stream) raise(Errc::io_error, "cannot open " + path.string());
  if (config.format == RecordFormat::auto_detect) {
    const auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") {
      config.format = RecordFormat::jsonl;
    } else if (ext == ".csv") {
      config.format = RecordFormat::csv;
    } else {
      config.format = stream.peek() == '{' ? RecordFormat::jsonl : RecordFormat::csv;
    }
  }
  return ingest_predictions(stream, config);
}

std::string json_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace {

void append_optional_string(std::string& out, const char* key,
                            const std::optional<std::string>& value) {
  out += ",\"";
  out += key;
  out += "\":";
  if (value) {
    out += '"';
    out += json_escape(*value);
    out += '"';
  } else {
    out += "null";
  }
}

}  // namespace

std::string record_to_jsonl(const PredictionRecord& record) {
  std::string out = "{\"id\":\"" + json_escape(record.id()) + "\",\"probs\":[";
  for (size_t i = 0; i < record.probabilities().size(); ++i) {
    if (i) out += ',';
    out += format_double(record.probabilities()[i]);
  }
  out += "],\"label\":";
  out += record.true_label() ? format_int(*record.true_label()) : "null";

  const auto& specimen = record.specimen();
  auto mapped = [&](auto&& getter) -> std::optional<std::string> {
    if (!specimen) return std::nullopt;
    return getter(*specimen);
  };
  append_optional_string(out, "species", mapped([](const SpecimenMeta& m) {
                           return std::optional<std::string>(m.species);
                         }));
  append_optional_string(out, "date", mapped([](const SpecimenMeta& m) {
                           return std::optional<std::string>(m.collection_date.to_string());
                         }));
  append_optional_string(out, "nativity", mapped([](const SpecimenMeta& m) {
                           return m.nativity ? std::optional<std::string>(to_string(*m.nativity))
                                             : std::nullopt;
                         }));
  append_optional_string(out, "growth_form", mapped([](const SpecimenMeta& m) {
                           return m.growth_form
                                      ? std::optional<std::string>(to_string(*m.growth_form))
                                      : std::nullopt;
                         }));
  append_optional_string(out, "wetland", mapped([](const SpecimenMeta& m) {
                           return m.wetland_status
                                      ? std::optional<std::string>(to_string(*m.wetland_status))
                                      : std::nullopt;
                         }));
  out += '}';
  return out;
}

std::string records_csv_header(int class_count) {
  std::string out = "id";
  for (int k = 0; k < class_count; ++k) out += ",prob_" + format_int(k);
  out += ",label,species,date,nativity,growth_form,wetland";
  return out;
}

std::string record_to_csv(const PredictionRecord& record) {
  std::string out = csv_escape(record.id());
  for (double p : record.probabilities()) {
    out += ',';
    out += format_double(p);
  }
  out += ',';
  if (record.true_label()) out += format_int(*record.true_label());
  const auto& specimen = record.specimen();
  auto field = [&](const std::string& value) {
    out += ',';
    out += csv_escape(value);
  };
  field(specimen ? specimen->species : "");
  field(specimen ? specimen->collection_date.to_string() : "");
  field(specimen && specimen->nativity ? to_string(*specimen->nativity) : "");
  field(specimen && specimen->growth_form ? to_string(*specimen->growth_form) : "");
  field(specimen && specimen->wetland_status ? to_string(*specimen->wetland_status) : "");
  return out;
}

void write_records_jsonl(std::ostream& out, std::span<const PredictionRecord> records) {
  for (const auto& record : records) {
    out << record_to_jsonl(record) << '\n';
  }
}

void write_records_csv(std::ostream& out, std::span<const PredictionRecord> records) {
  if (records.empty()) return;
  out << records_csv_header(records.front().class_count()) << '\n';
  for (const auto& record : records) {
    out << record_to_csv(record) << '\n';
  }
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace selcov
