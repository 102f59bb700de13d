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

#include "selcov/selective.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "selcov/io.hpp"
#include "selcov/numfmt.hpp"

namespace selcov {

namespace {

using nlohmann::json;

constexpr std::int64_t kMaxGridPoints = 5'000'000;

void require_labeled(std::span<const PredictionRecord> records) {
  if (records.empty()) raise(Errc::empty_dataset, "no records to evaluate");
  for (const auto& record : records) {
    if (!record.true_label()) {
      raise(Errc::unlabeled_record, "record '" + record.id() + "' has no true label");
    }
  }
}

const char* objective_kind_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::target_accuracy: return "target_accuracy";
    case ObjectiveKind::min_coverage: return "min_coverage";
    case ObjectiveKind::fixed: return "fixed";
  }
  return "fixed";
}

ObjectiveKind objective_kind_from(const std::string& name) {
  if (name == "target_accuracy") return ObjectiveKind::target_accuracy;
  if (name == "min_coverage") return ObjectiveKind::min_coverage;
  if (name == "fixed") return ObjectiveKind::fixed;
  raise(Errc::bad_format, "unknown objective kind '" + name + "'");
}

}  // namespace

EvalPoint EvalPoint::from_counts(double threshold, std::int64_t accepted, std::int64_t correct,
                                 std::int64_t total) {
  EvalPoint point;
  point.threshold = threshold;
  point.accepted_count = accepted;
  point.correct_count = correct;
  point.total_count = total;
  if (accepted > 0) {
    point.accuracy = static_cast<double>(correct) / static_cast<double>(accepted);
  }
  point.coverage = total > 0 ? static_cast<double>(accepted) / static_cast<double>(total) : 0.0;
  point.rejection_rate = 1.0 - point.coverage;
  return point;
}

GridSpec GridSpec::default_for(int class_count) {
  return GridSpec{1.0 / static_cast<double>(class_count), 1.0, 0.001};
}

std::vector<double> GridSpec::thresholds() const {
  if (!(step > 0.0)) raise(Errc::bad_grid, "step must be > 0, got " + format_double(step));
  if (!(start < stop)) {
    raise(Errc::bad_grid,
          "start " + format_double(start) + " must be < stop " + format_double(stop));
  }
  if (start < 0.0 || stop > 1.0) {
    raise(Errc::bad_grid, "grid must lie inside [0, 1]");
  }
  const double span = stop - start;
  if (span / step > static_cast<double>(kMaxGridPoints)) {
    raise(Errc::bad_grid, "grid would exceed " + format_int(kMaxGridPoints) + " points");
  }
  std::vector<double> grid;
  const double slack = step * 1e-9;
  for (std::int64_t i = 0;; ++i) {
    const double t = start + static_cast<double>(i) * step;
    if (t > stop + slack) break;
    grid.push_back(std::min(t, stop));
  }
  if (grid.size() < 2) raise(Errc::bad_grid, "grid needs at least 2 points");
  return grid;
}

EvalPoint evaluate_at_threshold(std::span<const PredictionRecord> records, double threshold) {
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    raise(Errc::domain_error, "threshold " + format_double(threshold) + " outside [0, 1]");
  }
  require_labeled(records);
  std::int64_t accepted = 0;
  std::int64_t correct = 0;
  for (const auto& record : records) {
    const Decision decision = decide(record.probabilities());
    if (decision.confidence >= threshold) {
      ++accepted;
      if (decision.predicted_class == *record.true_label()) ++correct;
    }
  }
  return EvalPoint::from_counts(threshold, accepted, correct,
                                static_cast<std::int64_t>(records.size()));
}

CurveTable sweep_curve(std::span<const PredictionRecord> records, const GridSpec& grid) {
  const std::vector<double> thresholds = grid.thresholds();
  require_labeled(records);

  struct Scored {
    double confidence;
    bool correct;
  };
  std::vector<Scored> scored;
  scored.reserve(records.size());
  for (const auto& record : records) {
    const Decision decision = decide(record.probabilities());
    scored.push_back({decision.confidence, decision.predicted_class == *record.true_label()});
  }
  std::sort(scored.begin(), scored.end(),
            [](const Scored& a, const Scored& b) { return a.confidence > b.confidence; });

  std::vector<std::int64_t> correct_prefix(scored.size() + 1, 0);
  for (size_t i = 0; i < scored.size(); ++i) {
    correct_prefix[i + 1] = correct_prefix[i] + (scored[i].correct ? 1 : 0);
  }

  const auto total = static_cast<std::int64_t>(records.size());
  CurveTable curve;
  curve.total_count = total;
  curve.points.reserve(thresholds.size());
  for (double t : thresholds) {
    // First position (confidence descending) whose confidence < t.
    const auto it = std::partition_point(scored.begin(), scored.end(),
                                         [t](const Scored& s) { return s.confidence >= t; });
    const auto accepted = static_cast<std::int64_t>(it - scored.begin());
    curve.points.push_back(
        EvalPoint::from_counts(t, accepted, correct_prefix[static_cast<size_t>(accepted)], total));
  }
  return curve;
}

ThresholdPolicy select_threshold_for_accuracy(const CurveTable& curve, double target_accuracy) {
  if (!(target_accuracy > 0.0) || !(target_accuracy <= 1.0)) {
    raise(Errc::domain_error, "target accuracy must be in (0, 1]");
  }
  for (const EvalPoint& point : curve.points) {
    if (point.accuracy && *point.accuracy >= target_accuracy) {
      return ThresholdPolicy{point.threshold,
                             {ObjectiveKind::target_accuracy, target_accuracy},
                             point};
    }
  }
  raise(Errc::unreachable,
        "no grid threshold reaches accuracy " + format_double(target_accuracy));
}

ThresholdPolicy select_threshold_for_coverage(const CurveTable& curve, double min_coverage) {
  if (!(min_coverage > 0.0) || !(min_coverage <= 1.0)) {
    raise(Errc::domain_error, "min coverage must be in (0, 1]");
  }
  const EvalPoint* best = nullptr;
  for (const EvalPoint& point : curve.points) {
    if (point.coverage < min_coverage || !point.accuracy) continue;
    if (!best || *point.accuracy >= *best->accuracy) best = &point;
  }
  if (!best) {
    raise(Errc::unreachable, "no grid threshold keeps coverage >= " + format_double(min_coverage));
  }
  return ThresholdPolicy{best->threshold, {ObjectiveKind::min_coverage, min_coverage}, *best};
}

ThresholdPolicy policy_at_fixed_threshold(const CurveTable& curve, double threshold) {
  if (curve.points.empty()) raise(Errc::empty_dataset, "curve has no points");
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    raise(Errc::domain_error, "threshold " + format_double(threshold) + " outside [0, 1]");
  }
  const EvalPoint* nearest = &curve.points.front();
  for (const EvalPoint& point : curve.points) {
    if (std::abs(point.threshold - threshold) < std::abs(nearest->threshold - threshold)) {
      nearest = &point;
    }
  }
  return ThresholdPolicy{nearest->threshold, {ObjectiveKind::fixed, threshold}, *nearest};
}

std::vector<AnnotationDecision> apply_threshold(std::span<const PredictionRecord> records,
                                                double threshold) {
  std::vector<AnnotationDecision> decisions;
  decisions.reserve(records.size());
  for (const auto& record : records) {
    const Decision decision = decide(record.probabilities());
    decisions.push_back(AnnotationDecision{
        record.id(), decision,
        decision.confidence >= threshold ? AnnotationStatus::accepted
                                         : AnnotationStatus::rejected});
  }
  return decisions;
}

std::vector<AnnotationDecision> apply_threshold(std::span<const PredictionRecord> records,
                                                const ThresholdPolicy& policy) {
  return apply_threshold(records, policy.threshold);
}

std::string curve_to_csv(const CurveTable& curve) {
  std::string out = "threshold,accepted,correct,accuracy,coverage,rejection_rate\n";
  for (const EvalPoint& point : curve.points) {
    out += format_double(point.threshold);
    out += ',';
    out += format_int(point.accepted_count);
    out += ',';
    out += format_int(point.correct_count);
    out += ',';
    if (point.accuracy) out += format_double(*point.accuracy);
    out += ',';
    out += format_double(point.coverage);
    out += ',';
    out += format_double(point.rejection_rate);
    out += '\n';
  }
  return out;
}

CurveTable curve_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) raise(Errc::empty_input, "empty curve file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "threshold,accepted,correct,accuracy,coverage,rejection_rate") {
    raise(Errc::bad_format, "unexpected curve CSV header: " + line);
  }
  CurveTable curve;
  std::int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv_split(line);
    if (fields.size() != 6) {
      raise(Errc::bad_format, "curve line " + format_int(line_number) + ": expected 6 fields");
    }
    const auto threshold = parse_double(fields[0]);
    const auto accepted = parse_int(fields[1]);
    const auto correct = parse_int(fields[2]);
    const auto coverage = parse_double(fields[4]);
    const auto rejection = parse_double(fields[5]);
    if (!threshold || !accepted || !correct || !coverage || !rejection) {
      raise(Errc::bad_format, "curve line " + format_int(line_number) + ": bad number");
    }
    EvalPoint point;
    point.threshold = *threshold;
    point.accepted_count = *accepted;
    point.correct_count = *correct;
    point.accuracy = parse_double(fields[3]);  // empty field -> undefined
    if (!fields[3].empty() && !point.accuracy) {
      raise(Errc::bad_format, "curve line " + format_int(line_number) + ": bad accuracy");
    }
    point.coverage = *coverage;
    point.rejection_rate = *rejection;
    curve.points.push_back(point);
  }
  if (curve.points.empty()) raise(Errc::empty_input, "curve file has no points");
  // total_count is not a CSV column; recover it from any point with accepted
  // records (it is constant along the curve).
  for (auto& point : curve.points) {
    if (point.accepted_count > 0 && point.coverage > 0.0) {
      curve.total_count = static_cast<std::int64_t>(
          std::llround(static_cast<double>(point.accepted_count) / point.coverage));
      break;
    }
  }
  for (auto& point : curve.points) point.total_count = curve.total_count;
  return curve;
}

std::string decision_to_jsonl(const AnnotationDecision& decision) {
  std::string out = "{\"id\":\"" + json_escape(decision.record_id) + "\",\"class\":";
  out += format_int(decision.decision.predicted_class);
  out += ",\"confidence\":";
  out += format_double(decision.decision.confidence);
  out += ",\"status\":\"";
  out += decision.status == AnnotationStatus::accepted ? "accepted" : "rejected";
  out += "\"}";
  return out;
}

void write_decisions_jsonl(std::ostream& out, std::span<const AnnotationDecision> decisions) {
  for (const auto& decision : decisions) {
    out << decision_to_jsonl(decision) << '\n';
  }
}

namespace {

json eval_point_to_json(const EvalPoint& point) {
  json j;
  j["threshold"] = point.threshold;
  j["accepted"] = point.accepted_count;
  j["correct"] = point.correct_count;
  j["total"] = point.total_count;
  j["accuracy"] = point.accuracy ? json(*point.accuracy) : json();
  j["coverage"] = point.coverage;
  j["rejection_rate"] = point.rejection_rate;
  return j;
}

EvalPoint eval_point_from_json(const json& j) {
  EvalPoint point;
  point.threshold = j.at("threshold").get<double>();
  point.accepted_count = j.at("accepted").get<std::int64_t>();
  point.correct_count = j.at("correct").get<std::int64_t>();
  point.total_count = j.at("total").get<std::int64_t>();
  if (!j.at("accuracy").is_null()) point.accuracy = j.at("accuracy").get<double>();
  point.coverage = j.at("coverage").get<double>();
  point.rejection_rate = j.at("rejection_rate").get<double>();
  return point;
}

}  // namespace

std::string policy_to_json(const ThresholdPolicy& policy) {
  json j;
  j["threshold"] = policy.threshold;
  j["objective"] = {{"kind", objective_kind_name(policy.objective.kind)},
                    {"value", policy.objective.value}};
  j["achieved"] = eval_point_to_json(policy.achieved);
  return j.dump(2);
}

ThresholdPolicy policy_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::bad_format, std::string("policy is not valid JSON: ") + e.what());
  }
  // Accept both a bare policy object and the CLI envelope around one.
  if (j.is_object() && j.contains("policy")) j = j["policy"];
  try {
    ThresholdPolicy policy;
    policy.threshold = j.at("threshold").get<double>();
    policy.objective.kind = objective_kind_from(j.at("objective").at("kind").get<std::string>());
    policy.objective.value = j.at("objective").at("value").get<double>();
    policy.achieved = eval_point_from_json(j.at("achieved"));
    return policy;
  } catch (const json::exception& e) {
    raise(Errc::bad_format, std::string("policy JSON missing fields: ") + e.what());
  }
}

}  // namespace selcov
