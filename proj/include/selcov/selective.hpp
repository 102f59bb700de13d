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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selcov/types.hpp"

namespace selcov {

/// Accuracy/coverage measurement at one confidence threshold. Accuracy is
/// absent (never 0 or 1) when nothing is accepted.
struct EvalPoint {
  double threshold = 0.0;
  std::int64_t accepted_count = 0;
  std::int64_t correct_count = 0;
  std::int64_t total_count = 0;
  std::optional<double> accuracy;
  double coverage = 0.0;
  double rejection_rate = 1.0;

  static EvalPoint from_counts(double threshold, std::int64_t accepted, std::int64_t correct,
                               std::int64_t total);
};

/// Arithmetic threshold grid: start, start+step, ... up to stop (inclusive).
struct GridSpec {
  double start = 0.5;
  double stop = 1.0;
  double step = 0.001;

  /// Default sweep grid for a K-class problem: 1/K to 1.0 in steps of 0.001.
  static GridSpec default_for(int class_count);

  /// Materializes the grid; throws BadGrid on step <= 0, start >= stop,
  /// points outside [0, 1], or fewer than 2 points.
  std::vector<double> thresholds() const;
};

struct CurveTable {
  std::vector<EvalPoint> points;  // strictly increasing thresholds
  std::int64_t total_count = 0;
};

enum class ObjectiveKind { target_accuracy, min_coverage, fixed };

struct ThresholdObjective {
  ObjectiveKind kind = ObjectiveKind::fixed;
  double value = 0.0;
};

struct ThresholdPolicy {
  double threshold = 0.0;
  ThresholdObjective objective;
  EvalPoint achieved;  // on the validation curve; achieved.threshold == threshold
};

enum class AnnotationStatus { accepted, rejected };

struct AnnotationDecision {
  std::string record_id;
  Decision decision;
  AnnotationStatus status = AnnotationStatus::rejected;
};

/// Per-threshold evaluation by a direct scan. A record is accepted iff its
/// confidence >= threshold; correct iff accepted and the argmax matches the
/// true label. Every record must be labeled.
EvalPoint evaluate_at_threshold(std::span<const PredictionRecord> records, double threshold);

/// Whole-curve sweep: sorts records by confidence descending once and reads
/// every grid threshold off prefix counts. Count-exact equal to evaluating
/// each grid point independently.
CurveTable sweep_curve(std::span<const PredictionRecord> records, const GridSpec& grid);

/// Smallest grid threshold whose accuracy is defined and >= target_accuracy
/// (maximizes coverage subject to the accuracy constraint).
ThresholdPolicy select_threshold_for_accuracy(const CurveTable& curve, double target_accuracy);

/// Among grid thresholds with coverage >= min_coverage, the one with maximum
/// accuracy; ties break toward the larger threshold.
ThresholdPolicy select_threshold_for_coverage(const CurveTable& curve, double min_coverage);

/// Fixed-threshold policy, snapped to the nearest grid point (ties toward the
/// lower one) since the serialized curve only carries sampled thresholds.
ThresholdPolicy policy_at_fixed_threshold(const CurveTable& curve, double threshold);

std::vector<AnnotationDecision> apply_threshold(std::span<const PredictionRecord> records,
                                                double threshold);
std::vector<AnnotationDecision> apply_threshold(std::span<const PredictionRecord> records,
                                                const ThresholdPolicy& policy);

/// CSV with header threshold,accepted,correct,accuracy,coverage,rejection_rate;
/// undefined accuracy serializes as an empty field (null).
std::string curve_to_csv(const CurveTable& curve);
CurveTable curve_from_csv(std::istream& in);

/// JSONL {"id","class","confidence","status"}.
std::string decision_to_jsonl(const AnnotationDecision& decision);
void write_decisions_jsonl(std::ostream& out, std::span<const AnnotationDecision> decisions);

std::string policy_to_json(const ThresholdPolicy& policy);
ThresholdPolicy policy_from_json_text(const std::string& text);

}  // namespace selcov
