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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selcov/error.hpp"

namespace selcov {

/// Probability vectors must sum to 1 within this tolerance; vectors inside
/// the tolerance are renormalized before storage.
inline constexpr double kProbabilitySumTolerance = 1e-6;

/// Calendar date, Gregorian, year restricted to [1700, 2100].
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  static bool is_leap_year(int year);
  static int days_in_month(int year, int month);

  /// Parses strict "YYYY-MM-DD"; throws InvalidDate on malformed or
  /// out-of-calendar input.
  static Date parse(std::string_view iso);

  /// Inverse of day_of_year for a given year; doy is 1-based.
  static Date from_day_of_year(int year, int doy);

  bool valid() const;
  int day_of_year() const;
  std::string to_string() const;

  friend bool operator==(const Date&, const Date&) = default;
};

enum class Nativity { native, introduced };
enum class GrowthForm { forb_herb, tree_shrub_subshrub, vine, woody, herbaceous };
enum class WetlandStatus { OBL, FACW, FAC, FACU, UPL };

std::string to_string(Nativity value);
std::string to_string(GrowthForm value);
std::string to_string(WetlandStatus value);
std::optional<Nativity> nativity_from_string(std::string_view text);
std::optional<GrowthForm> growth_form_from_string(std::string_view text);
std::optional<WetlandStatus> wetland_status_from_string(std::string_view text);

struct SpecimenMeta {
  std::string species;
  Date collection_date;
  std::optional<Nativity> nativity;
  std::optional<GrowthForm> growth_form;
  std::optional<WetlandStatus> wetland_status;

  friend bool operator==(const SpecimenMeta&, const SpecimenMeta&) = default;
};

/// Argmax verdict for one probability vector.
struct Decision {
  int predicted_class = 0;
  double confidence = 0.0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// One specimen's class-probability vector plus optional true label and
/// specimen metadata. Immutable after construction; construction validates
/// the invariants and renormalizes the probabilities when the sum is off by
/// more than a few ulps (so serialize -> ingest is idempotent).
class PredictionRecord {
 public:
  static PredictionRecord make(std::string id, std::vector<double> probabilities,
                               std::optional<int> true_label = std::nullopt,
                               std::optional<SpecimenMeta> specimen = std::nullopt);

  const std::string& id() const { return id_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  int class_count() const { return static_cast<int>(probabilities_.size()); }
  std::optional<int> true_label() const { return true_label_; }
  const std::optional<SpecimenMeta>& specimen() const { return specimen_; }

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;

 private:
  PredictionRecord() = default;

  std::string id_;
  std::vector<double> probabilities_;
  std::optional<int> true_label_;
  std::optional<SpecimenMeta> specimen_;
};

/// Selects the class with the highest probability; ties break to the lowest
/// class index. Throws InvalidVector on NaN, out-of-range entries, or a sum
/// outside tolerance.
Decision decide(std::span<const double> probabilities);

struct MalformedLine {
  std::int64_t line_number = 0;
  std::string reason;
};

struct DatasetReport {
  std::int64_t record_count = 0;
  int class_count = 0;
  std::int64_t labeled_count = 0;
  std::int64_t malformed_count = 0;
  std::vector<std::int64_t> label_histogram;  // indexed by class, size class_count
  std::vector<MalformedLine> malformed_lines;
};

}  // namespace selcov
