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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selcov/types.hpp"

namespace selcov::phenology {

inline constexpr double kSignificanceLevel = 0.05;
inline constexpr double kEarlySeasonMaxDoy = 180.0;   // early season: mean DoY <= 180
inline constexpr double kNarrowDurationMaxDays = 28.0;

enum class PhenologyTask { flowering, fruiting_replication };

/// One accepted event observation. DoY may exceed 365 after the
/// previous-season adjustment (January/February fruiting dates get +365).
struct EventObservation {
  std::string species;
  int year = 0;
  double doy = 0.0;  // in [1, 366 + 365]
  std::string source_record_id;
};

struct SpeciesDoYEstimate {
  std::string species;
  std::optional<double> mean_doy;  // present iff n >= 1
  std::optional<double> std_doy;   // present iff n >= 2 (sample std)
  std::int64_t n = 0;
};

/// Maps a specimen to an event observation for the given task, or nullopt
/// when the task's rules discard it. The fruiting replication adds 365 days
/// to January/February dates and discards March-May dates.
std::optional<EventObservation> to_event_doy(const SpecimenMeta& specimen, PhenologyTask task,
                                             const std::string& record_id);

/// Per-species mean and sample std of DoY. Species listed in the universe but
/// absent from the observations yield empty estimates with n = 0.
std::map<std::string, SpeciesDoYEstimate> species_mean_doy(
    std::span<const EventObservation> observations,
    std::span<const std::string> species_universe = {});

enum class ReplicationGroup { native, invasive };

struct ReplicationGroupStats {
  std::int64_t n_species = 0;
  std::optional<double> mean_of_means;
  std::optional<double> std_of_means;
};

struct ReplicationReport {
  double mean_abs_doy_error = 0.0;
  std::int64_t overlap_count = 0;
  std::int64_t empty_count = 0;  // model species with no accepted samples
  // Invasive mean minus native mean, on each side.
  std::optional<double> group_difference_days;
  std::optional<double> reference_group_difference_days;
  ReplicationGroupStats native_group;
  ReplicationGroupStats invasive_group;
};

/// Compares model estimates against a reference table: mean absolute
/// per-species DoY error over species estimated on both sides, plus the
/// native/invasive group difference on each side.
ReplicationReport replication_report(
    const std::map<std::string, SpeciesDoYEstimate>& model_estimates,
    const std::map<std::string, SpeciesDoYEstimate>& reference_estimates,
    const std::map<std::string, ReplicationGroup>& grouping);

struct ShiftFilters {
  std::int64_t min_samples = 75;
  std::int64_t min_pre_era = 37;
  std::int64_t min_post_era = 37;
  int era_year = 1950;  // a sample collected in the era year counts as post
};

enum class ShiftClass { earlier, later, none, filtered };

const char* to_string(ShiftClass value);
std::optional<ShiftClass> shift_class_from_string(std::string_view text);

struct SpeciesShiftEstimate {
  std::string species;
  std::optional<double> slope_days_per_year;
  std::optional<double> slope_days_per_decade;  // exactly 10 x days/year
  std::optional<double> p_value;
  std::int64_t n = 0;
  std::int64_t n_pre = 0;
  std::int64_t n_post = 0;
  ShiftClass classification = ShiftClass::filtered;
  bool degenerate_fit = false;
};

/// Regresses DoY on collection year for one species, after the sample-count
/// filters. Filtered species carry counts but no regression fields.
SpeciesShiftEstimate species_shift(const std::string& species,
                                   std::span<const EventObservation> observations,
                                   const ShiftFilters& filters);

/// Groups observations by species and runs species_shift on each group;
/// output sorted by species name.
std::vector<SpeciesShiftEstimate> species_shift_all(
    std::span<const EventObservation> observations, const ShiftFilters& filters);

struct ShiftExtreme {
  std::string species;
  double slope_days_per_decade = 0.0;
};

struct ShiftAggregate {
  std::int64_t n_total = 0;
  std::int64_t n_filtered = 0;
  std::int64_t n_analyzed = 0;
  std::int64_t n_significant = 0;
  std::int64_t n_earlier = 0;
  std::int64_t n_later = 0;
  std::int64_t n_none = 0;
  std::optional<double> mean_shift_days_per_decade;
  std::optional<ShiftExtreme> min_shift;
  std::optional<ShiftExtreme> max_shift;
  bool significant_only_mean = false;
};

/// Classification counts plus the mean shift over non-filtered species (or
/// over significant species only when requested) and the slope extremes.
ShiftAggregate aggregate_shifts(std::span<const SpeciesShiftEstimate> estimates,
                                bool significant_only_mean = false);

enum class Characteristic { growth_form, nativity, wetland, seasonal_timing, flowering_duration };

const char* to_string(Characteristic value);
std::optional<Characteristic> characteristic_from_string(std::string_view text);

struct SpeciesTraits {
  std::optional<Nativity> nativity;
  std::optional<GrowthForm> growth_form;
  std::optional<WetlandStatus> wetland_status;
};

struct CategoryAssignment {
  std::map<std::string, std::string> category_of;
  std::int64_t excluded_count = 0;  // species lacking the trait / derived value
};

/// Flowering duration proxy: 2 x sample std of the species' flowering DoY.
std::optional<double> flowering_duration_days(const SpeciesDoYEstimate& estimate);

/// Assigns each species to a category for the characteristic. Trait
/// characteristics read the traits table; seasonal_timing and
/// flowering_duration derive from the DoY statistics.
CategoryAssignment categorize_species(Characteristic characteristic,
                                      std::span<const std::string> species,
                                      const std::map<std::string, SpeciesTraits>& traits,
                                      const std::map<std::string, SpeciesDoYEstimate>& doy_stats);

struct CategoryStat {
  std::string name;
  double mean_slope_days_per_year = 0.0;
  std::int64_t n_species = 0;
};

struct PairwiseComparison {
  std::string category_a;
  std::string category_b;
  std::string direction;  // earlier | later | none: sign of mean_a - mean_b
  double magnitude_days_per_year = 0.0;
  double p_value = 1.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
};

struct SkippedPair {
  std::string category_a;
  std::string category_b;
  std::string reason;
};

struct SubsetReport {
  std::string characteristic;
  std::vector<CategoryStat> categories;
  std::vector<PairwiseComparison> comparisons;
  std::vector<SkippedPair> skipped;
  std::int64_t excluded_species = 0;
};

/// Per-category mean shifts plus pairwise Welch tests over per-species slopes
/// (days/year). Pairs with fewer than 2 species on a side are skipped and
/// reported, not fatal.
SubsetReport subset_welch_table(Characteristic characteristic,
                                std::span<const SpeciesShiftEstimate> estimates,
                                const CategoryAssignment& categories);

struct TrendComparisonRow {
  double threshold = 0.0;
  std::string species;
  std::int64_t n_samples = 0;  // model-side observations behind the regression
  double slope_error = 0.0;    // |model slope - human slope|, days/year
};

struct TrendComparison {
  std::vector<TrendComparisonRow> rows;
  std::int64_t skipped = 0;  // (threshold, species) pairs lacking a regression
};

/// Per-threshold comparison of model-annotation trends against
/// human-annotation trends for a species set.
TrendComparison per_threshold_trend_comparison(
    std::span<const EventObservation> human_observations,
    const std::map<double, std::vector<EventObservation>>& model_observations_by_threshold,
    std::span<const std::string> species);

/// CSV with header species,slope_dpy,slope_dpd,p,n,n_pre,n_post,class;
/// filtered rows leave the regression fields empty.
std::string shift_table_to_csv(std::span<const SpeciesShiftEstimate> estimates);
std::vector<SpeciesShiftEstimate> shift_table_from_csv(std::istream& in);

std::string doy_stats_to_csv(const std::map<std::string, SpeciesDoYEstimate>& estimates);
std::map<std::string, SpeciesDoYEstimate> doy_stats_from_csv(std::istream& in);

std::string subset_report_to_json(const SubsetReport& report);

}  // namespace selcov::phenology
