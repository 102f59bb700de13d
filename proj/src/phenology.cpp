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

#include "selcov/phenology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include <Eigen/Core>
#include <json.hpp>

#include "selcov/io.hpp"
#include "selcov/numfmt.hpp"
#include "selcov/stats.hpp"

namespace selcov::phenology {

namespace {

using nlohmann::json;

struct MeanStd {
  double mean = 0.0;
  std::optional<double> std_dev;
};

MeanStd mean_and_sample_std(std::span<const double> values) {
  const Eigen::Map<const Eigen::VectorXd> v(values.data(),
                                            static_cast<Eigen::Index>(values.size()));
  MeanStd out;
  out.mean = v.mean();
  if (values.size() >= 2) {
    out.std_dev = std::sqrt((v.array() - out.mean).matrix().squaredNorm() /
                            static_cast<double>(values.size() - 1));
  }
  return out;
}

std::map<std::string, std::vector<const EventObservation*>> group_by_species(
    std::span<const EventObservation> observations) {
  std::map<std::string, std::vector<const EventObservation*>> groups;
  for (const auto& obs : observations) {
    groups[obs.species].push_back(&obs);
  }
  return groups;
}

std::optional<double> regression_slope(std::span<const EventObservation* const> observations,
                                       std::int64_t* n_out) {
  if (n_out) *n_out = static_cast<std::int64_t>(observations.size());
  if (observations.size() < 3) return std::nullopt;
  Eigen::VectorXd xs(static_cast<Eigen::Index>(observations.size()));
  Eigen::VectorXd ys(static_cast<Eigen::Index>(observations.size()));
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    xs[i] = static_cast<double>(observations[static_cast<size_t>(i)]->year);
    ys[i] = observations[static_cast<size_t>(i)]->doy;
  }
  try {
    return stats::linear_regression(xs, ys).slope;
  } catch (const Error&) {
    return std::nullopt;  // constant years; no trend estimable
  }
}

}  // namespace

std::optional<EventObservation> to_event_doy(const SpecimenMeta& specimen, PhenologyTask task,
                                             const std::string& record_id) {
  if (!specimen.collection_date.valid()) {
    raise(Errc::invalid_date, "invalid collection date for record '" + record_id + "'");
  }
  const Date& date = specimen.collection_date;
  double doy = static_cast<double>(date.day_of_year());
  if (task == PhenologyTask::fruiting_replication) {
    // Fruit seen in January/February is attributed to the previous season;
    // March-May samples are discarded.
    if (date.month <= 2) {
      doy += 365.0;
    } else if (date.month <= 5) {
      return std::nullopt;
    }
  }
  return EventObservation{specimen.species, date.year, doy, record_id};
}

std::map<std::string, SpeciesDoYEstimate> species_mean_doy(
    std::span<const EventObservation> observations,
    std::span<const std::string> species_universe) {
  std::map<std::string, std::vector<double>> doys;
  for (const auto& obs : observations) {
    doys[obs.species].push_back(obs.doy);
  }
  for (const auto& species : species_universe) {
    doys.try_emplace(species);
  }
  std::map<std::string, SpeciesDoYEstimate> estimates;
  for (const auto& [species, values] : doys) {
    SpeciesDoYEstimate estimate;
    estimate.species = species;
    estimate.n = static_cast<std::int64_t>(values.size());
    if (!values.empty()) {
      const MeanStd stats = mean_and_sample_std(values);
      estimate.mean_doy = stats.mean;
      estimate.std_doy = stats.std_dev;
    }
    estimates.emplace(species, std::move(estimate));
  }
  return estimates;
}

namespace {

ReplicationGroupStats group_stats(const std::map<std::string, SpeciesDoYEstimate>& estimates,
                                  const std::map<std::string, ReplicationGroup>& grouping,
                                  ReplicationGroup group) {
  std::vector<double> means;
  for (const auto& [species, estimate] : estimates) {
    if (!estimate.mean_doy) continue;
    const auto it = grouping.find(species);
    if (it == grouping.end() || it->second != group) continue;
    means.push_back(*estimate.mean_doy);
  }
  ReplicationGroupStats stats;
  stats.n_species = static_cast<std::int64_t>(means.size());
  if (!means.empty()) {
    const MeanStd ms = mean_and_sample_std(means);
    stats.mean_of_means = ms.mean;
    stats.std_of_means = ms.std_dev;
  }
  return stats;
}

}  // namespace

ReplicationReport replication_report(
    const std::map<std::string, SpeciesDoYEstimate>& model_estimates,
    const std::map<std::string, SpeciesDoYEstimate>& reference_estimates,
    const std::map<std::string, ReplicationGroup>& grouping) {
  if (reference_estimates.empty()) {
    raise(Errc::no_overlap, "reference estimate table is empty");
  }
  double abs_error_sum = 0.0;
  std::int64_t overlap = 0;
  for (const auto& [species, reference] : reference_estimates) {
    if (!reference.mean_doy) continue;
    const auto it = model_estimates.find(species);
    if (it == model_estimates.end() || !it->second.mean_doy) continue;
    abs_error_sum += std::abs(*it->second.mean_doy - *reference.mean_doy);
    ++overlap;
  }
  if (overlap == 0) {
    raise(Errc::no_overlap, "no species with estimates on both sides");
  }

  ReplicationReport report;
  report.mean_abs_doy_error = abs_error_sum / static_cast<double>(overlap);
  report.overlap_count = overlap;
  for (const auto& [species, estimate] : model_estimates) {
    if (estimate.n == 0) ++report.empty_count;
  }
  report.native_group = group_stats(model_estimates, grouping, ReplicationGroup::native);
  report.invasive_group = group_stats(model_estimates, grouping, ReplicationGroup::invasive);
  if (report.native_group.mean_of_means && report.invasive_group.mean_of_means) {
    report.group_difference_days =
        *report.invasive_group.mean_of_means - *report.native_group.mean_of_means;
  }
  const auto ref_native = group_stats(reference_estimates, grouping, ReplicationGroup::native);
  const auto ref_invasive = group_stats(reference_estimates, grouping, ReplicationGroup::invasive);
  if (ref_native.mean_of_means && ref_invasive.mean_of_means) {
    report.reference_group_difference_days =
        *ref_invasive.mean_of_means - *ref_native.mean_of_means;
  }
  return report;
}

const char* to_string(ShiftClass value) {
  switch (value) {
    case ShiftClass::earlier: return "earlier";
    case ShiftClass::later: return "later";
    case ShiftClass::none: return "none";
    case ShiftClass::filtered: return "filtered";
  }
  return "filtered";
}

std::optional<ShiftClass> shift_class_from_string(std::string_view text) {
  if (text == "earlier") return ShiftClass::earlier;
  if (text == "later") return ShiftClass::later;
  if (text == "none") return ShiftClass::none;
  if (text == "filtered") return ShiftClass::filtered;
  return std::nullopt;
}

SpeciesShiftEstimate species_shift(const std::string& species,
                                   std::span<const EventObservation> observations,
                                   const ShiftFilters& filters) {
  SpeciesShiftEstimate estimate;
  estimate.species = species;
  estimate.n = static_cast<std::int64_t>(observations.size());
  for (const auto& obs : observations) {
    if (obs.year < filters.era_year) {
      ++estimate.n_pre;
    } else {
      ++estimate.n_post;
    }
  }
  if (estimate.n < filters.min_samples || estimate.n_pre < filters.min_pre_era ||
      estimate.n_post < filters.min_post_era) {
    estimate.classification = ShiftClass::filtered;
    return estimate;
  }

  Eigen::VectorXd years(static_cast<Eigen::Index>(observations.size()));
  Eigen::VectorXd doys(static_cast<Eigen::Index>(observations.size()));
  for (Eigen::Index i = 0; i < years.size(); ++i) {
    years[i] = static_cast<double>(observations[static_cast<size_t>(i)].year);
    doys[i] = observations[static_cast<size_t>(i)].doy;
  }
  // The pre/post filters guarantee at least two distinct years, so the
  // regression preconditions hold.
  const stats::RegressionResult fit = stats::linear_regression(years, doys);
  estimate.slope_days_per_year = fit.slope;
  estimate.slope_days_per_decade = 10.0 * fit.slope;
  estimate.p_value = fit.p_value;
  estimate.degenerate_fit = fit.degenerate_fit;
  if (fit.p_value < kSignificanceLevel && fit.slope < 0.0) {
    estimate.classification = ShiftClass::earlier;
  } else if (fit.p_value < kSignificanceLevel && fit.slope > 0.0) {
    estimate.classification = ShiftClass::later;
  } else {
    estimate.classification = ShiftClass::none;
  }
  return estimate;
}

std::vector<SpeciesShiftEstimate> species_shift_all(
    std::span<const EventObservation> observations, const ShiftFilters& filters) {
  std::vector<SpeciesShiftEstimate> estimates;
  for (const auto& [species, group] : group_by_species(observations)) {
    std::vector<EventObservation> obs;
    obs.reserve(group.size());
    for (const auto* p : group) obs.push_back(*p);
    estimates.push_back(species_shift(species, obs, filters));
  }
  return estimates;
}

ShiftAggregate aggregate_shifts(std::span<const SpeciesShiftEstimate> estimates,
                                bool significant_only_mean) {
  ShiftAggregate aggregate;
  aggregate.significant_only_mean = significant_only_mean;
  aggregate.n_total = static_cast<std::int64_t>(estimates.size());
  double shift_sum = 0.0;
  std::int64_t shift_count = 0;
  for (const auto& estimate : estimates) {
    switch (estimate.classification) {
      case ShiftClass::filtered: ++aggregate.n_filtered; continue;
      case ShiftClass::earlier: ++aggregate.n_earlier; break;
      case ShiftClass::later: ++aggregate.n_later; break;
      case ShiftClass::none: ++aggregate.n_none; break;
    }
    ++aggregate.n_analyzed;
    if (!estimate.slope_days_per_decade) continue;  // tolerate partial external tables
    const double slope_dpd = *estimate.slope_days_per_decade;
    if (!significant_only_mean || estimate.classification != ShiftClass::none) {
      shift_sum += slope_dpd;
      ++shift_count;
    }
    if (!aggregate.min_shift || slope_dpd < aggregate.min_shift->slope_days_per_decade) {
      aggregate.min_shift = ShiftExtreme{estimate.species, slope_dpd};
    }
    if (!aggregate.max_shift || slope_dpd > aggregate.max_shift->slope_days_per_decade) {
      aggregate.max_shift = ShiftExtreme{estimate.species, slope_dpd};
    }
  }
  aggregate.n_significant = aggregate.n_earlier + aggregate.n_later;
  if (shift_count > 0) {
    aggregate.mean_shift_days_per_decade = shift_sum / static_cast<double>(shift_count);
  }
  return aggregate;
}

const char* to_string(Characteristic value) {
  switch (value) {
    case Characteristic::growth_form: return "growth_form";
    case Characteristic::nativity: return "nativity";
    case Characteristic::wetland: return "wetland";
    case Characteristic::seasonal_timing: return "seasonal_timing";
    case Characteristic::flowering_duration: return "flowering_duration";
  }
  return "growth_form";
}

std::optional<Characteristic> characteristic_from_string(std::string_view text) {
  if (text == "growth_form") return Characteristic::growth_form;
  if (text == "nativity") return Characteristic::nativity;
  if (text == "wetland") return Characteristic::wetland;
  if (text == "seasonal_timing") return Characteristic::seasonal_timing;
  if (text == "flowering_duration") return Characteristic::flowering_duration;
  return std::nullopt;
}

std::optional<double> flowering_duration_days(const SpeciesDoYEstimate& estimate) {
  if (!estimate.std_doy) return std::nullopt;
  return 2.0 * *estimate.std_doy;
}

CategoryAssignment categorize_species(Characteristic characteristic,
                                      std::span<const std::string> species,
                                      const std::map<std::string, SpeciesTraits>& traits,
                                      const std::map<std::string, SpeciesDoYEstimate>& doy_stats) {
  CategoryAssignment assignment;
  for (const auto& name : species) {
    std::optional<std::string> category;
    switch (characteristic) {
      case Characteristic::growth_form:
      case Characteristic::nativity:
      case Characteristic::wetland: {
        const auto it = traits.find(name);
        if (it != traits.end()) {
          if (characteristic == Characteristic::growth_form && it->second.growth_form) {
            category = to_string(*it->second.growth_form);
          } else if (characteristic == Characteristic::nativity && it->second.nativity) {
            category = to_string(*it->second.nativity);
          } else if (characteristic == Characteristic::wetland && it->second.wetland_status) {
            category = to_string(*it->second.wetland_status);
          }
        }
        break;
      }
      case Characteristic::seasonal_timing: {
        const auto it = doy_stats.find(name);
        if (it != doy_stats.end() && it->second.mean_doy) {
          category = *it->second.mean_doy <= kEarlySeasonMaxDoy ? "early" : "late";
        }
        break;
      }
      case Characteristic::flowering_duration: {
        const auto it = doy_stats.find(name);
        if (it != doy_stats.end()) {
          if (const auto duration = flowering_duration_days(it->second)) {
            category = *duration <= kNarrowDurationMaxDays ? "narrow" : "broad";
          }
        }
        break;
      }
    }
    if (category) {
      assignment.category_of.emplace(name, std::move(*category));
    } else {
      ++assignment.excluded_count;
    }
  }
  return assignment;
}

SubsetReport subset_welch_table(Characteristic characteristic,
                                std::span<const SpeciesShiftEstimate> estimates,
                                const CategoryAssignment& categories) {
  SubsetReport report;
  report.characteristic = to_string(characteristic);
  report.excluded_species = categories.excluded_count;

  std::map<std::string, std::vector<double>> slopes_by_category;
  for (const auto& estimate : estimates) {
    if (!estimate.slope_days_per_year) continue;  // filtered species carry no slope
    const auto it = categories.category_of.find(estimate.species);
    if (it == categories.category_of.end()) continue;
    slopes_by_category[it->second].push_back(*estimate.slope_days_per_year);
  }

  for (const auto& [name, slopes] : slopes_by_category) {
    const Eigen::Map<const Eigen::VectorXd> v(slopes.data(),
                                              static_cast<Eigen::Index>(slopes.size()));
    report.categories.push_back(
        CategoryStat{name, v.mean(), static_cast<std::int64_t>(slopes.size())});
  }

  for (size_t i = 0; i < report.categories.size(); ++i) {
    for (size_t j = i + 1; j < report.categories.size(); ++j) {
      const auto& a = report.categories[i];
      const auto& b = report.categories[j];
      if (a.n_species < 2 || b.n_species < 2) {
        report.skipped.push_back(SkippedPair{a.name, b.name, "TooFewSpecies"});
        continue;
      }
      const auto& slopes_a = slopes_by_category.at(a.name);
      const auto& slopes_b = slopes_by_category.at(b.name);
      const Eigen::Map<const Eigen::VectorXd> va(slopes_a.data(),
                                                 static_cast<Eigen::Index>(slopes_a.size()));
      const Eigen::Map<const Eigen::VectorXd> vb(slopes_b.data(),
                                                 static_cast<Eigen::Index>(slopes_b.size()));
      stats::WelchResult welch;
      try {
        welch = stats::welch_t_test(va, vb);
      } catch (const Error& e) {
        report.skipped.push_back(SkippedPair{a.name, b.name, errc_name(e.code())});
        continue;
      }
      PairwiseComparison comparison;
      comparison.category_a = a.name;
      comparison.category_b = b.name;
      const double mean_diff = a.mean_slope_days_per_year - b.mean_slope_days_per_year;
      comparison.direction = mean_diff < 0.0 ? "earlier" : (mean_diff > 0.0 ? "later" : "none");
      comparison.magnitude_days_per_year = std::abs(mean_diff);
      comparison.p_value = welch.p_value;
      comparison.n_a = a.n_species;
      comparison.n_b = b.n_species;
      report.comparisons.push_back(std::move(comparison));
    }
  }
  return report;
}

TrendComparison per_threshold_trend_comparison(
    std::span<const EventObservation> human_observations,
    const std::map<double, std::vector<EventObservation>>& model_observations_by_threshold,
    std::span<const std::string> species) {
  const auto human_groups = group_by_species(human_observations);

  std::map<std::string, double> human_slope;
  for (const auto& name : species) {
    const auto it = human_groups.find(name);
    if (it == human_groups.end()) continue;
    if (const auto slope = regression_slope(it->second, nullptr)) {
      human_slope.emplace(name, *slope);
    }
  }

  TrendComparison comparison;
  for (const auto& [threshold, model_obs] : model_observations_by_threshold) {
    const auto model_groups = group_by_species(model_obs);
    for (const auto& name : species) {
      const auto human_it = human_slope.find(name);
      const auto model_it = model_groups.find(name);
      std::int64_t n_samples = 0;
      std::optional<double> model_slope;
      if (model_it != model_groups.end()) {
        model_slope = regression_slope(model_it->second, &n_samples);
      }
      if (human_it == human_slope.end() || !model_slope) {
        ++comparison.skipped;
        continue;
      }
      comparison.rows.push_back(TrendComparisonRow{
          threshold, name, n_samples, std::abs(*model_slope - human_it->second)});
    }
  }
  if (comparison.rows.empty()) {
    raise(Errc::no_overlap, "no species with trends on both annotation sources");
  }
  return comparison;
}

std::string shift_table_to_csv(std::span<const SpeciesShiftEstimate> estimates) {
  std::string out = "species,slope_dpy,slope_dpd,p,n,n_pre,n_post,class\n";
  for (const auto& estimate : estimates) {
    out += csv_escape(estimate.species);
    out += ',';
    if (estimate.slope_days_per_year) out += format_double(*estimate.slope_days_per_year);
    out += ',';
    if (estimate.slope_days_per_decade) out += format_double(*estimate.slope_days_per_decade);
    out += ',';
    if (estimate.p_value) out += format_double(*estimate.p_value);
    out += ',';
    out += format_int(estimate.n);
    out += ',';
    out += format_int(estimate.n_pre);
    out += ',';
    out += format_int(estimate.n_post);
    out += ',';
    out += to_string(estimate.classification);
    out += '\n';
  }
  return out;
}

std::vector<SpeciesShiftEstimate> shift_table_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) raise(Errc::empty_input, "empty shift table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "species,slope_dpy,slope_dpd,p,n,n_pre,n_post,class") {
    raise(Errc::bad_format, "unexpected shift table header: " + line);
  }
  std::vector<SpeciesShiftEstimate> estimates;
  std::int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv_split(line);
    if (fields.size() != 8) {
      raise(Errc::bad_format, "shift table line " + format_int(line_number) + ": expected 8 fields");
    }
    SpeciesShiftEstimate estimate;
    estimate.species = fields[0];
    estimate.slope_days_per_year = parse_double(fields[1]);
    estimate.slope_days_per_decade = parse_double(fields[2]);
    estimate.p_value = parse_double(fields[3]);
    const auto n = parse_int(fields[4]);
    const auto n_pre = parse_int(fields[5]);
    const auto n_post = parse_int(fields[6]);
    const auto cls = shift_class_from_string(fields[7]);
    if (!n || !n_pre || !n_post || !cls) {
      raise(Errc::bad_format, "shift table line " + format_int(line_number) + ": bad field");
    }
    estimate.n = *n;
    estimate.n_pre = *n_pre;
    estimate.n_post = *n_post;
    estimate.classification = *cls;
    estimates.push_back(std::move(estimate));
  }
  if (estimates.empty()) raise(Errc::empty_input, "shift table has no rows");
  return estimates;
}

std::string doy_stats_to_csv(const std::map<std::string, SpeciesDoYEstimate>& estimates) {
  std::string out = "species,mean_doy,std_doy,n\n";
  for (const auto& [species, estimate] : estimates) {
    out += csv_escape(species);
    out += ',';
    if (estimate.mean_doy) out += format_double(*estimate.mean_doy);
    out += ',';
    if (estimate.std_doy) out += format_double(*estimate.std_doy);
    out += ',';
    out += format_int(estimate.n);
    out += '\n';
  }
  return out;
}

std::map<std::string, SpeciesDoYEstimate> doy_stats_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) raise(Errc::empty_input, "empty DoY stats table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "species,mean_doy,std_doy,n") {
    raise(Errc::bad_format, "unexpected DoY stats header: " + line);
  }
  std::map<std::string, SpeciesDoYEstimate> estimates;
  std::int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv_split(line);
    if (fields.size() != 4) {
      raise(Errc::bad_format, "DoY stats line " + format_int(line_number) + ": expected 4 fields");
    }
    SpeciesDoYEstimate estimate;
    estimate.species = fields[0];
    estimate.mean_doy = parse_double(fields[1]);
    estimate.std_doy = parse_double(fields[2]);
    const auto n = parse_int(fields[3]);
    if (!n) raise(Errc::bad_format, "DoY stats line " + format_int(line_number) + ": bad n");
    estimate.n = *n;
    estimates.emplace(estimate.species, std::move(estimate));
  }
  return estimates;
}

std::string subset_report_to_json(const SubsetReport& report) {
  json j;
  j["characteristic"] = report.characteristic;
  j["excluded_species"] = report.excluded_species;
  j["categories"] = json::array();
  for (const auto& category : report.categories) {
    j["categories"].push_back({{"name", category.name},
                               {"mean_slope_days_per_year", category.mean_slope_days_per_year},
                               {"mean_slope_days_per_decade",
                                10.0 * category.mean_slope_days_per_year},
                               {"n_species", category.n_species}});
  }
  j["comparisons"] = json::array();
  for (const auto& comparison : report.comparisons) {
    j["comparisons"].push_back({{"comparison", comparison.category_a + " vs " + comparison.category_b},
                                {"direction", comparison.direction},
                                {"magnitude_days_per_year", comparison.magnitude_days_per_year},
                                {"magnitude_days_per_decade", 10.0 * comparison.magnitude_days_per_year},
                                {"p_value", comparison.p_value},
                                {"n_a", comparison.n_a},
                                {"n_b", comparison.n_b}});
  }
  j["skipped_pairs"] = json::array();
  for (const auto& skipped : report.skipped) {
    j["skipped_pairs"].push_back({{"comparison", skipped.category_a + " vs " + skipped.category_b},
                                  {"reason", skipped.reason}});
  }
  return j.dump(2);
}

}  // namespace selcov::phenology
