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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selcov/io.hpp"
#include "selcov/numfmt.hpp"
#include "selcov/phenology.hpp"
#include "selcov/selective.hpp"
#include "selcov/stats.hpp"
#include "selcov/svg.hpp"
#include "selcov/synth.hpp"
#include "selcov/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace selcov;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_error, "cannot write " + path.string());
  out << content;
  if (!out) raise(Errc::io_error, "short write to " + path.string());
}

void echo_reproduce(const std::vector<std::string>& argv_copy) {
  std::cout << "reproduce:";
  for (const auto& arg : argv_copy) std::cout << ' ' << arg;
  std::cout << '\n';
}

std::string wrap_report(const std::string& command, const json& config, const json& results) {
  json j;
  j["command"] = command;
  j["config"] = config;
  j["results"] = results;
  return j.dump(2) + "\n";
}

void emit_report(const std::optional<std::string>& out_path, const std::string& text) {
  if (out_path) {
    write_file(*out_path, text);
  } else {
    std::cout << text;
  }
}

RecordFormat format_from_flag(const std::string& name) {
  if (name == "auto") return RecordFormat::auto_detect;
  if (name == "jsonl") return RecordFormat::jsonl;
  if (name == "csv") return RecordFormat::csv;
  raise(Errc::bad_format, "unknown format '" + name + "'");
}

GridSpec parse_grid_flag(const std::string& text, int class_count) {
  if (text == "auto") return GridSpec::default_for(class_count);
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    raise(Errc::bad_grid, "grid must be start:stop:step or 'auto', got '" + text + "'");
  }
  const auto start = parse_double(text.substr(0, first));
  const auto stop = parse_double(text.substr(first + 1, second - first - 1));
  const auto step = parse_double(text.substr(second + 1));
  if (!start || !stop || !step) raise(Errc::bad_grid, "grid values must be numbers: '" + text + "'");
  return GridSpec{*start, *stop, *step};
}

void report_malformed(const std::string& path, const DatasetReport& report) {
  constexpr std::int64_t kMaxListed = 20;
  std::int64_t listed = 0;
  for (const auto& malformed : report.malformed_lines) {
    if (listed++ == kMaxListed) {
      std::cerr << path << ": ... and " << (report.malformed_count - kMaxListed)
                << " more malformed lines\n";
      break;
    }
    std::cerr << path << ":" << malformed.line_number << ": skipped (" << malformed.reason
              << ")\n";
  }
}

ThresholdPolicy resolve_policy(const std::optional<std::string>& policy_path,
                               const std::optional<double>& threshold) {
  if (policy_path) return policy_from_json_text(read_file(*policy_path));
  ThresholdPolicy policy;
  policy.threshold = *threshold;
  policy.objective = {ObjectiveKind::fixed, *threshold};
  policy.achieved.threshold = *threshold;
  return policy;
}

std::vector<phenology::EventObservation> accepted_event_observations(
    std::span<const PredictionRecord> records, double threshold, int event_class,
    phenology::PhenologyTask task, std::vector<std::string>* species_universe,
    std::int64_t* missing_specimen) {
  std::vector<phenology::EventObservation> observations;
  std::map<std::string, bool> seen_species;
  for (const auto& record : records) {
    if (!record.specimen()) {
      if (missing_specimen) ++*missing_specimen;
      continue;
    }
    seen_species.emplace(record.specimen()->species, true);
    const Decision decision = decide(record.probabilities());
    if (decision.confidence < threshold || decision.predicted_class != event_class) continue;
    if (auto obs = phenology::to_event_doy(*record.specimen(), task, record.id())) {
      observations.push_back(std::move(*obs));
    }
  }
  if (species_universe) {
    for (const auto& [species, _] : seen_species) species_universe->push_back(species);
  }
  return observations;
}

struct ReferenceTable {
  std::map<std::string, phenology::SpeciesDoYEstimate> estimates;
  std::map<std::string, phenology::ReplicationGroup> grouping;
};

ReferenceTable read_reference_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) raise(Errc::empty_input, "empty reference table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "species,mean_doy,std_doy,group") {
    raise(Errc::bad_format, "reference table header must be species,mean_doy,std_doy,group");
  }
  ReferenceTable table;
  std::int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv_split(line);
    if (fields.size() != 4) {
      raise(Errc::bad_format,
            path.string() + " line " + format_int(line_number) + ": expected 4 fields");
    }
    phenology::SpeciesDoYEstimate estimate;
    estimate.species = fields[0];
    estimate.mean_doy = parse_double(fields[1]);
    estimate.std_doy = parse_double(fields[2]);
    estimate.n = estimate.mean_doy ? 1 : 0;
    if (!fields[3].empty()) {
      if (fields[3] == "native") {
        table.grouping.emplace(estimate.species, phenology::ReplicationGroup::native);
      } else if (fields[3] == "invasive") {
        table.grouping.emplace(estimate.species, phenology::ReplicationGroup::invasive);
      } else {
        raise(Errc::bad_format, path.string() + " line " + format_int(line_number) +
                                    ": group must be native or invasive");
      }
    }
    table.estimates.emplace(estimate.species, std::move(estimate));
  }
  if (table.estimates.empty()) raise(Errc::empty_input, "reference table has no rows");
  return table;
}

std::map<std::string, phenology::SpeciesTraits> read_traits_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) raise(Errc::empty_input, "empty traits table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "species,nativity,growth_form,wetland") {
    raise(Errc::bad_format, "traits table header must be species,nativity,growth_form,wetland");
  }
  std::map<std::string, phenology::SpeciesTraits> traits;
  std::int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv_split(line);
    if (fields.size() != 4) {
      raise(Errc::bad_format,
            path.string() + " line " + format_int(line_number) + ": expected 4 fields");
    }
    phenology::SpeciesTraits entry;
    auto bad = [&](const char* what) {
      raise(Errc::bad_format,
            path.string() + " line " + format_int(line_number) + ": unknown " + what);
    };
    if (!fields[1].empty()) {
      entry.nativity = nativity_from_string(fields[1]);
      if (!entry.nativity) bad("nativity");
    }
    if (!fields[2].empty()) {
      entry.growth_form = growth_form_from_string(fields[2]);
      if (!entry.growth_form) bad("growth_form");
    }
    if (!fields[3].empty()) {
      entry.wetland_status = wetland_status_from_string(fields[3]);
      if (!entry.wetland_status) bad("wetland");
    }
    traits.emplace(fields[0], entry);
  }
  return traits;
}

json group_stats_json(const phenology::ReplicationGroupStats& stats) {
  json j;
  j["n_species"] = stats.n_species;
  j["mean_of_means"] = stats.mean_of_means ? json(*stats.mean_of_means) : json();
  j["std_of_means"] = stats.std_of_means ? json(*stats.std_of_means) : json();
  return j;
}

json aggregate_to_json(const phenology::ShiftAggregate& aggregate) {
  json j;
  j["n_total"] = aggregate.n_total;
  j["n_filtered"] = aggregate.n_filtered;
  j["n_analyzed"] = aggregate.n_analyzed;
  j["n_significant"] = aggregate.n_significant;
  j["n_earlier"] = aggregate.n_earlier;
  j["n_later"] = aggregate.n_later;
  j["n_none"] = aggregate.n_none;
  j["significant_only_mean"] = aggregate.significant_only_mean;
  j["mean_shift_days_per_decade"] =
      aggregate.mean_shift_days_per_decade ? json(*aggregate.mean_shift_days_per_decade) : json();
  j["mean_shift_days_per_year"] = aggregate.mean_shift_days_per_decade
                                      ? json(*aggregate.mean_shift_days_per_decade / 10.0)
                                      : json();
  auto extreme = [](const std::optional<phenology::ShiftExtreme>& value) {
    if (!value) return json();
    return json{{"species", value->species},
                {"slope_days_per_decade", value->slope_days_per_decade},
                {"slope_days_per_year", value->slope_days_per_decade / 10.0}};
  };
  j["min_shift"] = extreme(aggregate.min_shift);
  j["max_shift"] = extreme(aggregate.max_shift);
  return j;
}

// ---- subcommand handlers ----

struct CurveOptions {
  std::string in_path;
  std::string format = "auto";
  std::string grid = "auto";
  std::string out_dir;
};

int run_curve(const CurveOptions& options) {
  IngestResult data = ingest_predictions_file(options.in_path, {format_from_flag(options.format)});
  const GridSpec grid = parse_grid_flag(options.grid, data.report.class_count);
  const CurveTable curve = sweep_curve(data.records, grid);
  write_file(fs::path(options.out_dir) / "curve.csv", curve_to_csv(curve));
  write_file(fs::path(options.out_dir) / "curve.svg", curve_to_svg(curve));
  std::cout << "records: " << data.report.record_count << " classes: " << data.report.class_count
            << " labeled: " << data.report.labeled_count
            << " malformed: " << data.report.malformed_count << '\n';
  report_malformed(options.in_path, data.report);
  std::cout << "wrote " << (fs::path(options.out_dir) / "curve.csv").string() << " and "
            << (fs::path(options.out_dir) / "curve.svg").string() << '\n';
  return 0;
}

struct SelectOptions {
  std::string curve_path;
  std::optional<double> target_accuracy;
  std::optional<double> min_coverage;
  std::optional<double> threshold;
  std::optional<std::string> out_path;
};

int run_select(const SelectOptions& options) {
  std::ifstream in(options.curve_path);
  if (!in) raise(Errc::io_error, "cannot open " + options.curve_path);
  const CurveTable curve = curve_from_csv(in);
  ThresholdPolicy policy;
  json config{{"curve", options.curve_path}};
  if (options.target_accuracy) {
    policy = select_threshold_for_accuracy(curve, *options.target_accuracy);
    config["target_accuracy"] = *options.target_accuracy;
  } else if (options.min_coverage) {
    policy = select_threshold_for_coverage(curve, *options.min_coverage);
    config["min_coverage"] = *options.min_coverage;
  } else {
    policy = policy_at_fixed_threshold(curve, *options.threshold);
    config["threshold"] = *options.threshold;
  }
  json j;
  j["command"] = "select";
  j["config"] = config;
  j["policy"] = json::parse(policy_to_json(policy));
  emit_report(options.out_path, j.dump(2) + "\n");
  std::cout << "selected threshold " << format_double(policy.threshold) << '\n';
  return 0;
}

struct AnnotateOptions {
  std::string in_path;
  std::string format = "auto";
  std::optional<std::string> policy_path;
  std::optional<double> threshold;
  std::string out_path;
};

int run_annotate(const AnnotateOptions& options) {
  IngestResult data = ingest_predictions_file(options.in_path, {format_from_flag(options.format)});
  report_malformed(options.in_path, data.report);
  const ThresholdPolicy policy = resolve_policy(options.policy_path, options.threshold);
  const auto decisions = apply_threshold(data.records, policy);
  std::int64_t accepted = 0;
  for (const auto& decision : decisions) {
    if (decision.status == AnnotationStatus::accepted) ++accepted;
  }
  std::string out;
  for (const auto& decision : decisions) {
    out += decision_to_jsonl(decision);
    out += '\n';
  }
  write_file(options.out_path, out);
  std::cout << "accepted " << accepted << " of " << decisions.size() << " at threshold "
            << format_double(policy.threshold) << '\n';
  return 0;
}

struct ReplicateOptions {
  std::string in_path;
  std::string format = "auto";
  std::string reference_path;
  std::optional<std::string> policy_path;
  std::optional<double> threshold;
  int event_class = 1;
  std::optional<std::string> out_path;
};

int run_replicate(const ReplicateOptions& options) {
  IngestResult data = ingest_predictions_file(options.in_path, {format_from_flag(options.format)});
  report_malformed(options.in_path, data.report);
  const ThresholdPolicy policy = resolve_policy(options.policy_path, options.threshold);
  const ReferenceTable reference = read_reference_csv(options.reference_path);

  std::vector<std::string> universe;
  std::int64_t missing_specimen = 0;
  const auto observations = accepted_event_observations(
      data.records, policy.threshold, options.event_class,
      phenology::PhenologyTask::fruiting_replication, &universe, &missing_specimen);
  const auto estimates = phenology::species_mean_doy(observations, universe);
  const auto report = phenology::replication_report(estimates, reference.estimates,
                                                    reference.grouping);

  json results;
  results["mean_abs_doy_error"] = report.mean_abs_doy_error;
  results["overlap_count"] = report.overlap_count;
  results["empty_count"] = report.empty_count;
  results["group_difference_days"] =
      report.group_difference_days ? json(*report.group_difference_days) : json();
  results["reference_group_difference_days"] = report.reference_group_difference_days
                                                   ? json(*report.reference_group_difference_days)
                                                   : json();
  results["native"] = group_stats_json(report.native_group);
  results["invasive"] = group_stats_json(report.invasive_group);
  results["records_without_specimen"] = missing_specimen;

  json config{{"in", options.in_path},
              {"reference", options.reference_path},
              {"threshold", policy.threshold},
              {"event_class", options.event_class}};
  emit_report(options.out_path, wrap_report("replicate", config, results));
  std::cout << "mean_abs_doy_error " << format_double(report.mean_abs_doy_error) << " over "
            << report.overlap_count << " species\n";
  return 0;
}

struct ShiftOptions {
  std::optional<std::string> in_path;
  std::string format = "auto";
  std::optional<std::string> table_path;
  double threshold = 0.5;  // the 50% minimum threshold keeps every data point
  int event_class = 1;
  std::int64_t min_samples = 75;
  std::int64_t min_pre = 37;
  std::int64_t min_post = 37;
  int era = 1950;
  bool significant_only_mean = false;
  std::string col_species = "species";
  std::string col_slope = "slope_dpy";
  std::string col_p = "p";
  std::string slope_unit = "dpy";
  std::string out_dir;
};

std::vector<phenology::SpeciesShiftEstimate> shift_estimates_from_external_table(
    const ShiftOptions& options) {
  std::ifstream in(*options.table_path);
  if (!in) raise(Errc::io_error, "cannot open " + *options.table_path);
  std::string line;
  if (!std::getline(in, line)) raise(Errc::empty_input, "empty shift table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = csv_split(line);
  auto column = [&](const std::string& name) -> size_t {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    raise(Errc::bad_format, "column '" + name + "' not found in " + *options.table_path);
  };
  const size_t species_col = column(options.col_species);
  const size_t slope_col = column(options.col_slope);
  const size_t p_col = column(options.col_p);
  const double to_dpy = options.slope_unit == "dpd" ? 0.1 : 1.0;

  std::vector<phenology::SpeciesShiftEstimate> estimates;
  std::int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv_split(line);
    if (fields.size() <= std::max({species_col, slope_col, p_col})) {
      raise(Errc::bad_format,
            *options.table_path + " line " + format_int(line_number) + ": too few fields");
    }
    phenology::SpeciesShiftEstimate estimate;
    estimate.species = fields[species_col];
    const auto slope = parse_double(fields[slope_col]);
    const auto p = parse_double(fields[p_col]);
    if (slope && p) {
      estimate.slope_days_per_year = *slope * to_dpy;
      estimate.slope_days_per_decade = 10.0 * *estimate.slope_days_per_year;
      estimate.p_value = *p;
      if (*p < phenology::kSignificanceLevel && *estimate.slope_days_per_year < 0.0) {
        estimate.classification = phenology::ShiftClass::earlier;
      } else if (*p < phenology::kSignificanceLevel && *estimate.slope_days_per_year > 0.0) {
        estimate.classification = phenology::ShiftClass::later;
      } else {
        estimate.classification = phenology::ShiftClass::none;
      }
    } else {
      estimate.classification = phenology::ShiftClass::filtered;
    }
    estimates.push_back(std::move(estimate));
  }
  if (estimates.empty()) raise(Errc::empty_input, "shift table has no rows");
  return estimates;
}

int run_shift(const ShiftOptions& options) {
  std::vector<phenology::SpeciesShiftEstimate> estimates;
  json config{{"min_samples", options.min_samples},
              {"min_pre", options.min_pre},
              {"min_post", options.min_post},
              {"era", options.era},
              {"significant_only_mean", options.significant_only_mean}};

  if (options.table_path) {
    config["table"] = *options.table_path;
    config["col_species"] = options.col_species;
    config["col_slope"] = options.col_slope;
    config["col_p"] = options.col_p;
    config["slope_unit"] = options.slope_unit;
    estimates = shift_estimates_from_external_table(options);
  } else {
    config["in"] = *options.in_path;
    config["threshold"] = options.threshold;
    config["event_class"] = options.event_class;
    IngestResult data =
        ingest_predictions_file(*options.in_path, {format_from_flag(options.format)});
    report_malformed(*options.in_path, data.report);
    std::vector<std::string> universe;
    std::int64_t missing_specimen = 0;
    const auto observations = accepted_event_observations(
        data.records, options.threshold, options.event_class,
        phenology::PhenologyTask::flowering, &universe, &missing_specimen);
    const phenology::ShiftFilters filters{options.min_samples, options.min_pre, options.min_post,
                                          options.era};
    estimates = phenology::species_shift_all(observations, filters);
    // Species present in the input but with zero accepted observations still
    // appear, as filtered rows.
    std::map<std::string, bool> with_obs;
    for (const auto& estimate : estimates) with_obs.emplace(estimate.species, true);
    for (const auto& species : universe) {
      if (!with_obs.count(species)) {
        phenology::SpeciesShiftEstimate empty;
        empty.species = species;
        estimates.push_back(std::move(empty));
      }
    }
    std::sort(estimates.begin(), estimates.end(),
              [](const auto& a, const auto& b) { return a.species < b.species; });
    write_file(fs::path(options.out_dir) / "shift.csv", phenology::shift_table_to_csv(estimates));
    write_file(fs::path(options.out_dir) / "doy_stats.csv",
               phenology::doy_stats_to_csv(phenology::species_mean_doy(observations, universe)));
  }

  const auto aggregate = phenology::aggregate_shifts(estimates, options.significant_only_mean);
  write_file(fs::path(options.out_dir) / "aggregate.json",
             wrap_report("shift", config, aggregate_to_json(aggregate)));
  std::cout << "analyzed " << aggregate.n_analyzed << " species (" << aggregate.n_filtered
            << " filtered): " << aggregate.n_significant << " significant, " << aggregate.n_earlier
            << " earlier, " << aggregate.n_later << " later\n";
  if (aggregate.mean_shift_days_per_decade) {
    std::cout << "mean shift " << format_double(*aggregate.mean_shift_days_per_decade)
              << " days/decade\n";
  }
  return 0;
}

struct SubsetsOptions {
  std::string shift_path;
  std::string characteristic = "all";
  std::optional<std::string> traits_path;
  std::optional<std::string> doy_stats_path;
  std::optional<std::string> out_path;
};

int run_subsets(const SubsetsOptions& options) {
  std::ifstream shift_in(options.shift_path);
  if (!shift_in) raise(Errc::io_error, "cannot open " + options.shift_path);
  const auto estimates = phenology::shift_table_from_csv(shift_in);

  std::map<std::string, phenology::SpeciesTraits> traits;
  if (options.traits_path) traits = read_traits_csv(*options.traits_path);
  std::map<std::string, phenology::SpeciesDoYEstimate> doy_stats;
  if (options.doy_stats_path) {
    std::ifstream in(*options.doy_stats_path);
    if (!in) raise(Errc::io_error, "cannot open " + *options.doy_stats_path);
    doy_stats = phenology::doy_stats_from_csv(in);
  }

  std::vector<std::string> species;
  for (const auto& estimate : estimates) {
    if (estimate.classification != phenology::ShiftClass::filtered) {
      species.push_back(estimate.species);
    }
  }

  std::vector<phenology::Characteristic> characteristics;
  if (options.characteristic == "all") {
    characteristics = {phenology::Characteristic::growth_form, phenology::Characteristic::nativity,
                       phenology::Characteristic::wetland,
                       phenology::Characteristic::seasonal_timing,
                       phenology::Characteristic::flowering_duration};
  } else {
    const auto parsed = phenology::characteristic_from_string(options.characteristic);
    if (!parsed) {
      raise(Errc::invalid_field, "unknown characteristic '" + options.characteristic + "'");
    }
    characteristics = {*parsed};
  }

  json reports = json::array();
  for (const auto characteristic : characteristics) {
    const auto assignment =
        phenology::categorize_species(characteristic, species, traits, doy_stats);
    const auto report = phenology::subset_welch_table(characteristic, estimates, assignment);
    reports.push_back(json::parse(phenology::subset_report_to_json(report)));
  }

  json config{{"shift", options.shift_path}, {"characteristic", options.characteristic}};
  if (options.traits_path) config["traits"] = *options.traits_path;
  if (options.doy_stats_path) config["doy_stats"] = *options.doy_stats_path;
  emit_report(options.out_path,
              wrap_report("subsets", config,
                          reports.size() == 1 ? reports.front() : json{{"reports", reports}}));
  return 0;
}

struct SynthOptions {
  std::string spec_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir;
};

int run_synth(const SynthOptions& options) {
  auto spec = synth::parse_synth_spec(read_file(options.spec_path));
  if (options.seed_override) {
    std::visit([&](auto& s) { s.seed = *options.seed_override; }, spec);
  }
  std::visit([](const auto& s) { std::cout << "seed: " << s.seed << '\n'; }, spec);
  const fs::path out_dir(options.out_dir);
  if (const auto* calibration = std::get_if<synth::CalibrationSpec>(&spec)) {
    const auto records = synth::generate_synthetic_predictions(*calibration);
    std::string out;
    for (const auto& record : records) {
      out += record_to_jsonl(record);
      out += '\n';
    }
    write_file(out_dir / "predictions.jsonl", out);
    std::cout << "wrote " << records.size() << " records to "
              << (out_dir / "predictions.jsonl").string() << '\n';
  } else {
    const auto& pheno = std::get<synth::PhenoSpec>(spec);
    const auto dataset = synth::generate_synthetic_phenology(pheno);
    std::string out;
    for (const auto& record : dataset.records) {
      out += record_to_jsonl(record);
      out += '\n';
    }
    write_file(out_dir / "records.jsonl", out);
    write_file(out_dir / "truth.csv", synth::pheno_truth_to_csv(dataset.truth));
    // True species parameters double as a replication reference when the
    // spec assigns groups.
    std::string reference = "species,mean_doy,std_doy,group\n";
    bool any_group = false;
    for (const auto& params : pheno.species) {
      if (!params.group) continue;
      any_group = true;
      reference += csv_escape(params.name) + ',' + format_double(params.mean_doy) + ',' +
                   format_double(params.doy_noise_std) + ',' +
                   (*params.group == phenology::ReplicationGroup::native ? "native" : "invasive") +
                   '\n';
    }
    if (any_group) write_file(out_dir / "reference.csv", reference);
    std::cout << "wrote " << dataset.records.size() << " records to "
              << (out_dir / "records.jsonl").string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selcov: confidence-threshold annotation sets and phenology statistics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value config file");

  std::vector<std::string> argv_copy(argv, argv + argc);
  argv_copy[0] = "selcov";

  CurveOptions curve_options;
  auto* curve_cmd =
      app.add_subcommand("curve", "sweep an accuracy/coverage curve over a threshold grid");
  curve_cmd->add_option("--in", curve_options.in_path, "labeled predictions (JSONL or CSV)")
      ->required();
  curve_cmd->add_option("--format", curve_options.format, "input format: auto|jsonl|csv")
      ->default_val("auto");
  curve_cmd->add_option("--grid", curve_options.grid, "threshold grid start:stop:step or 'auto'")
      ->default_val("auto");
  curve_cmd->add_option("--out", curve_options.out_dir, "output directory")
      ->envname("SELCOV_OUT_DIR")
      ->required();

  SelectOptions select_options;
  auto* select_cmd = app.add_subcommand("select", "pick a threshold policy from a curve");
  select_cmd->add_option("--curve", select_options.curve_path, "curve CSV from 'curve'")
      ->required();
  auto* objective_group = select_cmd->add_option_group("objective", "exactly one objective");
  objective_group->add_option("--target-accuracy", select_options.target_accuracy,
                              "smallest threshold reaching this accuracy");
  objective_group->add_option("--min-coverage", select_options.min_coverage,
                              "best accuracy while keeping at least this coverage");
  objective_group->add_option("--threshold", select_options.threshold, "fixed threshold");
  objective_group->require_option(1);
  select_cmd->add_option("--out", select_options.out_path, "policy JSON path (default: stdout)");

  AnnotateOptions annotate_options;
  auto* annotate_cmd = app.add_subcommand("annotate", "apply a threshold policy to predictions");
  annotate_cmd->add_option("--in", annotate_options.in_path, "predictions (JSONL or CSV)")
      ->required();
  annotate_cmd->add_option("--format", annotate_options.format, "input format: auto|jsonl|csv")
      ->default_val("auto");
  auto* annotate_policy = annotate_cmd->add_option_group("policy", "exactly one policy source");
  annotate_policy->add_option("--policy", annotate_options.policy_path, "policy JSON from 'select'");
  annotate_policy->add_option("--threshold", annotate_options.threshold, "fixed threshold");
  annotate_policy->require_option(1);
  annotate_cmd->add_option("--out", annotate_options.out_path, "annotation decisions JSONL")
      ->required();

  ReplicateOptions replicate_options;
  auto* replicate_cmd =
      app.add_subcommand("replicate", "fruiting-DoY study replication against a reference table");
  replicate_cmd->add_option("--in", replicate_options.in_path, "predictions with specimen metadata")
      ->required();
  replicate_cmd->add_option("--format", replicate_options.format, "input format: auto|jsonl|csv")
      ->default_val("auto");
  replicate_cmd
      ->add_option("--reference", replicate_options.reference_path,
                   "reference CSV species,mean_doy,std_doy,group")
      ->required();
  auto* replicate_policy = replicate_cmd->add_option_group("policy", "exactly one policy source");
  replicate_policy->add_option("--policy", replicate_options.policy_path, "policy JSON");
  replicate_policy->add_option("--threshold", replicate_options.threshold, "fixed threshold");
  replicate_policy->require_option(1);
  replicate_cmd->add_option("--event-class", replicate_options.event_class,
                            "class index meaning 'event present'")
      ->default_val(1);
  replicate_cmd->add_option("--out", replicate_options.out_path,
                            "report JSON path (default: stdout)");

  ShiftOptions shift_options;
  auto* shift_cmd =
      app.add_subcommand("shift", "per-species flowering shift regression and aggregate");
  auto* shift_source = shift_cmd->add_option_group("source", "exactly one input source");
  shift_source->add_option("--in", shift_options.in_path, "predictions with specimen metadata");
  shift_source->add_option("--table", shift_options.table_path,
                           "existing species-level shift CSV (aggregate only)");
  shift_source->require_option(1);
  shift_cmd->add_option("--format", shift_options.format, "input format: auto|jsonl|csv")
      ->default_val("auto");
  shift_cmd->add_option("--threshold", shift_options.threshold, "confidence threshold")
      ->default_val(0.5);
  shift_cmd->add_option("--event-class", shift_options.event_class,
                        "class index meaning 'event present'")
      ->default_val(1);
  shift_cmd->add_option("--min-samples", shift_options.min_samples, "minimum samples per species")
      ->default_val(75);
  shift_cmd->add_option("--min-pre", shift_options.min_pre, "minimum samples before the era year")
      ->default_val(37);
  shift_cmd->add_option("--min-post", shift_options.min_post, "minimum samples from the era year on")
      ->default_val(37);
  shift_cmd->add_option("--era", shift_options.era, "era boundary year")->default_val(1950);
  shift_cmd->add_flag("--significant-only-mean", shift_options.significant_only_mean,
                      "average the mean shift over significant species only");
  shift_cmd->add_option("--col-species", shift_options.col_species,
                        "species column name for --table");
  shift_cmd->add_option("--col-slope", shift_options.col_slope, "slope column name for --table");
  shift_cmd->add_option("--col-p", shift_options.col_p, "p-value column name for --table");
  shift_cmd->add_option("--slope-unit", shift_options.slope_unit,
                        "slope unit in --table: dpy (days/year) or dpd (days/decade)")
      ->check(CLI::IsMember({"dpy", "dpd"}));
  shift_cmd->add_option("--out", shift_options.out_dir, "output directory")
      ->envname("SELCOV_OUT_DIR")
      ->required();

  SubsetsOptions subsets_options;
  auto* subsets_cmd =
      app.add_subcommand("subsets", "per-characteristic category means and Welch tests");
  subsets_cmd->add_option("--shift", subsets_options.shift_path, "shift CSV from 'shift'")
      ->required();
  subsets_cmd
      ->add_option("--characteristic", subsets_options.characteristic,
                   "growth_form|nativity|wetland|seasonal_timing|flowering_duration|all")
      ->default_val("all");
  subsets_cmd->add_option("--traits", subsets_options.traits_path,
                          "traits CSV species,nativity,growth_form,wetland");
  subsets_cmd->add_option("--doy-stats", subsets_options.doy_stats_path,
                          "DoY stats CSV from 'shift' (for derived characteristics)");
  subsets_cmd->add_option("--out", subsets_options.out_path, "report JSON path (default: stdout)");

  SynthOptions synth_options;
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic datasets from a spec file");
  synth_cmd->add_option("--spec", synth_options.spec_path, "synth spec JSON")->required();
  synth_cmd->add_option("--seed", synth_options.seed_override, "override the spec seed");
  synth_cmd->add_option("--out", synth_options.out_dir, "output directory")
      ->envname("SELCOV_OUT_DIR")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the offending flag
    return 1;
  }

  try {
    int code = 0;
    if (app.got_subcommand(curve_cmd)) {
      code = run_curve(curve_options);
    } else if (app.got_subcommand(select_cmd)) {
      code = run_select(select_options);
    } else if (app.got_subcommand(annotate_cmd)) {
      code = run_annotate(annotate_options);
    } else if (app.got_subcommand(replicate_cmd)) {
      code = run_replicate(replicate_options);
    } else if (app.got_subcommand(shift_cmd)) {
      code = run_shift(shift_options);
    } else if (app.got_subcommand(subsets_cmd)) {
      code = run_subsets(subsets_options);
    } else if (app.got_subcommand(synth_cmd)) {
      code = run_synth(synth_options);
    }
    echo_reproduce(argv_copy);
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
