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

#include "selcov/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "selcov/io.hpp"
#include "selcov/numfmt.hpp"

namespace selcov::synth {

namespace {

using nlohmann::json;

// Fixed draw layout per record so the counter space partitions cleanly.
constexpr std::uint64_t kCalibrationStride = 4;
constexpr std::uint64_t kPhenoStride = 20;

// Correct model annotations draw confidence uniformly on [0.9, 1), so 10% of
// them clear the 0.99 threshold. Flipped annotations put only this much mass
// into [0.99, 1) (rest uniform on [0.5, 0.99)), which pins the accepted flip
// rate at 0.99 to eps * q / (eps * q + (1 - eps) * 0.1) -- about eps / 5,
// and <= 3% at eps = 15%.
constexpr double kCorrectConfidenceLo = 0.9;
constexpr double kFlipHighTailMass = 0.0175;
constexpr double kFlipThreshold = 0.99;

std::string padded_id(const char* prefix, std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%07lld", prefix, static_cast<long long>(index));
  return buf;
}

}  // namespace

std::uint64_t CounterRng::value_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::next_gaussian() {
  double sum = 0.0;
  for (int i = 0; i < 12; ++i) sum += next_double();
  return sum - 6.0;
}

std::int64_t CounterRng::next_below(std::int64_t bound) {
  const auto value = static_cast<std::int64_t>(next_double() * static_cast<double>(bound));
  return std::min(value, bound - 1);
}

void CalibrationSpec::validate() const {
  if (class_count < 2) raise(Errc::bad_spec, "class_count must be >= 2");
  if (record_count < 0) raise(Errc::bad_spec, "record_count must be >= 0");
  const double floor = 1.0 / static_cast<double>(class_count);
  if (!(confidence_lo >= floor) || !(confidence_lo < confidence_hi) || !(confidence_hi <= 1.0)) {
    raise(Errc::bad_spec, "need 1/K <= lo < hi <= 1, got lo=" + format_double(confidence_lo) +
                              " hi=" + format_double(confidence_hi));
  }
  if (kind != CalibrationKind::perfectly_calibrated && !(gamma > 0.0)) {
    raise(Errc::bad_spec, "gamma must be > 0");
  }
}

double correctness_probability(const CalibrationSpec& spec, double confidence) {
  switch (spec.kind) {
    case CalibrationKind::perfectly_calibrated:
      return confidence;
    case CalibrationKind::overconfident:
      return std::clamp(std::pow(confidence, spec.gamma), 0.0, 1.0);
    case CalibrationKind::underconfident:
      return std::clamp(std::pow(confidence, 1.0 / spec.gamma), 0.0, 1.0);
  }
  raise(Errc::bad_spec, "unknown calibration kind");
}

std::vector<PredictionRecord> generate_synthetic_predictions(const CalibrationSpec& spec) {
  spec.validate();
  std::vector<PredictionRecord> records;
  records.reserve(static_cast<size_t>(spec.record_count));
  const int k = spec.class_count;
  for (std::int64_t i = 0; i < spec.record_count; ++i) {
    CounterRng rng(spec.seed, static_cast<std::uint64_t>(i) * kCalibrationStride);
    const double confidence =
        spec.confidence_lo + rng.next_double() * (spec.confidence_hi - spec.confidence_lo);
    const auto top_class = static_cast<int>(rng.next_below(k));
    std::vector<double> probabilities(
        static_cast<size_t>(k), (1.0 - confidence) / static_cast<double>(k - 1));
    probabilities[static_cast<size_t>(top_class)] = confidence;
    // decide() owns tie-breaking; use its verdict so the planted label always
    // refers to the class the pipeline will predict.
    const int predicted = decide(probabilities).predicted_class;
    int label = predicted;
    const bool correct = rng.next_double() < correctness_probability(spec, confidence);
    const auto wrong_draw = static_cast<int>(rng.next_below(k - 1));
    if (!correct) label = wrong_draw >= predicted ? wrong_draw + 1 : wrong_draw;
    records.push_back(
        PredictionRecord::make(padded_id("synth", i), std::move(probabilities), label));
  }
  return records;
}

std::vector<CurveExpectation> analytic_curve_oracle(const CalibrationSpec& spec,
                                                    std::span<const double> grid) {
  spec.validate();
  double exponent;
  switch (spec.kind) {
    case CalibrationKind::perfectly_calibrated: exponent = 1.0; break;
    case CalibrationKind::overconfident: exponent = spec.gamma; break;
    case CalibrationKind::underconfident: exponent = 1.0 / spec.gamma; break;
    default: raise(Errc::intractable, "no closed form for this calibration kind");
  }
  const double lo = spec.confidence_lo;
  const double hi = spec.confidence_hi;
  std::vector<CurveExpectation> expectations;
  expectations.reserve(grid.size());
  for (double t : grid) {
    CurveExpectation expectation;
    expectation.threshold = t;
    const double s = std::max(t, lo);
    if (s >= hi) {
      expectation.coverage = 0.0;
    } else {
      expectation.coverage = t <= lo ? 1.0 : (hi - s) / (hi - lo);
      if (exponent == 1.0) {
        expectation.accuracy = 0.5 * (s + hi);
      } else {
        // E[c^g | c >= s] for c uniform on [s, hi).
        const double g1 = exponent + 1.0;
        expectation.accuracy =
            (std::pow(hi, g1) - std::pow(s, g1)) / (g1 * (hi - s));
      }
    }
    expectations.push_back(expectation);
  }
  return expectations;
}

void PhenoSpec::validate() const {
  if (!(year_lo <= year_hi)) raise(Errc::bad_spec, "year_lo must be <= year_hi");
  if (year_lo < 1700 || year_hi > 2100) {
    raise(Errc::bad_spec, "years must lie in [1700, 2100]");
  }
  if (!(label_noise_rate >= 0.0) || !(label_noise_rate < 0.5)) {
    raise(Errc::bad_spec, "label_noise_rate must be in [0, 0.5)");
  }
  if (!(nonevent_fraction >= 0.0) || !(nonevent_fraction <= 1.0)) {
    raise(Errc::bad_spec, "nonevent_fraction must be in [0, 1]");
  }
  for (const auto& params : species) {
    if (params.name.empty()) raise(Errc::bad_spec, "species name must not be empty");
    if (params.samples < 0) raise(Errc::bad_spec, "samples must be >= 0");
    if (!(params.doy_noise_std >= 0.0)) raise(Errc::bad_spec, "doy_noise_std must be >= 0");
    if (!(params.mean_doy >= 1.0) || !(params.mean_doy <= 366.0)) {
      raise(Errc::bad_spec, "mean_doy must be in [1, 366]");
    }
  }
}

PhenoDataset generate_synthetic_phenology(const PhenoSpec& spec) {
  spec.validate();
  PhenoDataset dataset;
  const double year_mid = 0.5 * (static_cast<double>(spec.year_lo) + spec.year_hi);
  const std::int64_t year_span = static_cast<std::int64_t>(spec.year_hi) - spec.year_lo + 1;

  std::int64_t record_index = 0;
  for (const auto& params : spec.species) {
    for (std::int64_t s = 0; s < params.samples; ++s, ++record_index) {
      CounterRng rng(spec.seed, static_cast<std::uint64_t>(record_index) * kPhenoStride);
      const bool is_event = rng.next_double() >= spec.nonevent_fraction;
      const int year = spec.year_lo + static_cast<int>(rng.next_below(year_span));

      double doy;
      if (is_event) {
        doy = params.mean_doy +
              params.slope_days_per_year * (static_cast<double>(year) - year_mid) +
              params.doy_noise_std * rng.next_gaussian();
      } else {
        // Non-event specimens are collected at an arbitrary point in the year.
        doy = 1.0 + rng.next_double() * 364.0;
        rng = CounterRng(spec.seed,
                         static_cast<std::uint64_t>(record_index) * kPhenoStride + 14);
      }
      const int doy_int = static_cast<int>(std::clamp(std::llround(doy), 1LL, 365LL));

      const bool flipped = rng.next_double() < spec.label_noise_rate;
      const bool model_event = flipped ? !is_event : is_event;
      double confidence;
      if (!flipped) {
        confidence = kCorrectConfidenceLo + (1.0 - kCorrectConfidenceLo) * rng.next_double();
      } else if (rng.next_double() < kFlipHighTailMass) {
        confidence = kFlipThreshold + (1.0 - kFlipThreshold) * rng.next_double();
      } else {
        confidence = 0.5 + (kFlipThreshold - 0.5) * rng.next_double();
      }

      std::vector<double> probabilities(2);
      probabilities[model_event ? kEventClass : 1 - kEventClass] = confidence;
      probabilities[model_event ? 1 - kEventClass : kEventClass] = 1.0 - confidence;

      SpecimenMeta specimen;
      specimen.species = params.name;
      specimen.collection_date = Date::from_day_of_year(year, doy_int);
      if (params.group) {
        specimen.nativity = *params.group == phenology::ReplicationGroup::native
                                ? Nativity::native
                                : Nativity::introduced;
      }

      std::string id = padded_id("pheno", record_index);
      dataset.truth.push_back(PhenoTruth{id, params.name, year, doy, is_event});
      dataset.records.push_back(PredictionRecord::make(
          std::move(id), std::move(probabilities), is_event ? kEventClass : 1 - kEventClass,
          std::move(specimen)));
    }
  }
  return dataset;
}

std::vector<phenology::EventObservation> truth_event_observations(
    std::span<const PhenoTruth> truth) {
  std::vector<phenology::EventObservation> observations;
  for (const auto& row : truth) {
    if (!row.is_event) continue;
    observations.push_back(
        phenology::EventObservation{row.species, row.year, row.true_doy, row.record_id});
  }
  return observations;
}

std::string pheno_truth_to_csv(std::span<const PhenoTruth> truth) {
  std::string out = "record_id,species,year,true_doy,event\n";
  for (const auto& row : truth) {
    out += csv_escape(row.record_id);
    out += ',';
    out += csv_escape(row.species);
    out += ',';
    out += format_int(row.year);
    out += ',';
    out += format_double(row.true_doy);
    out += ',';
    out += row.is_event ? '1' : '0';
    out += '\n';
  }
  return out;
}

namespace {

CalibrationKind calibration_kind_from(const std::string& name) {
  if (name == "perfectly_calibrated") return CalibrationKind::perfectly_calibrated;
  if (name == "overconfident") return CalibrationKind::overconfident;
  if (name == "underconfident") return CalibrationKind::underconfident;
  raise(Errc::bad_spec, "unknown calibration kind '" + name + "'");
}

}  // namespace

SynthSpec parse_synth_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::bad_spec, std::string("spec is not valid JSON: ") + e.what());
  }
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "calibration") {
      CalibrationSpec spec;
      spec.kind = calibration_kind_from(j.value("calibration_kind", "perfectly_calibrated"));
      spec.gamma = j.value("gamma", 1.0);
      spec.confidence_lo = j.value("confidence_lo", 0.5);
      spec.confidence_hi = j.value("confidence_hi", 1.0);
      spec.class_count = j.value("class_count", 2);
      spec.record_count = j.at("record_count").get<std::int64_t>();
      spec.seed = j.at("seed").get<std::uint64_t>();
      spec.validate();
      return spec;
    }
    if (kind == "phenology") {
      PhenoSpec spec;
      spec.year_lo = j.at("year_lo").get<int>();
      spec.year_hi = j.at("year_hi").get<int>();
      spec.label_noise_rate = j.value("label_noise_rate", 0.0);
      spec.nonevent_fraction = j.value("nonevent_fraction", 0.0);
      spec.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& entry : j.at("species")) {
        SpeciesParams params;
        params.name = entry.at("name").get<std::string>();
        params.mean_doy = entry.at("mean_doy").get<double>();
        params.slope_days_per_year = entry.value("slope_days_per_year", 0.0);
        params.doy_noise_std = entry.value("doy_noise_std", 0.0);
        params.samples = entry.at("samples").get<std::int64_t>();
        if (entry.contains("group") && !entry.at("group").is_null()) {
          const auto group = entry.at("group").get<std::string>();
          if (group == "native") {
            params.group = phenology::ReplicationGroup::native;
          } else if (group == "invasive") {
            params.group = phenology::ReplicationGroup::invasive;
          } else {
            raise(Errc::bad_spec, "unknown group '" + group + "'");
          }
        }
        spec.species.push_back(std::move(params));
      }
      spec.validate();
      return spec;
    }
    raise(Errc::bad_spec, "kind must be 'calibration' or 'phenology', got '" + kind + "'");
  } catch (const json::exception& e) {
    raise(Errc::bad_spec, std::string("spec JSON missing fields: ") + e.what());
  }
}

}  // namespace selcov::synth
