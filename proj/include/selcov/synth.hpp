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
#include <variant>
#include <vector>

#include "selcov/phenology.hpp"
#include "selcov/types.hpp"

namespace selcov::synth {

/// Counter-based generator: splitmix64 evaluated at an explicit counter,
/// out(i) = mix64(seed + (i+1) * 0x9E3779B97F4A7C15). A pure function of
/// (seed, counter), so parallel generation can partition the counter space
/// and reproduce the sequential stream bit for bit. Doubles map as
/// (x >> 11) * 2^-53, uniform on [0, 1). Gaussians are Irwin-Hall (sum of 12
/// uniforms minus 6), which uses only IEEE add/mul and is therefore
/// bit-reproducible across platforms, unlike transformations through libm.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start_counter = 0)
      : seed_(seed), counter_(start_counter) {}

  static std::uint64_t value_at(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return value_at(seed_, counter_++); }

  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_gaussian();

  /// Uniform integer in [0, bound), bound >= 1.
  std::int64_t next_below(std::int64_t bound);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

enum class CalibrationKind { perfectly_calibrated, overconfident, underconfident };

/// Generator spec for labeled prediction records whose confidence c is drawn
/// uniformly from [confidence_lo, confidence_hi) and whose label matches the
/// argmax with probability g(c): c for perfectly_calibrated, clamp(c^gamma)
/// for overconfident, clamp(c^(1/gamma)) for underconfident.
struct CalibrationSpec {
  CalibrationKind kind = CalibrationKind::perfectly_calibrated;
  double gamma = 1.0;
  double confidence_lo = 0.5;
  double confidence_hi = 1.0;
  int class_count = 2;
  std::int64_t record_count = 0;
  std::uint64_t seed = 0;

  void validate() const;  // throws BadSpec
};

/// Probability that the argmax label is correct at confidence c (the g(c)
/// above).
double correctness_probability(const CalibrationSpec& spec, double confidence);

std::vector<PredictionRecord> generate_synthetic_predictions(const CalibrationSpec& spec);

struct CurveExpectation {
  double threshold = 0.0;
  std::optional<double> accuracy;  // E[g(c) | c >= t]; absent at zero coverage
  double coverage = 0.0;           // P(c >= t)
};

/// Closed-form expected accuracy and coverage per grid threshold for the
/// uniform-confidence generator kinds.
std::vector<CurveExpectation> analytic_curve_oracle(const CalibrationSpec& spec,
                                                    std::span<const double> grid);

struct SpeciesParams {
  std::string name;
  double mean_doy = 180.0;
  double slope_days_per_year = 0.0;
  double doy_noise_std = 0.0;
  std::int64_t samples = 0;
  std::optional<phenology::ReplicationGroup> group;  // for two-group scenarios
};

/// Phenology generator. Event specimens get DoY = mean + slope * (year -
/// range midpoint) + noise; a nonevent_fraction of specimens are truly
/// non-event with DoY uniform over the calendar year (the raw material for
/// false positives under label noise). Model annotations flip the true label
/// with probability label_noise_rate. Correct annotations draw confidence
/// uniformly on [0.9, 1) while flipped ones concentrate below 0.99, tuned so
/// the accepted set at threshold 0.99 keeps a flip rate of about
/// label_noise_rate / 5 (<= 3% at 15% raw noise).
struct PhenoSpec {
  std::vector<SpeciesParams> species;
  int year_lo = 1900;
  int year_hi = 2000;
  double label_noise_rate = 0.0;
  double nonevent_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws BadSpec
};

struct PhenoTruth {
  std::string record_id;
  std::string species;
  int year = 0;
  double true_doy = 0.0;  // exact, before calendar rounding
  bool is_event = false;
};

struct PhenoDataset {
  std::vector<PredictionRecord> records;  // label = ground truth, probs = model annotation
  std::vector<PhenoTruth> truth;
};

/// Class index meaning "event present" in generated K=2 records.
inline constexpr int kEventClass = 1;

PhenoDataset generate_synthetic_phenology(const PhenoSpec& spec);

/// Ground-truth event observations (exact DoY) for feeding the shift pipeline
/// directly.
std::vector<phenology::EventObservation> truth_event_observations(
    std::span<const PhenoTruth> truth);

std::string pheno_truth_to_csv(std::span<const PhenoTruth> truth);

using SynthSpec = std::variant<CalibrationSpec, PhenoSpec>;

/// Parses the synth spec JSON documented in the README ("kind":
/// "calibration" | "phenology").
SynthSpec parse_synth_spec(const std::string& text);

}  // namespace selcov::synth
