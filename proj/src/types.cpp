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

#include "selcov/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "selcov/numfmt.hpp"

namespace selcov {

namespace {

constexpr int kMinYear = 1700;
constexpr int kMaxYear = 2100;

constexpr int kCumulativeDays[12] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};

}  // namespace

bool Date::is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int Date::days_in_month(int year, int month) {
  static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  if (month == 2 && is_leap_year(year)) return 29;
  return kDays[month - 1];
}

bool Date::valid() const {
  if (year < kMinYear || year > kMaxYear) return false;
  if (month < 1 || month > 12) return false;
  return day >= 1 && day <= days_in_month(year, month);
}

int Date::day_of_year() const {
  int doy = kCumulativeDays[month - 1] + day;
  if (month > 2 && is_leap_year(year)) ++doy;
  return doy;
}

Date Date::parse(std::string_view iso) {
  auto fail = [&]() -> Date {
    raise(Errc::invalid_date, "expected YYYY-MM-DD, got '" + std::string(iso) + "'");
  };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') fail();
  auto digits = [&](std::string_view part) -> std::optional<std::int64_t> {
    for (char c : part) {
      if (c < '0' || c > '9') return std::nullopt;
    }
    return parse_int(part);
  };
  auto y = digits(iso.substr(0, 4));
  auto m = digits(iso.substr(5, 2));
  auto d = digits(iso.substr(8, 2));
  if (!y || !m || !d) fail();
  Date date{static_cast<int>(*y), static_cast<int>(*m), static_cast<int>(*d)};
  if (!date.valid()) {
    raise(Errc::invalid_date, "not a valid calendar date: '" + std::string(iso) + "'");
  }
  return date;
}

Date Date::from_day_of_year(int year, int doy) {
  const int year_days = is_leap_year(year) ? 366 : 365;
  if (doy < 1 || doy > year_days) {
    raise(Errc::invalid_date,
          "day of year " + format_int(doy) + " out of range for year " + format_int(year));
  }
  int month = 1;
  int remaining = doy;
  while (remaining > days_in_month(year, month)) {
    remaining -= days_in_month(year, month);
    ++month;
  }
  return Date{year, month, remaining};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string to_string(Nativity value) {
  return value == Nativity::native ? "native" : "introduced";
}

std::string to_string(GrowthForm value) {
  switch (value) {
    case GrowthForm::forb_herb: return "forb_herb";
    case GrowthForm::tree_shrub_subshrub: return "tree_shrub_subshrub";
    case GrowthForm::vine: return "vine";
    case GrowthForm::woody: return "woody";
    case GrowthForm::herbaceous: return "herbaceous";
  }
  return "";
}

std::string to_string(WetlandStatus value) {
  switch (value) {
    case WetlandStatus::OBL: return "OBL";
    case WetlandStatus::FACW: return "FACW";
    case WetlandStatus::FAC: return "FAC";
    case WetlandStatus::FACU: return "FACU";
    case WetlandStatus::UPL: return "UPL";
  }
  return "";
}

std::optional<Nativity> nativity_from_string(std::string_view text) {
  if (text == "native") return Nativity::native;
  if (text == "introduced") return Nativity::introduced;
  return std::nullopt;
}

std::optional<GrowthForm> growth_form_from_string(std::string_view text) {
  if (text == "forb_herb") return GrowthForm::forb_herb;
  if (text == "tree_shrub_subshrub") return GrowthForm::tree_shrub_subshrub;
  if (text == "vine") return GrowthForm::vine;
  if (text == "woody") return GrowthForm::woody;
  if (text == "herbaceous") return GrowthForm::herbaceous;
  return std::nullopt;
}

std::optional<WetlandStatus> wetland_status_from_string(std::string_view text) {
  if (text == "OBL") return WetlandStatus::OBL;
  if (text == "FACW") return WetlandStatus::FACW;
  if (text == "FAC") return WetlandStatus::FAC;
  if (text == "FACU") return WetlandStatus::FACU;
  if (text == "UPL") return WetlandStatus::UPL;
  return std::nullopt;
}

namespace {

double validated_sum(std::span<const double> probabilities) {
  if (probabilities.size() < 2) {
    raise(Errc::invalid_vector,
          "need at least 2 class probabilities, got " + format_int(probabilities.size()));
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (std::isnan(p)) raise(Errc::invalid_vector, "NaN probability");
    if (p < 0.0 || p > 1.0) {
      raise(Errc::invalid_vector, "probability " + format_double(p) + " outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    raise(Errc::invalid_vector, "probabilities sum to " + format_double(sum));
  }
  return sum;
}

}  // namespace

PredictionRecord PredictionRecord::make(std::string id, std::vector<double> probabilities,
                                        std::optional<int> true_label,
                                        std::optional<SpecimenMeta> specimen) {
  const double sum = validated_sum(probabilities);
  // Renormalize only when the sum is materially off; sums already within a
  // few ulps of 1 are left untouched so serialize -> ingest is a fixpoint.
  const double skip_tol =
      8.0 * static_cast<double>(probabilities.size()) * std::numeric_limits<double>::epsilon();
  if (std::abs(sum - 1.0) > skip_tol) {
    for (double& p : probabilities) p /= sum;
  }
  if (true_label) {
    if (*true_label < 0 || *true_label >= static_cast<int>(probabilities.size())) {
      raise(Errc::invalid_label, "true label " + format_int(*true_label) + " not in [0, " +
                                     format_int(probabilities.size()) + ")");
    }
  }
  if (specimen && !specimen->collection_date.valid()) {
    raise(Errc::invalid_date, "invalid collection date " + specimen->collection_date.to_string());
  }
  PredictionRecord record;
  record.id_ = std::move(id);
  record.probabilities_ = std::move(probabilities);
  record.true_label_ = true_label;
  record.specimen_ = std::move(specimen);
  return record;
}

Decision decide(std::span<const double> probabilities) {
  validated_sum(probabilities);
  const auto max_it = std::max_element(probabilities.begin(), probabilities.end());
  return Decision{static_cast<int>(max_it - probabilities.begin()), *max_it};
}

}  // namespace selcov
