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

#include <stdexcept>
#include <string>
#include <utility>

namespace selcov {

enum class Errc {
  empty_input,
  inconsistent_class_count,
  invalid_vector,
  invalid_label,
  invalid_date,
  invalid_field,
  bad_format,
  io_error,
  unlabeled_record,
  empty_dataset,
  bad_grid,
  unreachable,
  domain_error,
  no_convergence,
  too_few_points,
  degenerate_x,
  zero_variance,
  no_overlap,
  bad_spec,
  intractable,
};

const char* errc_name(Errc code) noexcept;

/// Data-level error. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::empty_input: return "EmptyInput";
    case Errc::inconsistent_class_count: return "InconsistentClassCount";
    case Errc::invalid_vector: return "InvalidVector";
    case Errc::invalid_label: return "InvalidLabel";
    case Errc::invalid_date: return "InvalidDate";
    case Errc::invalid_field: return "InvalidField";
    case Errc::bad_format: return "BadFormat";
    case Errc::io_error: return "IoError";
    case Errc::unlabeled_record: return "UnlabeledRecord";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::bad_grid: return "BadGrid";
    case Errc::unreachable: return "Unreachable";
    case Errc::domain_error: return "DomainError";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::too_few_points: return "TooFewPoints";
    case Errc::degenerate_x: return "DegenerateX";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::no_overlap: return "NoOverlap";
    case Errc::bad_spec: return "BadSpec";
    case Errc::intractable: return "Intractable";
  }
  return "Error";
}

}  // namespace selcov
