// Copyright 2026 The halfheat Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "halfheat/config.hpp"

namespace hh {

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string data;
};

struct ExperimentOutput {
  std::string primary;              // printed on stdout
  std::vector<Artifact> artifacts;  // primary artifact first, config snapshot last
  ExperimentConfig resolved;        // config after command defaults and input files
};

const std::vector<std::string>& experiment_commands();

// Runs one command. Artifacts are written to cfg "out" when it is non-empty;
// calibrate writes to cfg "fixtures" unless "check" is set. A failed
// calibrate check throws CalibrationMismatch carrying the diff report.
ExperimentOutput run_experiment(const std::string& command, const ExperimentConfig& cfg);

class CalibrationMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Whitespace- or comma-separated numeric table with a header row.
struct TableArtifact {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Throws ValidationError on a row whose width differs from the header.
  std::string to_text(char sep = ' ') const;
  static TableArtifact parse(const std::string& text);
};

// Compares two fixture documents: numbers within the document's "tolerance"
// (relative, scaled by max(|a|, |b|, floor)), everything else exactly, the
// "provenance" block ignored. Returns one line per difference.
std::vector<std::string> fixture_diff(const std::string& expected, const std::string& actual);

}  // namespace hh
