// Copyright 2026 The qpool Authors
//
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

// JSON scenario and report documents.
//
// Complex numbers are [re, im] pairs and matrices are row-major nested arrays
// of them. Non-finite distances are written as null and read back as +inf.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qpool/scenario.hpp"

namespace qpool {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;
extern const char* const kToolVersion;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& path);
Json matrix_to_json(const ComplexMatrix& m);
/// Requires a non-empty rectangular array of [re, im] entries.
ComplexMatrix matrix_from_json(const Json& j, const std::string& path);

// -- scenario documents -----------------------------------------------------------

/// "ghz" or "state224".
struct NamedStateSpec {
  std::string name;
  bool operator==(const NamedStateSpec&) const = default;
};

struct DensityStateSpec {
  ComplexMatrix rho;
  bool operator==(const DensityStateSpec& o) const;
};

struct ClassIStateSpec {
  ComplexMatrix rho;
  ComplexMatrix u;
  bool operator==(const ClassIStateSpec& o) const;
};

struct ClassIIStateSpec {
  std::vector<double> weights;
  std::vector<ComplexMatrix> sigmas;
  std::vector<ComplexMatrix> taus;
  std::vector<ComplexMatrix> rhos;
  bool operator==(const ClassIIStateSpec& o) const;
};

using StateSpec = std::variant<NamedStateSpec, DensityStateSpec, ClassIStateSpec, ClassIIStateSpec>;

struct ScenarioFile {
  std::string label;
  Dims dims;
  StateSpec state;
  std::vector<std::vector<ComplexMatrix>> povms;
  /// nullopt means every outcome tuple ("all").
  std::optional<OutcomeTuple> outcomes;
  std::optional<std::uint64_t> seed;
  StateClass declared_class = StateClass::unspecified;

  bool operator==(const ScenarioFile& o) const;
};

/// Structural parse. Throws ParseError with a "$.field[i]" path.
ScenarioFile scenario_file_from_json(const Json& j);
Json scenario_file_to_json(const ScenarioFile& f);

ScenarioFile parse_scenario_file(const std::string& text);
std::string emit_scenario_file(const ScenarioFile& f);

/// Builds the scenario, checking every state and POVM invariant. Violations
/// are rethrown as ParseError naming the offending field.
Scenario build_scenario(const ScenarioFile& f);

/// Document for an existing scenario with an explicit density matrix.
ScenarioFile scenario_file_from(const Scenario& sc);

// -- report documents ---------------------------------------------------------------

struct ReportFile {
  std::string tool_version = kToolVersion;
  /// Echo of the command and options that produced the report.
  Json config = Json::object();
  double wall_time_seconds = 0.0;
  std::variant<PoolingReport, SweepReport> report;

  bool operator==(const ReportFile& o) const;
  /// Equality ignoring wall-time fields.
  bool same_results(const ReportFile& o) const;
};

Json pooling_report_to_json(const PoolingReport& r);
PoolingReport pooling_report_from_json(const Json& j, const std::string& path = "$");
Json sweep_report_to_json(const SweepReport& r);
SweepReport sweep_report_from_json(const Json& j, const std::string& path = "$");

Json report_file_to_json(const ReportFile& f);
ReportFile report_file_from_json(const Json& j);

ReportFile parse_report_file(const std::string& text);
std::string emit_report_file(const ReportFile& f);

// -- files --------------------------------------------------------------------------------

/// Indented JSON with matrix rows kept on one line.
std::string dump_json(const Json& j);

/// Parses JSON text; syntax errors become ParseError with line and column.
Json parse_json(const std::string& text, const std::string& source = "$");

std::string read_text_file(const std::string& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace qpool
