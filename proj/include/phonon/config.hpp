// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment configuration documents.
//
// A config is a JSON object with keys kind, seed, register (only for kinds that
// take one), params and output_dir. Dimensioned parameters are written as
// {"value": x, "unit": "kHz"} (value may also be an array); bare numbers are
// accepted only for dimensionless parameters.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonon/errors.hpp"
#include "phonon/hilbert.hpp"

namespace phonon {

using Json = nlohmann::json;

// Malformed document (bad JSON syntax, unreadable file).
class ParseError : public Error {
 public:
  using Error::Error;
};

enum class ParamType { kInt, kNumber, kBool, kChoice, kQuantity, kQuantityList, kNumberList, kIntList, kObjectList };

// Physical dimensions understood by the unit table.
enum class Dimension { kNone, kAngularFrequency, kTime, kTemperature, kMass, kAngle };

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::kNumber;
  Dimension dimension = Dimension::kNone;
  Json default_value;                // null: optional without a default
  std::vector<std::string> choices;  // kChoice only
  std::string description;
};

struct KindSchema {
  std::string kind;
  std::string summary;
  bool uses_register = false;
  std::string trials_param;  // parameter overridden by --trials, empty if none
  std::vector<ParamSpec> params;

  const ParamSpec* find(const std::string& name) const;
};

// SI factor of a unit for a dimension; throws InvalidArgument for unknown pairs.
double unit_factor(Dimension d, const std::string& unit);
std::vector<std::string> units_for(Dimension d);
std::string dimension_name(Dimension d);
std::string type_name(ParamType t);

struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 0;
  Json register_spec;  // null when the kind has no register
  Json params;         // normalized: defaults filled in, quantities kept with their units
  std::string output_dir = "out";

  Json to_json() const;
  bool operator==(const ExperimentConfig& other) const = default;
};

// Validates against the schema. Unknown keys, wrong types and unknown units throw InvalidArgument.
ExperimentConfig parse_config(const Json& doc, const std::vector<KindSchema>& registry);
// Reads and parses a file; syntax errors throw ParseError.
Json read_json_file(const std::string& path);

const KindSchema& find_schema(const std::vector<KindSchema>& registry, const std::string& kind);

// Typed access to validated parameters; quantities come back in SI units.
class ParamView {
 public:
  ParamView(const KindSchema& schema, const Json& params) : schema_(schema), params_(params) {}

  bool has(const std::string& name) const;
  long integer(const std::string& name) const;
  double number(const std::string& name) const;
  bool flag(const std::string& name) const;
  std::string choice(const std::string& name) const;
  double quantity(const std::string& name) const;
  // A quantity in a chosen unit of its dimension.
  double quantity_in(const std::string& name, const std::string& unit) const;
  std::vector<double> quantities(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
  std::vector<long> integers(const std::string& name) const;
  const Json& raw(const std::string& name) const;

 private:
  const Json& get(const std::string& name, ParamType type) const;
  const KindSchema& schema_;
  const Json& params_;
};

// Converts a {"value", "unit"} object (scalar value) to SI.
double quantity_to_si(const Json& q, Dimension d, const std::string& context);
std::vector<double> quantity_list_to_si(const Json& q, Dimension d, const std::string& context);

// Register document: {"modes": [{"dim", "frequency", "lamb_dicke"}], "qubit_splitting"}.
Json normalize_register(const Json& doc);
ModeRegister build_register(const Json& normalized);

}  // namespace phonon
