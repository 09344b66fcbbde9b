// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "phonon/units.hpp"

namespace phonon {

namespace {

using UnitTable = std::vector<std::pair<std::string, double>>;

const UnitTable& table_for(Dimension d) {
  using namespace units;
  static const std::map<Dimension, UnitTable> tables = {
      {Dimension::kNone, {{"1", 1.0}}},
      {Dimension::kAngularFrequency,
       {{"rad/s", 1.0}, {"Hz", hz_to_rad(1.0)}, {"kHz", hz_to_rad(1e3)}, {"MHz", hz_to_rad(1e6)},
        {"cm^-1", kRadPerSecondPerWavenumber}}},
      {Dimension::kTime, {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}}},
      {Dimension::kTemperature, {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"nK", 1e-9}}},
      {Dimension::kMass, {{"kg", 1.0}, {"amu", kAtomicMassUnit}}},
      {Dimension::kAngle, {{"rad", 1.0}, {"deg", kPi / 180.0}}},
  };
  return tables.at(d);
}

bool is_int(const Json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

void check_quantity_shape(const Json& q, Dimension d, bool list, const std::string& context) {
  if (!q.is_object()) {
    throw InvalidArgument(fmt::format("{}: expected {{\"value\", \"unit\"}} with a {} unit", context,
                                      dimension_name(d)));
  }
  for (const auto& [key, value] : q.items()) {
    if (key != "value" && key != "unit") throw InvalidArgument(fmt::format("{}: unknown key '{}'", context, key));
  }
  if (!q.contains("value") || !q.contains("unit") || !q.at("unit").is_string()) {
    throw InvalidArgument(fmt::format("{}: a quantity needs 'value' and a string 'unit'", context));
  }
  const Json& v = q.at("value");
  if (list) {
    if (!v.is_array()) throw InvalidArgument(fmt::format("{}: value must be an array", context));
    for (const auto& x : v) {
      if (!x.is_number()) throw InvalidArgument(fmt::format("{}: array entries must be numbers", context));
    }
  } else if (!v.is_number()) {
    throw InvalidArgument(fmt::format("{}: value must be a number", context));
  }
  unit_factor(d, q.at("unit").get<std::string>());
}

void check_value(const ParamSpec& spec, const Json& v, const std::string& context) {
  switch (spec.type) {
    case ParamType::kInt:
      if (!is_int(v)) throw InvalidArgument(fmt::format("{}: expected an integer", context));
      return;
    case ParamType::kNumber:
      if (!v.is_number()) throw InvalidArgument(fmt::format("{}: expected a number", context));
      return;
    case ParamType::kBool:
      if (!v.is_boolean()) throw InvalidArgument(fmt::format("{}: expected true or false", context));
      return;
    case ParamType::kChoice: {
      if (!v.is_string()) throw InvalidArgument(fmt::format("{}: expected a string", context));
      const auto s = v.get<std::string>();
      for (const auto& c : spec.choices) {
        if (c == s) return;
      }
      std::string all;
      for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
      throw InvalidArgument(fmt::format("{}: '{}' is not one of {}", context, s, all));
    }
    case ParamType::kQuantity:
      check_quantity_shape(v, spec.dimension, false, context);
      return;
    case ParamType::kQuantityList:
      check_quantity_shape(v, spec.dimension, true, context);
      return;
    case ParamType::kNumberList:
    case ParamType::kIntList:
      if (!v.is_array()) throw InvalidArgument(fmt::format("{}: expected an array", context));
      for (const auto& x : v) {
        if (spec.type == ParamType::kIntList ? !is_int(x) : !x.is_number()) {
          throw InvalidArgument(fmt::format("{}: array entries must be {}", context,
                                            spec.type == ParamType::kIntList ? "integers" : "numbers"));
        }
      }
      return;
    case ParamType::kObjectList:
      if (!v.is_array()) throw InvalidArgument(fmt::format("{}: expected an array of objects", context));
      for (const auto& x : v) {
        if (!x.is_object()) throw InvalidArgument(fmt::format("{}: array entries must be objects", context));
      }
      return;
  }
}

}  // namespace

const ParamSpec* KindSchema::find(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

double unit_factor(Dimension d, const std::string& unit) {
  for (const auto& [name, factor] : table_for(d)) {
    if (name == unit) return factor;
  }
  std::string all;
  for (const auto& u : units_for(d)) all += (all.empty() ? "" : ", ") + u;
  throw InvalidArgument(fmt::format("unit '{}' is not a {} unit (use one of {})", unit, dimension_name(d), all));
}

std::vector<std::string> units_for(Dimension d) {
  std::vector<std::string> out;
  for (const auto& entry : table_for(d)) out.push_back(entry.first);
  return out;
}

std::string dimension_name(Dimension d) {
  switch (d) {
    case Dimension::kNone: return "dimensionless";
    case Dimension::kAngularFrequency: return "angular frequency";
    case Dimension::kTime: return "time";
    case Dimension::kTemperature: return "temperature";
    case Dimension::kMass: return "mass";
    case Dimension::kAngle: return "angle";
  }
  return "unknown";
}

std::string type_name(ParamType t) {
  switch (t) {
    case ParamType::kInt: return "integer";
    case ParamType::kNumber: return "number";
    case ParamType::kBool: return "boolean";
    case ParamType::kChoice: return "choice";
    case ParamType::kQuantity: return "quantity";
    case ParamType::kQuantityList: return "quantity list";
    case ParamType::kNumberList: return "number list";
    case ParamType::kIntList: return "integer list";
    case ParamType::kObjectList: return "object list";
  }
  return "unknown";
}

double quantity_to_si(const Json& q, Dimension d, const std::string& context) {
  check_quantity_shape(q, d, false, context);
  const double v = q.at("value").get<double>() * unit_factor(d, q.at("unit").get<std::string>());
  if (!std::isfinite(v)) throw InvalidArgument(fmt::format("{}: value must be finite", context));
  return v;
}

std::vector<double> quantity_list_to_si(const Json& q, Dimension d, const std::string& context) {
  check_quantity_shape(q, d, true, context);
  const double f = unit_factor(d, q.at("unit").get<std::string>());
  std::vector<double> out;
  for (const auto& x : q.at("value")) out.push_back(x.get<double>() * f);
  return out;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["kind"] = kind;
  j["seed"] = seed;
  if (!register_spec.is_null()) j["register"] = register_spec;
  j["params"] = params;
  j["output_dir"] = output_dir;
  return j;
}

const KindSchema& find_schema(const std::vector<KindSchema>& registry, const std::string& kind) {
  for (const auto& s : registry) {
    if (s.kind == kind) return s;
  }
  throw InvalidArgument(fmt::format("unknown experiment kind '{}' (see 'list')", kind));
}

ExperimentConfig parse_config(const Json& doc, const std::vector<KindSchema>& registry) {
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "kind" && key != "seed" && key != "register" && key != "params" && key != "output_dir") {
      throw InvalidArgument(fmt::format("unknown top-level key '{}'", key));
    }
  }
  if (!doc.contains("kind") || !doc.at("kind").is_string()) throw InvalidArgument("config needs a string 'kind'");
  ExperimentConfig c;
  c.kind = doc.at("kind").get<std::string>();
  const KindSchema& schema = find_schema(registry, c.kind);

  if (doc.contains("seed")) {
    const Json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw InvalidArgument("seed must be a nonnegative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw InvalidArgument("output_dir must be a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("register")) {
    if (!schema.uses_register) throw InvalidArgument(fmt::format("kind '{}' does not take a register", c.kind));
    c.register_spec = normalize_register(doc.at("register"));
  } else if (schema.uses_register) {
    throw InvalidArgument(fmt::format("kind '{}' needs a register", c.kind));
  }

  Json given = doc.contains("params") ? doc.at("params") : Json::object();
  if (!given.is_object()) throw InvalidArgument("params must be an object");
  for (const auto& [key, value] : given.items()) {
    const ParamSpec* spec = schema.find(key);
    if (spec == nullptr) throw InvalidArgument(fmt::format("{}: unknown parameter '{}'", c.kind, key));
    check_value(*spec, value, fmt::format("{}.{}", c.kind, key));
  }
  c.params = Json::object();
  for (const auto& spec : schema.params) {
    if (given.contains(spec.name)) {
      c.params[spec.name] = given.at(spec.name);
    } else if (!spec.default_value.is_null()) {
      c.params[spec.name] = spec.default_value;
    }
  }
  return c;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
}

bool ParamView::has(const std::string& name) const { return params_.contains(name); }

const Json& ParamView::get(const std::string& name, ParamType type) const {
  const ParamSpec* spec = schema_.find(name);
  if (spec == nullptr || spec->type != type) {
    throw InvalidArgument(fmt::format("{}: no {} parameter '{}'", schema_.kind, type_name(type), name));
  }
  if (!params_.contains(name)) throw InvalidArgument(fmt::format("{}: parameter '{}' is required", schema_.kind, name));
  return params_.at(name);
}

long ParamView::integer(const std::string& name) const { return get(name, ParamType::kInt).get<long>(); }
double ParamView::number(const std::string& name) const { return get(name, ParamType::kNumber).get<double>(); }
bool ParamView::flag(const std::string& name) const { return get(name, ParamType::kBool).get<bool>(); }
std::string ParamView::choice(const std::string& name) const {
  return get(name, ParamType::kChoice).get<std::string>();
}

double ParamView::quantity(const std::string& name) const {
  return quantity_to_si(get(name, ParamType::kQuantity), schema_.find(name)->dimension, schema_.kind + "." + name);
}

double ParamView::quantity_in(const std::string& name, const std::string& unit) const {
  return quantity(name) / unit_factor(schema_.find(name)->dimension, unit);
}

std::vector<double> ParamView::quantities(const std::string& name) const {
  return quantity_list_to_si(get(name, ParamType::kQuantityList), schema_.find(name)->dimension,
                             schema_.kind + "." + name);
}

std::vector<double> ParamView::numbers(const std::string& name) const {
  return get(name, ParamType::kNumberList).get<std::vector<double>>();
}

std::vector<long> ParamView::integers(const std::string& name) const {
  return get(name, ParamType::kIntList).get<std::vector<long>>();
}

const Json& ParamView::raw(const std::string& name) const {
  if (!params_.contains(name)) throw InvalidArgument(fmt::format("{}: parameter '{}' is required", schema_.kind, name));
  return params_.at(name);
}

Json normalize_register(const Json& doc) {
  if (!doc.is_object()) throw InvalidArgument("register must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "modes" && key != "qubit_splitting") throw InvalidArgument(fmt::format("register: unknown key '{}'", key));
  }
  if (!doc.contains("modes") || !doc.at("modes").is_array() || doc.at("modes").empty()) {
    throw InvalidArgument("register needs a nonempty 'modes' array");
  }
  Json out;
  out["qubit_splitting"] = doc.contains("qubit_splitting") ? doc.at("qubit_splitting")
                                                           : Json{{"value", 0.0}, {"unit", "rad/s"}};
  quantity_to_si(out["qubit_splitting"], Dimension::kAngularFrequency, "register.qubit_splitting");
  out["modes"] = Json::array();
  int index = 0;
  for (const auto& m : doc.at("modes")) {
    const std::string ctx = fmt::format("register.modes[{}]", index++);
    if (!m.is_object()) throw InvalidArgument(ctx + ": expected an object");
    for (const auto& [key, value] : m.items()) {
      if (key != "dim" && key != "frequency" && key != "lamb_dicke") {
        throw InvalidArgument(fmt::format("{}: unknown key '{}'", ctx, key));
      }
    }
    if (!m.contains("dim") || !is_int(m.at("dim"))) throw InvalidArgument(ctx + ": 'dim' must be an integer");
    Json mode;
    mode["dim"] = m.at("dim");
    mode["frequency"] = m.contains("frequency") ? m.at("frequency") : Json{{"value", 1.0}, {"unit", "MHz"}};
    quantity_to_si(mode["frequency"], Dimension::kAngularFrequency, ctx + ".frequency");
    mode["lamb_dicke"] = m.contains("lamb_dicke") ? m.at("lamb_dicke") : Json(0.1);
    if (!mode["lamb_dicke"].is_number()) throw InvalidArgument(ctx + ": 'lamb_dicke' must be a number");
    out["modes"].push_back(mode);
  }
  build_register(out);  // validates ranges
  return out;
}

ModeRegister build_register(const Json& normalized) {
  std::vector<ModeSpec> modes;
  for (const auto& m : normalized.at("modes")) {
    modes.push_back({quantity_to_si(m.at("frequency"), Dimension::kAngularFrequency, "register mode frequency"),
                     m.at("lamb_dicke").get<double>(), m.at("dim").get<int>()});
  }
  return ModeRegister(
      QubitSpec{quantity_to_si(normalized.at("qubit_splitting"), Dimension::kAngularFrequency, "qubit_splitting")},
      modes);
}

}  // namespace phonon
