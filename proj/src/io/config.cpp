#include "neurowire/io/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <set>

#include "neurowire/errors.hpp"
#include "neurowire/io/format.hpp"

namespace neurowire::io {

namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string>& top_level_keys() {
  static const std::set<std::string> keys{
      "schema_version", "experiment", "grid",      "dt",          "horizon",
      "species",        "initial_concentration",   "epsilon",     "sigma",
      "beta",           "gamma",      "somas",     "cones_per_soma", "activation_offset",
      "contact_threshold", "seed",    "literal_noise", "coefficients", "output"};
  return keys;
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ValidationError(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  return j;
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  return j;
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  return j.get<double>();
}

std::uint64_t as_uint(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) {
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ValidationError(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ValidationError(path, "expected true or false");
  return j.get<bool>();
}

Vec2 as_point(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(path, "expected [x, y]");
  return {as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]")};
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Coefficient terms -------------------------------------------------------

const char* term_kind_name(CoefficientTerm::Kind k) {
  switch (k) {
    case CoefficientTerm::Kind::Constant: return "constant";
    case CoefficientTerm::Kind::ArctanConcentration: return "arctan_concentration";
    case CoefficientTerm::Kind::ArctanTime: return "arctan_time";
  }
  return "constant";
}

Json term_to_json(const CoefficientTerm& t) {
  Json j;
  j["kind"] = term_kind_name(t.kind);
  j["scale"] = t.scale;
  j["slope"] = t.slope;
  j["shift"] = t.shift;
  j["component"] = t.component;
  j["gain"] = t.gain;
  return j;
}

CoefficientTerm term_from_json(const Json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"kind", "scale", "slope", "shift", "component", "gain"}, path);
  CoefficientTerm t;
  if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError(path + ".kind", "expected a string");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    t.kind = CoefficientTerm::Kind::Constant;
  } else if (kind == "arctan_concentration") {
    t.kind = CoefficientTerm::Kind::ArctanConcentration;
  } else if (kind == "arctan_time") {
    t.kind = CoefficientTerm::Kind::ArctanTime;
  } else {
    throw ValidationError(path + ".kind", "unknown term kind '" + kind + "'");
  }
  if (j.contains("scale")) t.scale = as_double(j["scale"], path + ".scale");
  if (j.contains("slope")) t.slope = as_double(j["slope"], path + ".slope");
  if (j.contains("shift")) t.shift = as_double(j["shift"], path + ".shift");
  if (j.contains("gain")) t.gain = as_double(j["gain"], path + ".gain");
  if (j.contains("component")) {
    t.component = static_cast<std::size_t>(as_uint(j["component"], path + ".component"));
    if (t.component >= kSpeciesCount) throw ValidationError(path + ".component", "species index out of range");
  }
  return t;
}

using FunctionTable = std::array<std::array<CoefficientFunction, kSpeciesCount>, 2>;

Json table_to_json(const FunctionTable& table) {
  Json j;
  const std::array<const char*, 2> names{"cone", "soma"};
  for (std::size_t k = 0; k < 2; ++k) {
    Json rows = Json::array();
    for (const auto& f : table[k]) {
      Json terms = Json::array();
      for (const auto& t : f.terms) terms.push_back(term_to_json(t));
      rows.push_back(terms);
    }
    j[names[k]] = rows;
  }
  return j;
}

FunctionTable table_from_json(const Json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"cone", "soma"}, path);
  FunctionTable table;
  const std::array<const char*, 2> names{"cone", "soma"};
  for (std::size_t k = 0; k < 2; ++k) {
    if (!j.contains(names[k])) continue;
    const std::string p = path + "." + names[k];
    const auto& rows = require_array(j[names[k]], p);
    if (rows.size() != kSpeciesCount) throw ValidationError(p, "one entry per species required");
    for (std::size_t i = 0; i < kSpeciesCount; ++i) {
      const std::string pi = index_path(p, i);
      for (std::size_t m = 0; m < require_array(rows[i], pi).size(); ++m) {
        table[k][i].terms.push_back(term_from_json(rows[i][m], index_path(pi, m)));
      }
    }
  }
  return table;
}

CoefficientSpec coefficients_from_json(const Json& j, double beta, double gamma) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "base") return base_coefficients(beta, gamma);
    if (name == "dense") return dense_network_coefficients(beta, gamma);
    if (name == "zero") return zero_coefficients();
    throw ValidationError("coefficients", "unknown preset '" + name + "'");
  }
  require_object(j, "coefficients");
  reject_unknown(j, {"emission", "weight"}, "coefficients");
  CoefficientSpec spec = zero_coefficients();
  if (j.contains("emission")) spec.emission = table_from_json(j["emission"], "coefficients.emission");
  if (j.contains("weight")) spec.weight = table_from_json(j["weight"], "coefficients.weight");
  return spec;
}

// Somas -------------------------------------------------------------------

const char* layout_name(SomaLayout::Kind k) {
  switch (k) {
    case SomaLayout::Kind::Explicit: return "explicit";
    case SomaLayout::Kind::GridWithDeviation: return "grid";
    case SomaLayout::Kind::Random: return "random";
  }
  return "explicit";
}

SomaLayout somas_from_json(const Json& j, SomaLayout layout) {
  if (j.is_array()) {
    layout = SomaLayout{};
    layout.kind = SomaLayout::Kind::Explicit;
    for (std::size_t k = 0; k < j.size(); ++k) layout.positions.push_back(as_point(j[k], index_path("somas", k)));
    return layout;
  }
  require_object(j, "somas");
  reject_unknown(j, {"layout", "positions", "rows", "cols", "deviation", "count", "min_separation"}, "somas");
  if (j.contains("layout")) {
    if (!j["layout"].is_string()) throw ValidationError("somas.layout", "expected a string");
    const auto name = j["layout"].get<std::string>();
    if (name == "explicit") {
      layout.kind = SomaLayout::Kind::Explicit;
    } else if (name == "grid") {
      layout.kind = SomaLayout::Kind::GridWithDeviation;
    } else if (name == "random") {
      layout.kind = SomaLayout::Kind::Random;
    } else {
      throw ValidationError("somas.layout", "expected explicit, grid or random");
    }
  }
  if (j.contains("positions")) {
    layout.positions.clear();
    const auto& arr = require_array(j["positions"], "somas.positions");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      layout.positions.push_back(as_point(arr[k], index_path("somas.positions", k)));
    }
  }
  if (j.contains("rows")) layout.rows = static_cast<std::size_t>(as_uint(j["rows"], "somas.rows"));
  if (j.contains("cols")) layout.cols = static_cast<std::size_t>(as_uint(j["cols"], "somas.cols"));
  if (j.contains("deviation")) layout.deviation = as_double(j["deviation"], "somas.deviation");
  if (j.contains("count")) layout.count = static_cast<std::size_t>(as_uint(j["count"], "somas.count"));
  if (j.contains("min_separation")) layout.min_separation = as_double(j["min_separation"], "somas.min_separation");
  return layout;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  // nlohmann reports the position one past the offending character.
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError(e.what(), line, col);
  }
  require_object(j, "(root)");
  reject_unknown(j, top_level_keys(), "");

  ScenarioConfig cfg;
  const std::uint64_t seed = j.contains("seed") ? as_uint(j["seed"], "seed") : 0;
  if (j.contains("experiment") && !j["experiment"].is_null()) {
    const int which = as_int(j["experiment"], "experiment");
    if (which < 1 || which > 4) throw ValidationError("experiment", "must be 1, 2, 3 or 4");
    ExperimentOverrides o;
    if (j.contains("sigma")) o.sigma = as_double(j["sigma"], "sigma");
    if (j.contains("epsilon")) o.epsilon = as_double(j["epsilon"], "epsilon");
    if (j.contains("beta")) o.beta = as_double(j["beta"], "beta");
    if (j.contains("gamma")) o.gamma = as_double(j["gamma"], "gamma");
    if (j.contains("cones_per_soma")) o.cones_per_soma = as_uint(j["cones_per_soma"], "cones_per_soma");
    if (j.contains("horizon")) o.horizon = as_double(j["horizon"], "horizon");
    cfg = build_experiment(which, o, seed);
  }
  cfg.seed = seed;

  if (j.contains("schema_version")) cfg.schema_version = as_int(j["schema_version"], "schema_version");
  if (j.contains("grid")) {
    const auto& g = require_object(j["grid"], "grid");
    reject_unknown(g, {"half_length", "spacing"}, "grid");
    if (g.contains("half_length")) cfg.half_length = as_double(g["half_length"], "grid.half_length");
    if (g.contains("spacing")) cfg.spacing = as_double(g["spacing"], "grid.spacing");
  }
  if (j.contains("dt")) cfg.dt = as_double(j["dt"], "dt");
  if (j.contains("horizon")) cfg.horizon = as_double(j["horizon"], "horizon");
  if (j.contains("species")) {
    const auto& arr = require_array(j["species"], "species");
    cfg.species.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = index_path("species", i);
      require_object(arr[i], p);
      reject_unknown(arr[i], {"D", "lambda"}, p);
      SpeciesParams s;
      if (arr[i].contains("D")) s.D = as_double(arr[i]["D"], p + ".D");
      if (arr[i].contains("lambda")) s.lambda = as_double(arr[i]["lambda"], p + ".lambda");
      cfg.species.push_back(s);
    }
  }
  if (j.contains("initial_concentration")) {
    const auto& arr = require_array(j["initial_concentration"], "initial_concentration");
    cfg.initial_concentration.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      cfg.initial_concentration.push_back(as_double(arr[i], index_path("initial_concentration", i)));
    }
  }
  if (j.contains("epsilon")) cfg.epsilon = as_double(j["epsilon"], "epsilon");
  if (j.contains("sigma")) cfg.sigma = as_double(j["sigma"], "sigma");
  const bool beta_or_gamma = j.contains("beta") || j.contains("gamma");
  if (j.contains("beta")) cfg.beta = as_double(j["beta"], "beta");
  if (j.contains("gamma")) cfg.gamma = as_double(j["gamma"], "gamma");
  if (j.contains("coefficients")) {
    cfg.coefficients = coefficients_from_json(j["coefficients"], cfg.beta, cfg.gamma);
  } else if (beta_or_gamma && !cfg.experiment) {
    cfg.coefficients = base_coefficients(cfg.beta, cfg.gamma);
  }
  if (j.contains("somas")) cfg.somas = somas_from_json(j["somas"], cfg.somas);
  if (j.contains("cones_per_soma")) cfg.cones_per_soma = as_uint(j["cones_per_soma"], "cones_per_soma");
  if (j.contains("activation_offset")) cfg.activation_offset = as_double(j["activation_offset"], "activation_offset");
  if (j.contains("contact_threshold")) cfg.contact_threshold = as_double(j["contact_threshold"], "contact_threshold");
  if (j.contains("literal_noise")) cfg.literal_noise = as_bool(j["literal_noise"], "literal_noise");
  if (j.contains("output")) {
    const auto& o = require_object(j["output"], "output");
    reject_unknown(o, {"snapshot_every", "directory"}, "output");
    if (o.contains("snapshot_every")) cfg.output.snapshot_every = as_uint(o["snapshot_every"], "output.snapshot_every");
    if (o.contains("directory")) {
      if (!o["directory"].is_string()) throw ValidationError("output.directory", "expected a string");
      cfg.output.directory = o["directory"].get<std::string>();
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string serialize_config(const ScenarioConfig& c) {
  Json j;
  j["schema_version"] = c.schema_version;
  if (c.experiment) j["experiment"] = *c.experiment;
  j["grid"] = {{"half_length", c.half_length}, {"spacing", c.spacing}};
  j["dt"] = c.dt;
  j["horizon"] = c.horizon;
  Json species = Json::array();
  for (const auto& s : c.species) species.push_back({{"D", s.D}, {"lambda", s.lambda}});
  j["species"] = species;
  j["initial_concentration"] = c.initial_concentration;
  j["epsilon"] = c.epsilon;
  j["sigma"] = c.sigma;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  Json somas;
  somas["layout"] = layout_name(c.somas.kind);
  Json positions = Json::array();
  for (const auto& p : c.somas.positions) positions.push_back({p.x, p.y});
  somas["positions"] = positions;
  somas["rows"] = c.somas.rows;
  somas["cols"] = c.somas.cols;
  somas["deviation"] = c.somas.deviation;
  somas["count"] = c.somas.count;
  somas["min_separation"] = c.somas.min_separation;
  j["somas"] = somas;
  j["cones_per_soma"] = c.cones_per_soma;
  j["activation_offset"] = c.activation_offset;
  j["contact_threshold"] = c.contact_threshold;
  j["seed"] = c.seed;
  j["literal_noise"] = c.literal_noise;
  j["coefficients"] = {{"emission", table_to_json(c.coefficients.emission)},
                       {"weight", table_to_json(c.coefficients.weight)}};
  j["output"] = {{"snapshot_every", c.output.snapshot_every}, {"directory", c.output.directory}};
  return j.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& config) {
  // The output directory does not change the physics.
  ScenarioConfig copy = config;
  copy.output.directory.clear();
  return sha256_hex(serialize_config(copy)).substr(0, 16);
}

}  // namespace neurowire::io
