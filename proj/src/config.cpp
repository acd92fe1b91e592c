#include "visco/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "visco/errors.hpp"

namespace visco {

using nlohmann::json;

PadFactor parse_pad_factor(const std::string& text) {
  const auto slash = text.find('/');
  PadFactor p;
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      p.num = std::stoi(text, &used);
      p.den = 1;
      if (used != text.size()) throw ArgumentError("");
    } else {
      const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
      p.num = std::stoi(a, &used);
      if (used != a.size()) throw ArgumentError("");
      p.den = std::stoi(b, &used);
      if (used != b.size()) throw ArgumentError("");
    }
  } catch (const std::exception&) {
    throw ArgumentError("grid.pad_factor: expected \"p/q\", got \"" + text + "\"");
  }
  if (p.num <= 0 || p.den <= 0) throw ArgumentError("grid.pad_factor: must be positive");
  return p;
}

std::string format_pad_factor(const PadFactor& pad) {
  return std::to_string(pad.num) + "/" + std::to_string(pad.den);
}

SpectralGrid ExperimentConfig::make_grid() const { return SpectralGrid(grid.n, grid.box_scale, grid.pad); }

double ExperimentConfig::theta0() const {
  if (cone.theta0) return *cone.theta0;
  return std::asin(1.0 / data.lambda);
}

namespace {

void check(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw ArgumentError("config: " + key + " " + rule);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const ExperimentConfig& c) {
  check(c.grid.n >= 4 && c.grid.n % 2 == 0, "grid.n", "must be an even integer >= 4");
  check(finite(c.grid.box_scale) && c.grid.box_scale > 0.0, "grid.box_scale", "must be positive");
  check(c.grid.pad.value() >= 1.5, "grid.pad_factor", "must be at least 3/2");
  check(finite(c.data.lambda) && c.data.lambda >= 1.0, "data.lambda", "must be >= 1");
  check(c.data.m0.has_value() != c.data.target_product.has_value(), "data.m0",
        "and data.target_product: exactly one must be non-null");
  if (c.data.m0) check(finite(*c.data.m0) && *c.data.m0 >= 0.0, "data.m0", "must be nonnegative");
  if (c.data.target_product) {
    check(finite(*c.data.target_product) && *c.data.target_product > 0.0, "data.target_product",
          "must be positive");
  }
  check(finite(c.data.E0_t_end) && c.data.E0_t_end >= 0.0, "data.E0_t_end", "must be nonnegative");
  check(finite(c.data.E0_dt) && c.data.E0_dt > 0.0, "data.E0_dt", "must be positive");
  check(finite(c.data.amplitude_scale) && c.data.amplitude_scale >= 0.0, "data.amplitude_scale",
        "must be nonnegative");
  check(finite(c.run.mu) && c.run.mu > 0.0, "run.mu", "must be positive");
  check(finite(c.run.dt) && c.run.dt > 0.0, "run.dt", "must be positive");
  check(finite(c.run.t_end) && c.run.t_end >= 0.0, "run.t_end", "must be nonnegative");
  check(c.run.sample_every >= 1, "run.sample_every", "must be >= 1");
  check(c.run.blowup_guard > 1.0, "run.blowup_guard", "must exceed 1");
  if (c.cone.theta0) {
    check(finite(*c.cone.theta0) && *c.cone.theta0 > 0.0 && *c.cone.theta0 <= std::numbers::pi / 2,
          "cone.theta0", "must lie in (0, pi/2]");
  }
  check(finite(norm_sq(c.cone.axis)) && norm_sq(c.cone.axis) > 0.0, "cone.axis", "must be a nonzero vector");
  check(!c.output.directory.empty(), "output.directory", "must be non-empty");
  check(c.output.checkpoint_every >= 0, "output.checkpoint_every", "must be nonnegative");
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const ExperimentConfig& c) {
  json j;
  j["grid"] = {{"n", c.grid.n}, {"box_scale", c.grid.box_scale}, {"pad_factor", format_pad_factor(c.grid.pad)}};
  j["data"] = {{"lambda", c.data.lambda},
               {"m0", optional_number(c.data.m0)},
               {"target_product", optional_number(c.data.target_product)},
               {"E0_t_end", c.data.E0_t_end},
               {"E0_dt", c.data.E0_dt},
               {"amplitude_scale", c.data.amplitude_scale}};
  j["run"] = {{"mu", c.run.mu},
              {"dt", c.run.dt},
              {"t_end", c.run.t_end},
              {"sample_every", c.run.sample_every},
              {"blowup_guard", c.run.blowup_guard}};
  j["cone"] = {{"theta0", optional_number(c.cone.theta0)},
               {"axis", {c.cone.axis[0], c.cone.axis[1], c.cone.axis[2]}}};
  j["output"] = {{"directory", c.output.directory}, {"checkpoint_every", c.output.checkpoint_every}};
  return j;
}

// Reads the keys of one section, rejecting any not listed.
class Section {
 public:
  Section(const json& root, const std::string& name) : name_(name) {
    if (!root.contains(name)) return;
    obj_ = &root.at(name);
    if (!obj_->is_object()) throw ArgumentError("config: " + name + " must be an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    if (!obj_) return;
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!ok.count(it.key())) throw ArgumentError("config: unknown key " + name_ + "." + it.key());
    }
  }

  const json* get(const char* key) const {
    if (!obj_ || !obj_->contains(key)) return nullptr;
    return &obj_->at(key);
  }

  void number(const char* key, double& out) const {
    if (const json* v = get(key)) {
      if (!v->is_number()) throw ArgumentError("config: " + path(key) + " must be a number");
      out = v->get<double>();
    }
  }

  void integer(const char* key, int& out) const {
    if (const json* v = get(key)) {
      if (!v->is_number_integer()) throw ArgumentError("config: " + path(key) + " must be an integer");
      out = v->get<int>();
    }
  }

  void optional(const char* key, std::optional<double>& out) const {
    if (const json* v = get(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number()) {
        out = v->get<double>();
      } else {
        throw ArgumentError("config: " + path(key) + " must be a number or null");
      }
    }
  }

  void string(const char* key, std::string& out) const {
    if (const json* v = get(key)) {
      if (!v->is_string()) throw ArgumentError("config: " + path(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  std::string path(const char* key) const { return name_ + "." + key; }

 private:
  std::string name_;
  const json* obj_ = nullptr;
};

}  // namespace

std::string to_json_string(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ArgumentError("config: top level must be an object");
  const std::set<std::string> sections{"grid", "data", "run", "cone", "output"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (!sections.count(it.key())) throw ArgumentError("config: unknown section " + it.key());
  }

  ExperimentConfig c;
  Section grid(root, "grid");
  grid.allow({"n", "box_scale", "pad_factor"});
  grid.integer("n", c.grid.n);
  grid.number("box_scale", c.grid.box_scale);
  std::string pad = format_pad_factor(c.grid.pad);
  grid.string("pad_factor", pad);
  c.grid.pad = parse_pad_factor(pad);

  Section data(root, "data");
  data.allow({"lambda", "m0", "target_product", "E0_t_end", "E0_dt", "amplitude_scale"});
  data.number("lambda", c.data.lambda);
  data.optional("m0", c.data.m0);
  data.optional("target_product", c.data.target_product);
  // Setting only m0 switches off the default target.
  if (data.get("m0") && !data.get("target_product") && c.data.m0) c.data.target_product.reset();
  data.number("E0_t_end", c.data.E0_t_end);
  data.number("E0_dt", c.data.E0_dt);
  data.number("amplitude_scale", c.data.amplitude_scale);

  Section run(root, "run");
  run.allow({"mu", "dt", "t_end", "sample_every", "blowup_guard"});
  run.number("mu", c.run.mu);
  run.number("dt", c.run.dt);
  run.number("t_end", c.run.t_end);
  run.integer("sample_every", c.run.sample_every);
  run.number("blowup_guard", c.run.blowup_guard);

  Section cone(root, "cone");
  cone.allow({"theta0", "axis"});
  cone.optional("theta0", c.cone.theta0);
  if (const json* a = cone.get("axis")) {
    if (!a->is_array() || a->size() != 3) throw ArgumentError("config: cone.axis must be an array of 3 numbers");
    for (int d = 0; d < 3; ++d) {
      if (!(*a)[d].is_number()) throw ArgumentError("config: cone.axis must be an array of 3 numbers");
      c.cone.axis[d] = (*a)[d].get<double>();
    }
  }

  Section out(root, "output");
  out.allow({"directory", "checkpoint_every"});
  out.string("directory", c.output.directory);
  out.integer("checkpoint_every", c.output.checkpoint_every);

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  out << to_json_string(cfg);
  if (!out) throw IoError("cannot write config " + path.string());
}

}  // namespace visco
