#include "kinsep_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace kinsep::cli {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

YAML::Node require(const YAML::Node& node, const char* key, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) throw ConfigError(where + ": missing key '" + key + "'");
  return v;
}

double as_number(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) throw ConfigError(where + ": expected a number");
  double v = 0.0;
  try {
    v = node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + ": expected a number, got '" + node.Scalar() + "'");
  }
  if (!std::isfinite(v)) throw ConfigError(where + ": value must be finite");
  return v;
}

int as_count(const YAML::Node& node, const std::string& where) {
  const double v = as_number(node, where);
  if (v != std::floor(v) || v < 0 || v > 1e7) throw ConfigError(where + ": expected a non-negative integer");
  return static_cast<int>(v);
}

std::vector<double> as_list(const YAML::Node& node, std::size_t size, const std::string& where) {
  if (!node.IsSequence() || node.size() != size) {
    throw ConfigError(where + ": expected a list of " + std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(as_number(node[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

RrRrrParams parse_rr(const YAML::Node& node) {
  const std::string where = "rr_rrr";
  check_keys(node, where, {"l1", "l2", "l3", "l4", "c1", "c2"});
  RrRrrParams p;
  p.l1 = as_number(require(node, "l1", where), where + ".l1");
  p.l2 = as_number(require(node, "l2", where), where + ".l2");
  p.l3 = as_number(require(node, "l3", where), where + ".l3");
  p.l4 = as_number(require(node, "l4", where), where + ".l4");
  p.c1 = as_number(require(node, "c1", where), where + ".c1");
  p.c2 = as_number(require(node, "c2", where), where + ".c2");
  return p;
}

ThreeRrrParams parse_3rrr(const YAML::Node& node) {
  const std::string where = "3rrr";
  check_keys(node, where, {"base", "platform", "proximal", "distal"});
  ThreeRrrParams p;
  auto points = [&](const char* key, std::array<Vec2, 3>& dst) {
    const YAML::Node list = require(node, key, where);
    if (!list.IsSequence() || list.size() != 3) throw ConfigError(where + "." + key + ": expected 3 points");
    for (std::size_t i = 0; i < 3; ++i) {
      const auto xy = as_list(list[i], 2, where + "." + key + "[" + std::to_string(i) + "]");
      dst[i] = {xy[0], xy[1]};
    }
  };
  points("base", p.base);
  points("platform", p.platform);
  const auto prox = as_list(require(node, "proximal", where), 3, where + ".proximal");
  const auto dist = as_list(require(node, "distal", where), 3, where + ".distal");
  std::copy(prox.begin(), prox.end(), p.proximal.begin());
  std::copy(dist.begin(), dist.end(), p.distal.begin());
  return p;
}

GridConfig parse_grid(const YAML::Node& node, int dof) {
  const std::string where = "grid";
  check_keys(node, where, {"x", "y", "cells"});
  GridConfig g;
  const auto x = as_list(require(node, "x", where), 2, where + ".x");
  const auto y = as_list(require(node, "y", where), 2, where + ".y");
  g.x_min = x[0];
  g.x_max = x[1];
  g.y_min = y[0];
  g.y_max = y[1];
  if (g.x_max < g.x_min || g.y_max < g.y_min) throw ConfigError(where + ": bounds must be ordered [min, max]");
  const YAML::Node cells = require(node, "cells", where);
  if (!cells.IsSequence() || static_cast<int>(cells.size()) != dof) {
    throw ConfigError(where + ".cells: expected " + std::to_string(dof) + " counts");
  }
  g.nx = as_count(cells[0], where + ".cells[0]");
  g.ny = as_count(cells[1], where + ".cells[1]");
  if (dof == 3) g.nphi = as_count(cells[2], where + ".cells[2]");
  if (g.nx < 8 || g.ny < 8 || (dof == 3 && g.nphi < 8)) throw ConfigError(where + ".cells: at least 8 per axis");
  return g;
}

ToleranceConfig parse_tolerance(const YAML::Node& node) {
  const std::string where = "tolerance";
  check_keys(node, where, {"zero", "min_component_fraction", "min_region_fraction", "relation_threshold"});
  ToleranceConfig t;
  auto read = [&](const char* key, double& dst, double lo, double hi) {
    if (const YAML::Node v = node[key]) {
      dst = as_number(v, where + "." + key);
      if (dst < lo || dst > hi) throw ConfigError(where + "." + key + ": out of range");
    }
  };
  read("zero", t.zero, 0.0, 1.0);
  read("min_component_fraction", t.min_component_fraction, 0.0, 0.5);
  read("min_region_fraction", t.min_region_fraction, 0.0, 0.5);
  read("relation_threshold", t.relation_threshold, 0.0, 0.49);
  return t;
}

Waypath parse_trajectory(const YAML::Node& node, int dof) {
  const std::string where = "trajectory";
  check_keys(node, where, {"samples_per_segment", "waypoints"});
  Waypath path;
  if (const YAML::Node s = node["samples_per_segment"]) path.samples_per_segment = as_count(s, where + ".samples_per_segment");
  const YAML::Node list = require(node, "waypoints", where);
  if (!list.IsSequence()) throw ConfigError(where + ".waypoints: expected a list");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto v = as_list(list[i], static_cast<std::size_t>(dof), where + ".waypoints[" + std::to_string(i) + "]");
    path.waypoints.emplace_back(v[0], v[1], dof == 3 ? v[2] : 0.0);
  }
  try {
    path.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return path;
}

}  // namespace

GridSpec GridConfig::spec() const {
  const Axis x{x_min, x_max, nx, false};
  const Axis y{y_min, y_max, ny, false};
  return nphi > 0 ? GridSpec::planar_oriented(x, y, nphi) : GridSpec::planar(x, y);
}

std::unique_ptr<Manipulator> ModelConfig::make_model() const {
  try {
    if (const auto* rr = std::get_if<RrRrrParams>(&params)) return std::make_unique<RrRrrModel>(*rr);
    return std::make_unique<ThreeRrrModel>(std::get<ThreeRrrParams>(params));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid model dimensions: ") + e.what());
  }
}

GridConfig ModelConfig::grid_or_default() const {
  if (grid) return *grid;
  GridConfig g;
  if (const auto* rr = std::get_if<RrRrrParams>(&params)) {
    const double r1 = rr->l1 + rr->l3;
    const double r2 = rr->l2 + rr->l4;
    g.x_min = std::min(rr->c1 - r1, rr->c2 - r2);
    g.x_max = std::max(rr->c1 + r1, rr->c2 + r2);
    g.y_max = std::max(r1, r2);
    g.y_min = -g.y_max;
    g.nx = g.ny = 400;
    return g;
  }
  // Intersection of the per-leg reach boxes of the platform origin.
  const auto& p = std::get<ThreeRrrParams>(params);
  g.x_min = g.y_min = -1e300;
  g.x_max = g.y_max = 1e300;
  for (int i = 0; i < 3; ++i) {
    const double r = p.proximal[i] + p.distal[i] + norm(p.platform[i]);
    g.x_min = std::max(g.x_min, p.base[i].x - r);
    g.x_max = std::min(g.x_max, p.base[i].x + r);
    g.y_min = std::max(g.y_min, p.base[i].y - r);
    g.y_max = std::min(g.y_max, p.base[i].y + r);
  }
  g.nx = g.ny = g.nphi = 48;
  return g;
}

ModelConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!root || !root.IsMap()) throw ConfigError("config: expected a mapping at top level");
  check_keys(root, "config", {"model", "rr_rrr", "3rrr", "grid", "tolerance", "trajectory"});
  const YAML::Node kind = require(root, "model", "config");
  if (!kind.IsScalar()) throw ConfigError("config.model: expected \"rr_rrr\" or \"3rrr\"");

  ModelConfig cfg;
  const std::string k = kind.Scalar();
  if (k == "rr_rrr") {
    if (root["3rrr"]) throw ConfigError("config: '3rrr' block given for model rr_rrr");
    cfg.params = parse_rr(require(root, "rr_rrr", "config"));
  } else if (k == "3rrr") {
    if (root["rr_rrr"]) throw ConfigError("config: 'rr_rrr' block given for model 3rrr");
    cfg.params = parse_3rrr(require(root, "3rrr", "config"));
  } else {
    throw ConfigError("config.model: unknown model '" + k + "'");
  }
  if (const YAML::Node g = root["grid"]) cfg.grid = parse_grid(g, cfg.dof());
  if (const YAML::Node t = root["tolerance"]) cfg.tolerance = parse_tolerance(t);
  if (const YAML::Node t = root["trajectory"]) cfg.trajectory = parse_trajectory(t, cfg.dof());
  cfg.make_model();
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_grid_override(GridConfig& grid, const std::string& text, int dof) {
  std::vector<int> counts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('x', pos), text.size());
    const std::string part = text.substr(pos, end - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 7) {
      throw ConfigError("--grid: expected NxM or NxMxK, got '" + text + "'");
    }
    counts.push_back(std::stoi(part));
    pos = end + 1;
  }
  if (static_cast<int>(counts.size()) != dof) {
    throw ConfigError("--grid: expected " + std::to_string(dof) + " counts for this model");
  }
  if (std::any_of(counts.begin(), counts.end(), [](int c) { return c < 8; })) {
    throw ConfigError("--grid: at least 8 cells per axis");
  }
  grid.nx = counts[0];
  grid.ny = counts[1];
  grid.nphi = dof == 3 ? counts[2] : 0;
}

}  // namespace kinsep::cli
