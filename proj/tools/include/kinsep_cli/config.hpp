#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "kinsep/grid.hpp"
#include "kinsep/rr_rrr.hpp"
#include "kinsep/three_rrr.hpp"
#include "kinsep/trajectory.hpp"

namespace kinsep::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  int nx = 0, ny = 0, nphi = 0;  ///< nphi is 0 for planar models

  /// Zero-area bounds are allowed and give no cells.
  bool empty() const { return !(x_min < x_max) || !(y_min < y_max); }
  GridSpec spec() const;
};

struct ToleranceConfig {
  double zero = 1e-6;
  double min_component_fraction = 1e-3;
  double min_region_fraction = 1e-3;
  double relation_threshold = 0.02;
};

struct ModelConfig {
  std::variant<RrRrrParams, ThreeRrrParams> params;
  std::optional<GridConfig> grid;
  ToleranceConfig tolerance;
  std::optional<Waypath> trajectory;

  int dof() const { return params.index() == 0 ? 2 : 3; }
  /// Throws ConfigError when the dimensions violate the model's invariants.
  std::unique_ptr<Manipulator> make_model() const;
  /// Grid block, or a box around the reachable workspace when absent.
  GridConfig grid_or_default() const;
};

/// Strict YAML reader: unknown keys, missing keys and wrong shapes are errors.
ModelConfig parse_config(const std::string& text);
ModelConfig load_config(const std::filesystem::path& path);

/// "400x400" or "48x48x48"; the count must match `dof`.
void apply_grid_override(GridConfig& grid, const std::string& text, int dof);

}  // namespace kinsep::cli
