#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kinsep/manipulator.hpp"

namespace kinsep {

/// Piecewise-linear workspace path. `samples_per_segment` counts intervals,
/// so k waypoints give (k - 1) * samples_per_segment + 1 poses.
struct Waypath {
  std::vector<Pose> waypoints;
  int samples_per_segment = 400;

  /// Throws std::invalid_argument unless there are >= 2 waypoints and >= 16 samples per segment.
  void validate() const;
};

/// Componentwise linear interpolation in (x, y, phi), endpoints included.
std::vector<Pose> interpolate(const Waypath& path);

/// det A and the B_jj sampled along a path in one working mode.
/// series[0] is det A, series[1 + j] is B_jj.
struct DeterminantTrace {
  SignVector mode;
  std::vector<Pose> poses;
  std::vector<ActuatedConfig> q;
  std::vector<std::vector<double>> series;
  std::vector<std::vector<double>> normalized;  ///< each series over its own max |value|
  std::vector<double> scale;

  std::size_t samples() const { return poses.size(); }
  static std::string series_name(std::size_t s);  ///< "det_a", "b11", "b22", ...
};

/// Throws BranchLost with the first sample where ik_mode has no solution.
DeterminantTrace trace(const Manipulator& model, const Waypath& path, const SignVector& mode,
                       unsigned threads = 0);

struct Violation {
  std::size_t sample = 0;
  std::size_t series = 0;
};

/// Empty when no series vanishes (|value| <= zero_tol) or changes sign
/// between consecutive samples; otherwise the first offending (sample, series)
/// in sample order.
std::optional<Violation> verify_nonsingular(const DeterminantTrace& trace, double zero_tol);

struct AssemblyModeReport {
  SignVector mode;
  Pose start;
  Pose end;
  ActuatedConfig q_start;
  ActuatedConfig q_end;
  double q_distance = 0.0;     ///< max wrapped joint difference
  double pose_gap = 0.0;       ///< pose_distance(start, end)
  double start_fk_gap = 0.0;   ///< distance from start to the nearest fk(q_start) solution
  double end_fk_gap = 0.0;     ///< same for end
  /// Same for end carried to q_start by Newton steps dX = -A^-1 B (q_start - q(X))
  /// on the working-mode IK; infinity if the iteration fails.
  double end_fk_gap_carried = 0.0;
  double carried_to_start = 0.0;  ///< pose distance from the carried end to start
  std::size_t fk_count = 0;    ///< |fk(q_start)|
  bool distinct_poses = false;
  bool both_in_fk = false;     ///< start gap and carried end gap within the membership tolerance
  /// both_in_fk and the carried end is a different solution than start: the
  /// path links two assembly modes of q_start.
  bool mode_change = false;
  Sign det_sign = Sign::Plus;  ///< constant along the singularity-free path
};

struct AssemblyModeOptions {
  double zero_tol = 1e-6;
  double membership_tol = 1e-6;
  double distinct_tol = 1e-3;
  unsigned threads = 0;
};

/// Traces the path in `mode` and reports how its endpoints relate. The endpoints
/// lie in one generalized aspect because the traced path joins them without
/// meeting a singularity. Throws BranchLost, or kinsep::Error when the trace
/// is singular.
AssemblyModeReport verify_assembly_mode_change(const Manipulator& model, const Waypath& path,
                                               const SignVector& mode, const AssemblyModeOptions& options = {});

struct ModeOutcome {
  SignVector mode;
  std::optional<std::size_t> branch_lost;  ///< first sample without IK in this mode
  std::optional<Violation> violation;
  bool passes() const { return !branch_lost && !violation; }
};

/// Traces the path in every working mode of the model.
std::vector<ModeOutcome> discover_modes(const Manipulator& model, const Waypath& path, double zero_tol,
                                        unsigned threads = 0);

}  // namespace kinsep
