#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kinsep/field.hpp"

namespace kinsep {

/// One generalized aspect of a working mode, seen through its W-projection.
struct AspectInfo {
  int label = kNoLabel;
  Sign det_sign = Sign::Plus;
  SignVector mode;
  std::size_t cells = 0;
};

struct AspectOptions {
  /// Components with fewer cells than this fraction of the mode's feasible
  /// cells are sub-resolution fragments and stay unlabeled.
  double min_component_fraction = 1e-3;
  std::optional<std::uint64_t> scan_seed;
};

struct AspectResult {
  std::vector<AspectInfo> aspects;
  std::size_t unresolved_cells = 0;
  std::size_t dropped_components = 0;
};

/// Labels the aspects of a sampled field: axis-connected groups of regular
/// cells with one sign tuple (det A, B_11 .. B_nn).
AspectResult generalized_aspects(LabeledField& field, const AspectOptions& options = {});

/// Sign class (det A, B_11, ..., B_nn) of an aspect.
struct SignClassKey {
  Sign det = Sign::Plus;
  SignVector mode;

  std::string str() const;  ///< e.g. "(+,+,-)"
  friend auto operator<=>(const SignClassKey&, const SignClassKey&) = default;
  friend bool operator==(const SignClassKey&, const SignClassKey&) = default;
};

using AspectCensus = std::map<SignClassKey, int>;
void add_to_census(AspectCensus& census, const std::vector<AspectInfo>& aspects);
int census_total(const AspectCensus& census);

/// Whether (pose, q) belongs to `aspect`: its own sign tuple must match the
/// aspect's, and the cell holding the pose must not belong to another aspect
/// of the same sign class.
bool pose_in_aspect(const Manipulator& model, const LabeledField& field,
                    const std::vector<AspectInfo>& aspects, int aspect, const Pose& pose,
                    const ActuatedConfig& q, double zero_tol);

struct SurfaceOptions {
  double zero_tol = 1e-6;
  unsigned threads = 0;
  double self_tol = 1e-6;  ///< pose distance under which an FK solution is the cell itself
};

/// For every cell of one aspect, the distinct cells holding the other
/// direct-kinematics solutions of that cell's actuated configuration that
/// belong to the aspect. Closed under symmetry: b is listed for a whenever a
/// is listed for b.
class SiblingTable {
 public:
  static SiblingTable build(const Manipulator& model, const LabeledField& field,
                            const std::vector<AspectInfo>& aspects, int aspect,
                            const SurfaceOptions& options = {});

  int aspect() const { return aspect_; }
  const std::vector<std::size_t>& cells() const { return cells_; }
  std::span<const std::size_t> siblings(std::size_t position) const;
  std::optional<std::size_t> position_of(std::size_t cell) const;

 private:
  int aspect_ = kNoLabel;
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> flat_;
};

/// Rasterized characteristic surfaces of one aspect: cells whose number of
/// same-aspect FK siblings is higher than at an axis neighbour, i.e. where a
/// sibling crosses the aspect boundary. Sorted cell indices.
std::vector<std::size_t> characteristic_surfaces(const LabeledField& field, const SiblingTable& siblings);
std::vector<std::size_t> characteristic_surfaces(const Manipulator& model, const LabeledField& field,
                                                 const std::vector<AspectInfo>& aspects, int aspect,
                                                 const SurfaceOptions& options = {});

/// Direct construction: FK images of the aspect's boundary cells that land
/// back inside the aspect (the cell itself excluded). Sorted cell indices.
std::vector<std::size_t> boundary_images(const Manipulator& model, const LabeledField& field,
                                         const std::vector<AspectInfo>& aspects, int aspect,
                                         const SurfaceOptions& options = {});

/// Aspect cells with an axis neighbour outside the aspect (or off the grid).
std::vector<std::size_t> aspect_boundary(const LabeledField& field, int aspect);

struct RegionInfo {
  int label = kNoLabel;
  int aspect = kNoLabel;
  std::size_t cells = 0;
};

struct RegionOptions {
  /// Fragments below this fraction of the aspect stay unlabeled.
  double min_region_fraction = 1e-3;
  /// Index distance within which the siblings of two neighbouring cells are
  /// taken to be the same continuous solution.
  int match_radius = 2;
  /// Signature refinement passes after the geometric cut.
  int max_passes = 4;
  std::optional<std::uint64_t> scan_seed;
};

struct RegionSplit {
  std::vector<RegionInfo> regions;
  std::vector<std::size_t> surface_cells;  ///< sorted: raised side of every cut plus fragments
};

/// Basic regions of one aspect: its cells grouped along axis links. A link is
/// cut where the in-aspect siblings of the two cells do not pair up one-to-one
/// within `match_radius` cells, i.e. where some sibling enters or leaves the
/// aspect in between (the link crosses a characteristic surface). Cutting
/// links instead of removing surface cells keeps regions thinner than a
/// cell. Cells whose labeled sibling regions differ across a link are then
/// separated as well. Components under min_region_fraction of the aspect stay unlabeled
/// and count as surface. Writes region labels and surface flags into the field.
RegionSplit basic_regions(LabeledField& field, const SiblingTable& siblings, const RegionOptions& options = {});

/// g_i(region) rasterized on an actuated-space grid.
struct RegionImage {
  int region = kNoLabel;
  std::vector<std::size_t> cells;  ///< sorted actuated-grid cells
};

std::vector<RegionImage> basic_components(const LabeledField& field, const std::vector<RegionInfo>& regions,
                                          const GridSpec& actuated_grid);

enum class ImageRelation { Disjoint, Identical, Ambiguous };
const char* to_string(ImageRelation r);

struct ComponentRelation {
  int a = kNoLabel;
  int b = kNoLabel;
  ImageRelation relation = ImageRelation::Ambiguous;
  double a_in_b = 0.0;  ///< share of a's clean cells with an FK sibling in b; NaN without clean cells
  double b_in_a = 0.0;
};

/// Pairwise relation of the basic components of one aspect, measured through
/// FK siblings. Regions with no sibling link are disjoint. Otherwise shares
/// are taken over clean cells (every sibling inside a region): identical when
/// both are >= 1 - threshold, disjoint when both are <= threshold, ambiguous
/// otherwise. A NaN share (no clean cell) satisfies either bound.
std::vector<ComponentRelation> relate_components(const LabeledField& field, const SiblingTable& siblings,
                                                 const std::vector<RegionInfo>& regions,
                                                 double threshold = 0.02);

/// Abstract input of the uniqueness-domain construction.
struct DomainGraph {
  struct Node {
    int label = kNoLabel;
    std::size_t cells = 0;
  };
  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> adjacent;     ///< regions meeting across a surface
  std::vector<std::pair<int, int>> overlapping;  ///< regions whose images coincide
};

/// Greedy maximal unions of adjacent regions with pairwise disjoint images.
/// Seeds are the largest region not yet covered (ties: smaller label); each
/// seed grows by the largest admissible neighbour until none is left. Every
/// region ends up in at least one domain; domains may share regions.
std::vector<std::vector<int>> grow_uniqueness_domains(const DomainGraph& graph);

struct UniquenessDomain {
  int aspect = kNoLabel;
  std::vector<int> regions;                 ///< sorted
  std::vector<std::size_t> surface_cells;   ///< unlabeled cells between its regions, sorted
  std::size_t cells = 0;
};

/// Builds the region graph of one aspect and grows its uniqueness domains.
/// Regions are adjacent when they meet across a link or through unlabeled
/// cells of the aspect. Throws kinsep::Error if a relation is ambiguous.
std::vector<UniquenessDomain> uniqueness_domains(const LabeledField& field, int aspect,
                                                 const std::vector<RegionInfo>& regions,
                                                 const std::vector<ComponentRelation>& relations);

/// Whether a pose (with its own q) lies in the union of `domain`'s regions and surfaces.
bool pose_in_domain(const Manipulator& model, const LabeledField& field,
                    const std::vector<AspectInfo>& aspects, const UniquenessDomain& domain,
                    const Pose& pose, const ActuatedConfig& q, double zero_tol);

struct DecompositionOptions {
  double zero_tol = 1e-6;
  double min_component_fraction = 1e-3;
  double min_region_fraction = 1e-3;
  double relation_threshold = 0.02;
  unsigned threads = 0;
  int actuated_cells = 0;  ///< 0: same count as the first workspace axis
  std::optional<std::uint64_t> scan_seed;
};

enum class DecompositionDepth { Aspects, Regions, Domains };

struct AspectDecomposition {
  AspectInfo aspect;
  std::vector<std::size_t> surface_cells;
  std::vector<RegionInfo> regions;
  std::vector<RegionImage> images;
  std::vector<ComponentRelation> relations;
  std::vector<UniquenessDomain> domains;
};

struct ModeDecomposition {
  LabeledField field;
  AspectResult aspects;
  std::vector<AspectDecomposition> per_aspect;  ///< empty at Aspects depth
};

/// Full pipeline for one working mode.
ModeDecomposition decompose(const Manipulator& model, const SignVector& mode, const GridSpec& grid,
                            const DecompositionOptions& options = {},
                            DecompositionDepth depth = DecompositionDepth::Domains);

}  // namespace kinsep
