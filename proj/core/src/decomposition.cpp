#include "kinsep/decomposition.hpp"

namespace kinsep {

ModeDecomposition decompose(const Manipulator& model, const SignVector& mode, const GridSpec& grid,
                            const DecompositionOptions& options, DecompositionDepth depth) {
  ModeDecomposition out{sample_field(model, mode, grid, {options.zero_tol, options.threads}), {}, {}};
  out.aspects = generalized_aspects(out.field, {options.min_component_fraction, options.scan_seed});
  if (depth == DecompositionDepth::Aspects) return out;

  const int qcells = options.actuated_cells > 0 ? options.actuated_cells : grid.axis(0).cells;
  const GridSpec qgrid = GridSpec::actuated(model.dof(), qcells);
  const SurfaceOptions sopts{options.zero_tol, options.threads};
  for (const auto& info : out.aspects.aspects) {
    AspectDecomposition ad;
    ad.aspect = info;
    const auto table = SiblingTable::build(model, out.field, out.aspects.aspects, info.label, sopts);
    RegionSplit split = basic_regions(out.field, table, {options.min_region_fraction, 2, 4, options.scan_seed});
    ad.surface_cells = std::move(split.surface_cells);
    ad.regions = std::move(split.regions);
    ad.images = basic_components(out.field, ad.regions, qgrid);
    ad.relations = relate_components(out.field, table, ad.regions, options.relation_threshold);
    if (depth == DecompositionDepth::Domains) {
      ad.domains = uniqueness_domains(out.field, info.label, ad.regions, ad.relations);
    }
    out.per_aspect.push_back(std::move(ad));
  }
  return out;
}

}  // namespace kinsep
