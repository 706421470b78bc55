#include "kinsep_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kinsep/decomposition.hpp"
#include "kinsep/errors.hpp"
#include "kinsep/trajectory.hpp"
#include "kinsep_cli/config.hpp"
#include "kinsep_cli/format.hpp"
#include "kinsep_cli/svg.hpp"

namespace kinsep::cli {

namespace {

struct Context {
  const CommandOptions& opts;
  ModelConfig cfg;
  std::unique_ptr<Manipulator> model;
  std::ostream& out;

  double zero_tol() const { return opts.tol.value_or(cfg.tolerance.zero); }
  int dof() const { return model->dof(); }
};

std::vector<double> parse_values(const std::string& text, const char* flag, int dof) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw ConfigError(std::string(flag) + ": cannot parse '" + item + "'");
    }
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != dof && !(dof == 2 && values.size() == 3 && std::string(flag) == "--pose")) {
    throw ConfigError(std::string(flag) + ": expected " + std::to_string(dof) + " comma-separated values");
  }
  return values;
}

Pose parse_pose(const Context& ctx) {
  if (!ctx.opts.pose) throw ConfigError("--pose is required");
  const auto v = parse_values(*ctx.opts.pose, "--pose", ctx.dof());
  return Pose(v[0], v[1], v.size() > 2 ? v[2] : 0.0);
}

ActuatedConfig parse_q(const Context& ctx) {
  return ActuatedConfig(parse_values(*ctx.opts.q, "--q", ctx.dof()));
}

std::vector<SignVector> selected_modes(const Context& ctx) {
  if (!ctx.opts.mode) return enumerate_working_modes(ctx.dof());
  SignVector m;
  try {
    m = SignVector::parse(*ctx.opts.mode);
  } catch (const std::invalid_argument&) {
    throw ConfigError("--mode: expected a string of '+' and '-', got '" + *ctx.opts.mode + "'");
  }
  if (static_cast<int>(m.size()) != ctx.dof()) {
    throw ConfigError("--mode: expected " + std::to_string(ctx.dof()) + " signs for this model");
  }
  return {m};
}

std::string class_string(const JacobianPair& jp, double zero_tol) {
  std::string s;
  for (double b : jp.b_diagonal) s += to_char(classify_sign(b, zero_tol));
  return s;
}

GridConfig effective_grid(const Context& ctx) {
  GridConfig g = ctx.cfg.grid_or_default();
  if (ctx.opts.grid) apply_grid_override(g, *ctx.opts.grid, ctx.dof());
  return g;
}

void write_file(const Context& ctx, const std::string& name, const std::function<void(std::ostream&)>& body) {
  const auto path = *ctx.opts.out_dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  body(f);
  if (!f) throw Error("write failed: " + path.string());
}

// Writes to the named file under --out, or to stdout when there is no --out.
void emit(const Context& ctx, const std::string& name, const std::function<void(std::ostream&)>& body) {
  if (ctx.opts.out_dir) {
    write_file(ctx, name, body);
  } else {
    body(ctx.out);
  }
}

std::vector<std::string> numbered(const std::string& stem, int n, bool doubled = false) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(doubled ? stem + std::to_string(i) + std::to_string(i) : stem + std::to_string(i));
  return out;
}

std::vector<std::string> joined(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<std::string> cell_header(int dims) {
  return dims == 3 ? std::vector<std::string>{"i", "j", "k", "x", "y", "phi"}
                   : std::vector<std::string>{"i", "j", "x", "y"};
}

void cell_fields(CsvWriter& w, const GridSpec& grid, std::size_t c) {
  const auto idx = grid.unravel(c);
  const auto center = grid.center(c);
  for (std::size_t d = 0; d < grid.dims(); ++d) w.field(idx[d]);
  for (double v : center) w.field(v);
}

void write_field_csv(std::ostream& os, const LabeledField& field, const std::vector<std::string>* extra_header,
                     const std::function<void(CsvWriter&, std::size_t)>& extra) {
  CsvWriter w(os);
  const int n = static_cast<int>(field.dof());
  auto header = joined({cell_header(static_cast<int>(field.grid().dims())), {"feasible", "det_a"},
                        numbered("b", n, true), {"aspect", "region", "surface"}});
  if (extra_header) header.insert(header.end(), extra_header->begin(), extra_header->end());
  w.header(header);
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (!field.feasible(c)) continue;
    cell_fields(w, field.grid(), c);
    w.field(1).field(std::string(1, to_char(field.det_sign(c))));
    for (int j = 0; j < n; ++j) w.field(std::string(1, to_char(field.b_sign(c, j))));
    w.field(field.aspect(c)).field(field.region(c)).field(field.surface(c) ? 1 : 0);
    if (extra) extra(w, c);
    w.end_row();
  }
}

void write_empty_field_csv(std::ostream& os, int dof) {
  CsvWriter w(os);
  w.header(joined({cell_header(dof == 3 ? 3 : 2), {"feasible", "det_a"}, numbered("b", dof, true),
                   {"aspect", "region", "surface"}}));
}

// 2-D grids render whole; 3-D grids render the phi slice holding phi = 0.
LabelRaster raster_of(const LabeledField& field, const std::function<int(std::size_t)>& label,
                      const std::function<bool(std::size_t)>& marked) {
  const GridSpec& g = field.grid();
  LabelRaster r;
  r.nx = g.axis(0).cells;
  r.ny = g.axis(1).cells;
  r.x_min = g.axis(0).min;
  r.x_max = g.axis(0).max;
  r.y_min = g.axis(1).min;
  r.y_max = g.axis(1).max;
  const int k = g.dims() == 3 ? g.axis(2).locate(0.0).value_or(0) : 0;
  r.labels.assign(static_cast<std::size_t>(r.nx) * r.ny, -1);
  r.marked.assign(r.labels.size(), false);
  for (int i = 0; i < r.nx; ++i) {
    for (int j = 0; j < r.ny; ++j) {
      const std::size_t c = g.flat({i, j, k});
      const std::size_t p = static_cast<std::size_t>(i) * r.ny + j;
      r.labels[p] = label(c);
      r.marked[p] = marked(c);
    }
  }
  return r;
}

void maybe_svg(const Context& ctx, const std::string& name, const LabelRaster& raster) {
  if (!ctx.opts.svg) return;
  if (!ctx.opts.out_dir) throw ConfigError("--svg requires --out");
  write_file(ctx, name, [&](std::ostream& os) { write_svg(os, raster); });
}

DecompositionOptions decomposition_options(const Context& ctx, const GridConfig& g) {
  DecompositionOptions o;
  o.zero_tol = ctx.zero_tol();
  o.min_component_fraction = ctx.cfg.tolerance.min_component_fraction;
  o.min_region_fraction = ctx.cfg.tolerance.min_region_fraction;
  o.relation_threshold = ctx.cfg.tolerance.relation_threshold;
  o.threads = ctx.opts.threads;
  o.actuated_cells = g.nx;
  return o;
}

// ---- ik / fk / jacobians -------------------------------------------------

int cmd_ik(Context& ctx) {
  const Pose pose = parse_pose(ctx);
  std::vector<BranchedSolution> sols;
  if (ctx.opts.mode) {
    if (auto s = ctx.model->ik_mode(pose, selected_modes(ctx).front())) sols.push_back(*s);
  } else {
    sols = ctx.model->ik(pose);
  }
  emit(ctx, "ik.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header(joined({{"branch", "mode"}, numbered("q", ctx.dof()), {"residual", "serial_singular"}}));
    for (std::size_t b = 0; b < sols.size(); ++b) {
      w.field(b).field(sols[b].mode.str());
      for (std::size_t j = 0; j < sols[b].q.size(); ++j) w.field(sols[b].q[j]);
      w.field(max_abs(ctx.model->residual(pose, sols[b].q))).field(sols[b].singular() ? 1 : 0);
      w.end_row();
    }
  });
  return kOk;
}

int cmd_fk(Context& ctx) {
  if (!ctx.opts.q) throw ConfigError("--q is required");
  const ActuatedConfig q = parse_q(ctx);
  const auto sols = ctx.model->fk(q);
  emit(ctx, "fk.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"branch", "mode", "x", "y", "phi", "det_a", "residual", "singular"});
    std::size_t b = 0;
    for (const auto& a : sols) {
      const JacobianPair jp = ctx.model->jacobians(a.pose, q);
      const std::string mode = class_string(jp, ctx.zero_tol());
      if (ctx.opts.mode && mode != *ctx.opts.mode) continue;
      w.field(b++).field(mode).field(a.pose.x()).field(a.pose.y()).field(a.pose.phi()).field(jp.det_a);
      w.field(max_abs(ctx.model->residual(a.pose, q))).field(a.singular ? 1 : 0);
      w.end_row();
    }
  });
  return kOk;
}

int cmd_jacobians(Context& ctx) {
  const Pose pose = parse_pose(ctx);
  std::vector<ActuatedConfig> qs;
  if (ctx.opts.q) {
    qs.push_back(parse_q(ctx));
  } else {
    for (const auto& mode : selected_modes(ctx)) {
      if (auto s = ctx.model->ik_mode(pose, mode)) qs.push_back(s->q);
    }
  }
  const int n = ctx.dof();
  std::vector<std::string> a_names;
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) a_names.push_back("a" + std::to_string(r) + std::to_string(c));
  }
  std::vector<JacobianPair> jps;
  for (const auto& q : qs) jps.push_back(ctx.model->jacobians(pose, q));
  emit(ctx, "jacobians.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header(joined({{"branch", "mode"}, numbered("q", n), {"det_a", "det_b"}, numbered("b", n, true), a_names}));
    for (std::size_t b = 0; b < qs.size(); ++b) {
      const auto& jp = jps[b];
      w.field(b).field(class_string(jp, ctx.zero_tol()));
      for (int j = 0; j < n; ++j) w.field(qs[b][j]);
      w.field(jp.det_a).field(jp.det_b);
      for (double v : jp.b_diagonal) w.field(v);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) w.field(jp.a_matrix(r, c));
      }
      w.end_row();
    }
  });
  return kOk;
}

// ---- singularities ---------------------------------------------------------

int cmd_singularities(Context& ctx) {
  std::vector<SingularityCircle> circles;
  if (const auto* rr = dynamic_cast<const RrRrrModel*>(ctx.model.get())) {
    const auto c = rr->serial_singularity_curves();
    circles.assign(c.begin(), c.end());
  } else {
    const auto c = dynamic_cast<const ThreeRrrModel&>(*ctx.model).serial_singularity_curves();
    circles.assign(c.begin(), c.end());
  }
  emit(ctx, "serial.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"leg", "kind", "center_x", "center_y", "radius"});
    for (const auto& c : circles) {
      w.field(c.leg + 1).field(c.outer ? "outer" : "inner").field(c.center.x).field(c.center.y).field(c.radius);
      w.end_row();
    }
  });
  if (!ctx.opts.out_dir) return kOk;

  const GridConfig g = effective_grid(ctx);
  for (const auto& mode : selected_modes(ctx)) {
    const std::string tag = mode_tag(mode.str());
    if (g.empty()) {
      write_file(ctx, "parallel_" + tag + ".csv", [&](std::ostream& os) { CsvWriter(os).header(cell_header(ctx.dof() == 3 ? 3 : 2)); });
      continue;
    }
    const LabeledField field = sample_field(*ctx.model, mode, g.spec(), {ctx.zero_tol(), ctx.opts.threads});
    const auto cells = parallel_singular_cells(field);
    write_file(ctx, "parallel_" + tag + ".csv", [&](std::ostream& os) {
      CsvWriter w(os);
      w.header(cell_header(static_cast<int>(field.grid().dims())));
      for (std::size_t c : cells) {
        cell_fields(w, field.grid(), c);
        w.end_row();
      }
    });
    maybe_svg(ctx, "parallel_" + tag + ".svg",
              raster_of(
                  field, [&](std::size_t c) { return field.feasible(c) ? (field.det_sign(c) == SignClass::Minus ? 1 : 0) : -1; },
                  [&](std::size_t c) { return std::binary_search(cells.begin(), cells.end(), c); }));
  }
  return kOk;
}

// ---- aspects / regions / domains -----------------------------------------

std::vector<std::string> census_header(int dof) { return joined({{"det_a"}, numbered("b", dof, true), {"count"}}); }

int cmd_aspects(Context& ctx) {
  const GridConfig g = effective_grid(ctx);
  AspectCensus census;
  std::ostringstream summary;
  CsvWriter sw(summary);
  sw.header({"mode", "aspects", "feasible_cells", "unresolved_cells", "dropped_components"});
  for (const auto& mode : selected_modes(ctx)) {
    const std::string tag = mode_tag(mode.str());
    if (g.empty()) {
      if (ctx.opts.out_dir) write_file(ctx, "aspects_" + tag + ".csv", [&](std::ostream& os) { write_empty_field_csv(os, ctx.dof()); });
      sw.field(mode.str()).field(0).field(0).field(0).field(0);
      sw.end_row();
      continue;
    }
    const auto d = decompose(*ctx.model, mode, g.spec(), decomposition_options(ctx, g), DecompositionDepth::Aspects);
    add_to_census(census, d.aspects.aspects);
    sw.field(mode.str()).field(d.aspects.aspects.size()).field(d.field.feasible_count());
    sw.field(d.aspects.unresolved_cells).field(d.aspects.dropped_components);
    sw.end_row();
    if (!ctx.opts.out_dir) continue;
    write_file(ctx, "aspects_" + tag + ".csv", [&](std::ostream& os) { write_field_csv(os, d.field, nullptr, {}); });
    maybe_svg(ctx, "aspects_" + tag + ".svg",
              raster_of(d.field, [&](std::size_t c) { return d.field.aspect(c); }, [](std::size_t) { return false; }));
  }
  auto write_census = [&](std::ostream& os) {
    CsvWriter w(os);
    w.header(census_header(ctx.dof()));
    for (const auto& [key, count] : census) {
      w.field(std::string(1, to_char(key.det)));
      for (Sign s : key.mode.signs()) w.field(std::string(1, to_char(s)));
      w.field(count);
      w.end_row();
    }
    w.field("total");
    for (int j = 0; j < ctx.dof(); ++j) w.field("");
    w.field(census_total(census));
    w.end_row();
  };
  write_census(ctx.out);
  if (ctx.opts.out_dir) {
    write_file(ctx, "census.csv", write_census);
    write_file(ctx, "aspects_summary.csv", [&](std::ostream& os) { os << summary.str(); });
  }
  return kOk;
}

int cmd_regions_or_domains(Context& ctx, bool domains) {
  const GridConfig g = effective_grid(ctx);
  const auto depth = domains ? DecompositionDepth::Domains : DecompositionDepth::Regions;
  std::ostringstream regions_csv, relations_csv, components_csv, domains_csv;
  CsvWriter rw(regions_csv), lw(relations_csv), cw(components_csv), dw(domains_csv);
  rw.header({"mode", "aspect", "det_a", "region", "cells"});
  lw.header({"mode", "aspect", "a", "b", "relation", "a_in_b", "b_in_a"});
  cw.header({"mode", "region", "q_cells"});
  dw.header({"mode", "aspect", "domain", "regions", "cells", "surface_cells"});

  const char* stem = domains ? "domains_" : "regions_";
  for (const auto& mode : selected_modes(ctx)) {
    const std::string tag = mode_tag(mode.str());
    if (g.empty()) {
      if (ctx.opts.out_dir) write_file(ctx, stem + tag + ".csv", [&](std::ostream& os) { write_empty_field_csv(os, ctx.dof()); });
      continue;
    }
    const auto d = decompose(*ctx.model, mode, g.spec(), decomposition_options(ctx, g), depth);
    std::map<std::size_t, std::vector<int>> membership;
    int domain_id = 0;
    for (const auto& ad : d.per_aspect) {
      const std::string det(1, to_char(ad.aspect.det_sign));
      for (const auto& r : ad.regions) {
        rw.field(mode.str()).field(ad.aspect.label).field(det).field(r.label).field(r.cells);
        rw.end_row();
      }
      for (const auto& rel : ad.relations) {
        lw.field(mode.str()).field(ad.aspect.label).field(rel.a).field(rel.b).field(to_string(rel.relation));
        lw.field(rel.a_in_b).field(rel.b_in_a);
        lw.end_row();
      }
      for (const auto& img : ad.images) {
        cw.field(mode.str()).field(img.region).field(img.cells.size());
        cw.end_row();
      }
      for (const auto& dom : ad.domains) {
        std::string members;
        for (int r : dom.regions) members += (members.empty() ? "" : ";") + std::to_string(r);
        dw.field(mode.str()).field(ad.aspect.label).field(domain_id).field(members).field(dom.cells);
        dw.field(dom.surface_cells.size());
        dw.end_row();
        for (std::size_t c = 0; c < d.field.size(); ++c) {
          const bool in_region = std::binary_search(dom.regions.begin(), dom.regions.end(), d.field.region(c));
          if (in_region || std::binary_search(dom.surface_cells.begin(), dom.surface_cells.end(), c)) {
            membership[c].push_back(domain_id);
          }
        }
        ++domain_id;
      }
    }
    if (!ctx.opts.out_dir) continue;
    if (domains) {
      const std::vector<std::string> extra{"domains"};
      write_file(ctx, stem + tag + ".csv", [&](std::ostream& os) {
        write_field_csv(os, d.field, &extra, [&](CsvWriter& w, std::size_t c) {
          std::string ids;
          if (const auto it = membership.find(c); it != membership.end()) {
            for (int id : it->second) ids += (ids.empty() ? "" : ";") + std::to_string(id);
          }
          w.field(ids);
        });
      });
      maybe_svg(ctx, stem + tag + ".svg",
                raster_of(
                    d.field,
                    [&](std::size_t c) {
                      const auto it = membership.find(c);
                      return it == membership.end() ? -1 : it->second.front();
                    },
                    [&](std::size_t c) { return d.field.surface(c); }));
    } else {
      write_file(ctx, stem + tag + ".csv", [&](std::ostream& os) { write_field_csv(os, d.field, nullptr, {}); });
      maybe_svg(ctx, stem + tag + ".svg",
                raster_of(d.field, [&](std::size_t c) { return d.field.region(c); },
                          [&](std::size_t c) { return d.field.surface(c); }));
    }
  }
  if (domains) {
    ctx.out << domains_csv.str();
    if (ctx.opts.out_dir) write_file(ctx, "domains.csv", [&](std::ostream& os) { os << domains_csv.str(); });
  } else {
    ctx.out << regions_csv.str();
  }
  if (ctx.opts.out_dir) {
    write_file(ctx, "regions.csv", [&](std::ostream& os) { os << regions_csv.str(); });
    write_file(ctx, "relations.csv", [&](std::ostream& os) { os << relations_csv.str(); });
    write_file(ctx, "components.csv", [&](std::ostream& os) { os << components_csv.str(); });
  }
  return kOk;
}

// ---- trajectory -------------------------------------------------------------

std::string verdict_text(const std::optional<Violation>& v) {
  if (!v) return "PASS";
  return "VIOLATION(" + std::to_string(v->sample) + "," + DeterminantTrace::series_name(v->series) + ")";
}

void write_trace(std::ostream& os, const DeterminantTrace& t, const std::optional<Violation>& verdict, int dof) {
  CsvWriter w(os);
  std::vector<std::string> series, normalized;
  for (std::size_t s = 0; s < t.series.size(); ++s) {
    series.push_back(DeterminantTrace::series_name(s));
    normalized.push_back("n_" + DeterminantTrace::series_name(s));
  }
  w.header(joined({{"sample", "x", "y", "phi"}, numbered(dof == 3 ? "alpha" : "theta", dof), series, normalized}));
  for (std::size_t k = 0; k < t.samples(); ++k) {
    w.field(k).field(t.poses[k].x()).field(t.poses[k].y()).field(t.poses[k].phi());
    for (int j = 0; j < dof; ++j) w.field(t.q[k][j]);
    for (const auto& s : t.series) w.field(s[k]);
    for (const auto& s : t.normalized) w.field(s[k]);
    w.end_row();
  }
  os << verdict_text(verdict) << '\n';
}

int cmd_trajectory(Context& ctx) {
  if (!ctx.cfg.trajectory) throw ConfigError("config has no trajectory block");
  const Waypath& path = *ctx.cfg.trajectory;
  const double tol = ctx.zero_tol();

  if (ctx.opts.mode) {
    const SignVector mode = selected_modes(ctx).front();
    const DeterminantTrace t = trace(*ctx.model, path, mode, ctx.opts.threads);
    const auto verdict = verify_nonsingular(t, tol);
    emit(ctx, "trajectory_" + mode_tag(mode.str()) + ".csv", [&](std::ostream& os) { write_trace(os, t, verdict, ctx.dof()); });
    return kOk;
  }

  std::ostringstream table;
  CsvWriter w(table);
  w.header({"mode", "verdict", "det_sign", "q_distance", "pose_gap", "start_fk_gap", "end_fk_gap",
            "end_fk_gap_carried", "carried_to_start", "fk_count", "both_in_fk", "mode_change"});
  std::size_t traced = 0;
  for (const auto& mode : enumerate_working_modes(ctx.dof())) {
    std::optional<DeterminantTrace> t;
    try {
      t = trace(*ctx.model, path, mode, ctx.opts.threads);
    } catch (const BranchLost& e) {
      w.field(mode.str()).field("BRANCH_LOST(" + std::to_string(e.sample()) + ")");
      for (int i = 0; i < 10; ++i) w.field("");
      w.end_row();
      continue;
    }
    ++traced;
    const auto verdict = verify_nonsingular(*t, tol);
    if (ctx.opts.out_dir) {
      write_file(ctx, "trajectory_" + mode_tag(mode.str()) + ".csv", [&](std::ostream& os) { write_trace(os, *t, verdict, ctx.dof()); });
    }
    w.field(mode.str()).field(verdict_text(verdict));
    if (verdict) {
      for (int i = 0; i < 10; ++i) w.field("");
    } else {
      AssemblyModeOptions o;
      o.zero_tol = tol;
      o.threads = ctx.opts.threads;
      const auto r = verify_assembly_mode_change(*ctx.model, path, mode, o);
      w.field(std::string(1, to_char(r.det_sign))).field(r.q_distance).field(r.pose_gap);
      w.field(r.start_fk_gap).field(r.end_fk_gap).field(r.end_fk_gap_carried).field(r.carried_to_start).field(r.fk_count);
      w.field(r.both_in_fk ? 1 : 0).field(r.mode_change ? 1 : 0);
    }
    w.end_row();
  }
  ctx.out << table.str();
  if (ctx.opts.out_dir) write_file(ctx, "trajectory_modes.csv", [&](std::ostream& os) { os << table.str(); });
  return traced == 0 ? kBranchLost : kOk;
}

using Handler = int (*)(Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"ik", cmd_ik},
      {"fk", cmd_fk},
      {"jacobians", cmd_jacobians},
      {"singularities", cmd_singularities},
      {"aspects", cmd_aspects},
      {"regions", [](Context& c) { return cmd_regions_or_domains(c, false); }},
      {"domains", [](Context& c) { return cmd_regions_or_domains(c, true); }},
      {"trajectory", cmd_trajectory},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"ik",      "fk",      "jacobians", "singularities",
                                                 "aspects", "regions", "domains",   "trajectory"};
  return names;
}

int run_command(const std::string& name, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto it = handlers().find(name);
  if (it == handlers().end()) {
    err << "unknown command '" << name << "'\n";
    return kConfigError;
  }
  try {
    Context ctx{options, load_config(options.config), nullptr, out};
    ctx.model = ctx.cfg.make_model();
    if (options.tol && !(*options.tol >= 0.0 && *options.tol < 1.0)) throw ConfigError("--tol: expected a value in [0, 1)");
    if (options.out_dir) std::filesystem::create_directories(*options.out_dir);
    return it->second(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BranchLost& e) {
    err << "branch lost at sample " << e.sample() << '\n';
    return kBranchLost;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace kinsep::cli
