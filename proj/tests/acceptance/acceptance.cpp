// Acceptance run: one PASS/FAIL line per criterion, tolerances and time
// budgets pinned below. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "kinsep/decomposition.hpp"
#include "kinsep/errors.hpp"
#include "kinsep/rr_rrr.hpp"
#include "kinsep/three_rrr.hpp"
#include "kinsep/trajectory.hpp"
#include "kinsep_cli/commands.hpp"
#include "kinsep_cli/config.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using kinsep::ActuatedConfig;
using kinsep::Pose;
using kinsep::SignVector;

namespace {

constexpr int kPoses = 10000;
constexpr int kConfigs = 10000;
constexpr int kJacobianConfigs = 1000;
constexpr int kRegionPoses = 1000;
constexpr double kAngleTol = 1e-9;
constexpr double kMirrorTol = 1e-9;
constexpr double kResidualTol = 1e-8;
constexpr double kRoundTripTol = 1e-6;
constexpr double kFdStep = 1e-6;
constexpr double kFdRelTol = 1e-5;
constexpr double kZeroTol = 1e-6;

// Sampling box of the five-bar: both reach disks fit inside.
constexpr double kRrLo = -13.0;
constexpr double kRrHi = 22.0;
// Sampling box of the 3-RRR poses.
constexpr double kThreeLo = -20.0;
constexpr double kThreeHi = 10.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  double budget_s;
  std::function<Outcome()> run;
};

const kinsep::RrRrrModel& five_bar() {
  static const kinsep::RrRrrModel m;
  return m;
}

const kinsep::ThreeRrrModel& three_rrr() {
  static const kinsep::ThreeRrrModel m;
  return m;
}

fs::path config_path(const char* name) { return fs::path(KINSEP_CONFIG_DIR) / name; }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Pose feasible_pose(const kinsep::Manipulator& model, std::mt19937_64& rng, double lo, double hi) {
  for (;;) {
    const Pose p = oracle::random_pose(rng, lo, hi, model.dof() == 3);
    if (!model.ik(p).empty()) return p;
  }
}

Outcome working_modes() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t a = kinsep::enumerate_working_modes(2).size();
  const std::size_t b = kinsep::enumerate_working_modes(3).size();
  const std::size_t c = kinsep::enumerate_working_modes(6).size();
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {a == 4 && b == 8 && c == 64 && ms < 1.0,
          fmt("n=2:%g n=3:%g n=6:", double(a), double(b)) + std::to_string(c) + fmt(" in %.3f ms", ms)};
}

bool same_config(const ActuatedConfig& a, const ActuatedConfig& b) {
  return kinsep::config_distance(a, b) <= kAngleTol;
}

Outcome ik_partition() {
  std::mt19937_64 rng(101);
  const auto modes = kinsep::enumerate_working_modes(2);
  std::size_t most = 0, mismatches = 0;
  for (int k = 0; k < kPoses; ++k) {
    const Pose p = feasible_pose(five_bar(), rng, kRrLo, kRrHi);
    const auto all = five_bar().ik(p);
    most = std::max(most, all.size());
    std::vector<ActuatedConfig> branches;
    for (const auto& mode : modes) {
      if (auto s = five_bar().ik_mode(p, mode)) branches.push_back(s->q);
    }
    bool equal = branches.size() == all.size();
    for (const auto& s : all) {
      equal = equal && std::any_of(branches.begin(), branches.end(), [&](const ActuatedConfig& q) {
                return same_config(q, s.q);
              });
    }
    if (!equal) ++mismatches;
  }
  return {most <= 4 && mismatches == 0,
          fmt("max IK %g, partition mismatches %g over %g poses", double(most), double(mismatches), kPoses)};
}

kinsep::Vec2 mirror(kinsep::Vec2 p, kinsep::Vec2 a, kinsep::Vec2 b) {
  const kinsep::Vec2 e = (1.0 / kinsep::norm(b - a)) * (b - a);
  const kinsep::Vec2 foot = a + kinsep::dot(p - a, e) * e;
  return foot + foot - p;
}

Outcome fk_bounds() {
  std::mt19937_64 rng(202);
  std::size_t rr_most = 0, pairs = 0, asymmetric = 0;
  for (int k = 0; k < kConfigs; ++k) {
    const ActuatedConfig q = oracle::random_config(rng, 2);
    const auto sols = five_bar().fk(q);
    rr_most = std::max(rr_most, sols.size());
    if (sols.size() != 2) continue;
    ++pairs;
    const kinsep::Vec2 m = mirror({sols[0].pose.x(), sols[0].pose.y()}, five_bar().passive_pivot(0, q[0]),
                                  five_bar().passive_pivot(1, q[1]));
    if (std::max(std::abs(m.x - sols[1].pose.x()), std::abs(m.y - sols[1].pose.y())) > kMirrorTol) ++asymmetric;
  }
  std::size_t three_most = 0, solved = 0, bad_residual = 0;
  double worst = 0.0;
  for (int k = 0; k < kConfigs; ++k) {
    const ActuatedConfig q = oracle::random_config(rng, 3);
    const auto sols = three_rrr().fk(q);
    three_most = std::max(three_most, sols.size());
    solved += sols.empty() ? 0 : 1;
    for (const auto& s : sols) {
      const double r = kinsep::max_abs(three_rrr().residual(s.pose, q));
      worst = std::max(worst, r);
      if (r > kResidualTol) ++bad_residual;
    }
  }
  return {rr_most <= 2 && asymmetric == 0 && three_most <= 6 && bad_residual == 0,
          fmt("five-bar max %g, asymmetric %g of %g pairs; ", double(rr_most), double(asymmetric), double(pairs)) +
              fmt("3-RRR max %g over %g assemblable configs, worst residual %.2e", double(three_most),
                  double(solved), worst)};
}

std::size_t round_trip_misses(const kinsep::Manipulator& model, std::mt19937_64& rng, double lo, double hi,
                              std::size_t& branches) {
  std::size_t misses = 0;
  for (int k = 0; k < kPoses; ++k) {
    const Pose p = feasible_pose(model, rng, lo, hi);
    for (const auto& s : model.ik(p)) {
      if (s.singular()) continue;
      ++branches;
      std::vector<Pose> poses;
      for (const auto& a : model.fk(s.q)) poses.push_back(a.pose);
      if (!oracle::contains_pose(poses, p, kRoundTripTol)) ++misses;
    }
  }
  return misses;
}

Outcome round_trip() {
  std::mt19937_64 rng(303);
  std::size_t rr_branches = 0, three_branches = 0;
  const std::size_t rr = round_trip_misses(five_bar(), rng, kRrLo, kRrHi, rr_branches);
  const std::size_t three = round_trip_misses(three_rrr(), rng, kThreeLo, kThreeHi, three_branches);
  return {rr == 0 && three == 0, fmt("five-bar misses %g of %g branches; ", double(rr), double(rr_branches)) +
                                     fmt("3-RRR misses %g of %g branches", double(three), double(three_branches))};
}

template <class F>
double jacobian_error(const kinsep::Manipulator& model, F constraints, std::mt19937_64& rng, double lo, double hi) {
  double worst = 0.0;
  int checked = 0;
  const auto n = static_cast<Eigen::Index>(model.dof());
  while (checked < kJacobianConfigs) {
    const Pose p = feasible_pose(model, rng, lo, hi);
    const auto sols = model.ik(p);
    const auto& s = sols[std::uniform_int_distribution<std::size_t>(0, sols.size() - 1)(rng)];
    if (s.singular()) continue;
    const auto jp = model.jacobians(p, s.q);
    Eigen::VectorXd x(n), q(n);
    x[0] = p.x();
    x[1] = p.y();
    if (n == 3) x[2] = p.phi();
    for (Eigen::Index j = 0; j < n; ++j) q[j] = s.q[static_cast<std::size_t>(j)];
    const auto fd = oracle::central_differences(constraints, x, q, kFdStep);
    const double a_scale = std::max(1.0, jp.a_matrix.cwiseAbs().maxCoeff());
    worst = std::max(worst, (fd.a - jp.a_matrix).cwiseAbs().maxCoeff() / a_scale);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double b = jp.b_diagonal[static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(fd.b[j] - b) / std::max(1.0, std::abs(b)));
    }
    ++checked;
  }
  return worst;
}

Outcome jacobians() {
  std::mt19937_64 rng(404);
  const double rr = jacobian_error(
      five_bar(),
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& q) { return oracle::rr_rrr_constraints({}, x, q); }, rng,
      kRrLo, kRrHi);
  const double three = jacobian_error(
      three_rrr(),
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& q) {
        return oracle::three_rrr_constraints(three_rrr().params(), x, q);
      },
      rng, kThreeLo, kThreeHi);
  return {rr <= kFdRelTol && three <= kFdRelTol,
          fmt("worst relative error five-bar %.2e, 3-RRR %.2e", rr, three)};
}

kinsep::GridSpec five_bar_grid(int cells) { return kinsep::GridSpec::planar({-20, 20, cells}, {-20, 20, cells}); }

Outcome census() {
  const std::map<std::string, int> expected{{"(+,+,+)", 1}, {"(+,+,-)", 1}, {"(+,-,+)", 2}, {"(+,-,-)", 1},
                                            {"(-,+,+)", 1}, {"(-,+,-)", 2}, {"(-,-,+)", 1}, {"(-,-,-)", 1}};
  bool pass = true;
  std::string detail;
  for (int cells : {400, 800}) {
    kinsep::AspectCensus c;
    for (const auto& mode : kinsep::enumerate_working_modes(2)) {
      auto field = kinsep::sample_field(five_bar(), mode, five_bar_grid(cells), {kZeroTol, 0});
      kinsep::add_to_census(c, kinsep::generalized_aspects(field).aspects);
    }
    std::map<std::string, int> text;
    for (const auto& [key, n] : c) text[key.str()] = n;
    pass = pass && text == expected;
    detail += std::to_string(cells) + "^2:";
    for (const auto& [key, n] : text) detail += " " + key + "=" + std::to_string(n);
    detail += " total " + std::to_string(kinsep::census_total(c)) + (cells == 400 ? "; " : "");
  }
  return {pass, detail};
}

Outcome assembly_mode_change() {
  const auto cfg = kinsep::cli::load_config(config_path("three_rrr_mode_change.cfg"));
  const auto model = cfg.make_model();
  const kinsep::Waypath path = *cfg.trajectory;
  bool pass = false;
  std::string detail = fmt("%g samples/segment; passing modes:", path.samples_per_segment);
  for (const auto& outcome : kinsep::discover_modes(*model, path, kZeroTol)) {
    if (!outcome.passes()) continue;
    const auto r = kinsep::verify_assembly_mode_change(*model, path, outcome.mode, {kZeroTol});
    const auto a = model->jacobians(r.start, r.q_start);
    const auto b = model->jacobians(r.end, r.q_end);
    bool same_aspect = kinsep::classify_sign(a.det_a, kZeroTol) == kinsep::classify_sign(b.det_a, kZeroTol);
    for (std::size_t j = 0; j < a.b_diagonal.size(); ++j) {
      same_aspect = same_aspect &&
                    kinsep::classify_sign(a.b_diagonal[j], kZeroTol) == kinsep::classify_sign(b.b_diagonal[j], kZeroTol);
    }
    pass = pass || (r.distinct_poses && same_aspect);
    detail += " " + outcome.mode.str() + fmt(" (pose gap %.3f, |dq| %.3g, ", r.pose_gap, r.q_distance) +
              (r.mode_change ? "assembly change" : "no assembly change") + (same_aspect ? ", same aspect)" : ")");
  }
  return {pass, detail};
}

Outcome unique_in_region() {
  std::mt19937_64 rng(505);
  std::size_t regions = 0, sampled = 0, violations = 0;
  for (const auto& mode : kinsep::enumerate_working_modes(2)) {
    const auto dec = kinsep::decompose(five_bar(), mode, five_bar_grid(400), {}, kinsep::DecompositionDepth::Regions);
    const auto& field = dec.field;
    const auto& grid = field.grid();
    for (const auto& ad : dec.per_aspect) {
      for (const auto& region : ad.regions) {
        ++regions;
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < field.size(); ++c) {
          if (field.region(c) == region.label) cells.push_back(c);
        }
        std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int taken = 0;
        for (int attempt = 0; taken < kRegionPoses && attempt < 100 * kRegionPoses; ++attempt) {
          const auto box = grid.cell_box(cells[pick(rng)]);
          const Pose p(box.x_min + u(rng) * (box.x_max - box.x_min), box.y_min + u(rng) * (box.y_max - box.y_min));
          const auto own = grid.locate(p);
          if (!own || field.region(*own) != region.label) continue;
          const auto s = five_bar().ik_mode(p, mode);
          if (!s || !kinsep::pose_in_aspect(five_bar(), field, dec.aspects.aspects, region.aspect, p, s->q, kZeroTol)) {
            continue;
          }
          ++taken;
          int inside = 0;
          for (const auto& a : five_bar().fk(s->q)) {
            const auto cell = grid.locate(a.pose);
            if (!cell || field.region(*cell) != region.label) continue;
            if (kinsep::pose_in_aspect(five_bar(), field, dec.aspects.aspects, region.aspect, a.pose, s->q, kZeroTol)) {
              ++inside;
            }
          }
          if (inside != 1) ++violations;
        }
        sampled += static_cast<std::size_t>(taken);
        if (taken < kRegionPoses) ++violations;
      }
    }
  }
  return {regions > 0 && violations == 0,
          fmt("%g regions, %g poses, %g without a unique in-region assembly", double(regions), double(sampled),
              double(violations))};
}

Outcome no_ambiguous() {
  std::size_t pairs = 0, identical = 0, ambiguous = 0;
  auto tally = [&](const kinsep::ModeDecomposition& dec) {
    for (const auto& ad : dec.per_aspect) {
      for (const auto& r : ad.relations) {
        ++pairs;
        identical += r.relation == kinsep::ImageRelation::Identical ? 1 : 0;
        ambiguous += r.relation == kinsep::ImageRelation::Ambiguous ? 1 : 0;
      }
    }
  };
  for (const auto& mode : kinsep::enumerate_working_modes(2)) {
    tally(kinsep::decompose(five_bar(), mode, five_bar_grid(400), {}, kinsep::DecompositionDepth::Regions));
  }
  const auto cfg = kinsep::cli::load_config(config_path("three_rrr.cfg"));
  const auto model = cfg.make_model();
  const auto grid = cfg.grid_or_default();
  kinsep::DecompositionOptions options;
  options.actuated_cells = grid.nx;
  for (const auto& mode : kinsep::enumerate_working_modes(3)) {
    tally(kinsep::decompose(*model, mode, grid.spec(), options, kinsep::DecompositionDepth::Regions));
  }
  return {ambiguous == 0, fmt("%g pairs (five-bar 400^2, 3-RRR %g^3): %g identical, ", double(pairs), grid.nx,
                              double(identical)) +
                              std::to_string(ambiguous) + " ambiguous"};
}

using Snapshot = std::map<std::string, std::string>;

Snapshot run_snapshot(const std::string& command, const char* config, const char* grid, unsigned threads,
                      const fs::path& dir, int& status) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  kinsep::cli::CommandOptions o;
  o.config = config_path(config);
  o.out_dir = dir;
  if (grid) o.grid = grid;
  o.threads = threads;
  std::ostringstream out, err;
  status = std::max(status, kinsep::cli::run_command(command, o, out, err));
  Snapshot snap{{"<stdout>", out.str()}};
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    snap[entry.path().filename().string()] = {std::istreambuf_iterator<char>(in), {}};
  }
  fs::remove_all(dir);
  return snap;
}

Outcome determinism() {
  struct Case {
    const char* command;
    const char* config;
    const char* grid;
  };
  const Case cases[] = {{"aspects", "five_bar.cfg", nullptr},
                        {"aspects", "three_rrr.cfg", "24x24x24"},
                        {"trajectory", "three_rrr_mode_change.cfg", nullptr}};
  const fs::path root = fs::temp_directory_path() / ("kinsep_acceptance_" + std::to_string(::getpid()));
  bool pass = true;
  int status = 0;
  std::string detail;
  for (const auto& c : cases) {
    const Snapshot first = run_snapshot(c.command, c.config, c.grid, 1, root / "a", status);
    const Snapshot again = run_snapshot(c.command, c.config, c.grid, 1, root / "b", status);
    const Snapshot many = run_snapshot(c.command, c.config, c.grid, 4, root / "c", status);
    const bool same = first == again && first == many && first.size() > 1;
    pass = pass && same;
    detail += std::string(c.command) + " " + c.config + ": " + std::to_string(first.size() - 1) + " files " +
              (same ? "identical" : "differ") + "; ";
  }
  fs::remove_all(root);
  return {pass && status == 0, detail + "exit status " + std::to_string(status)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, 1.0, working_modes},  {2, 5.0, ik_partition},       {3, 60.0, fk_bounds},     {4, 60.0, round_trip},
      {5, 5.0, jacobians},      {6, 120.0, census},           {7, 30.0, assembly_mode_change},
      {8, 120.0, unique_in_region},  {9, 120.0, no_ambiguous},     {10, 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && s < c.budget_s;
    failed += pass ? 0 : 1;
    std::printf("criterion %2d: %s  %s [%.2f s, budget %g s]\n", c.id, pass ? "PASS" : "FAIL", o.detail.c_str(), s,
                c.budget_s);
    std::fflush(stdout);
  }
  return failed;
}
