#include <iostream>

#include <CLI11.hpp>

#include "kinsep_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Separation of the inverse and direct kinematic solutions of planar parallel manipulators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kinsep 0.1.0");

  kinsep::cli::CommandOptions opts;
  std::string out_dir;
  for (const auto& name : kinsep::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "Model configuration (YAML)")->required();
    sub->add_option("--out", out_dir, "Directory for CSV/SVG outputs");
    sub->add_flag("--svg", opts.svg, "Also write SVG rasters (needs --out)");
    sub->add_option("--mode", opts.mode, "Working mode, e.g. +-+");
    sub->add_option("--grid", opts.grid, "Grid cells, NxM or NxMxK");
    sub->add_option("--tol", opts.tol, "Zero band for sign classification");
    sub->add_option("--threads", opts.threads, "Worker threads (0: all cores)");
    if (name == "ik" || name == "jacobians") sub->add_option("--pose", opts.pose, "x,y[,phi]");
    if (name == "fk" || name == "jacobians") sub->add_option("--q", opts.q, "Actuated angles q1,q2[,q3]");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kinsep::cli::kConfigError;
  }
  if (!out_dir.empty()) opts.out_dir = out_dir;
  const std::string command = app.get_subcommands().front()->get_name();
  return kinsep::cli::run_command(command, opts, std::cout, std::cerr);
}
