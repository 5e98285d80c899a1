/*
 * rcis command line interface.
 *
 *   rcis run <config.json> [--progress] [--out DIR] [--refine-level]
 *   rcis oracle <config.json> --resolution R [--out DIR]
 *   rcis export <report.json> --format F [--out FILE]
 */

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rcis/config.hpp"
#include "rcis/export.hpp"

namespace {

int do_export(const std::string& report_path, const std::string& format,
              std::string out_path) {
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "error: cannot open report " << report_path << '\n';
    return 1;
  }
  nlohmann::json j = nlohmann::json::parse(in);
  const rcis::RunReport report = rcis::report_from_json(j);
  const rcis::ExportFormat fmt = rcis::export_format_from_string(format);
  if (out_path.empty()) {
    const std::filesystem::path dir =
        std::filesystem::path(report_path).parent_path();
    const char* name = fmt == rcis::ExportFormat::cells_csv   ? "cells.csv"
                       : fmt == rcis::ExportFormat::cells_json ? "cells.json"
                                                                : "hull.csv";
    out_path = (dir / name).string();
  }
  rcis::export_results(report.final_covering, fmt, out_path);
  std::cout << "wrote " << out_path << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-based robust control invariant set approximation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, report_path, format, out_file;
  bool progress = false, refine = false;
  int resolution = 100;

  auto* run = app.add_subcommand("run", "execute a configured run");
  run->add_option("config", config_path, "JSON run configuration")->required();
  run->add_flag("--progress", progress, "stream per-iteration JSON to stdout");
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_flag("--refine-level", refine,
                "fixed-point refinement of each selection step");

  auto* oracle = app.add_subcommand("oracle", "grid discriminating kernel");
  oracle->add_option("config", config_path, "JSON run configuration")->required();
  oracle->add_option("--resolution", resolution, "grid cells per dimension")
      ->required();
  oracle->add_option("--out", out_dir, "output directory (overrides config)");

  auto* exporter = app.add_subcommand("export", "convert a report");
  exporter->add_option("report", report_path, "report.json from a run")->required();
  exporter->add_option("--format", format, "cells_csv | cells_json | hull_csv")
      ->required();
  exporter->add_option("--out", out_file, "output file path");

  CLI11_PARSE(app, argc, argv);

  try {
    rcis::RunCommandOptions options;
    options.progress_to_stdout = progress;
    options.refine_level = refine;
    if (!out_dir.empty()) options.out_dir = out_dir;

    if (run->parsed())
      return rcis::run_command(rcis::load_config(config_path), options);
    if (oracle->parsed())
      return rcis::oracle_command(rcis::load_config(config_path), resolution,
                                  options);
    return do_export(report_path, format, out_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
