/*
 * config.hpp
 *
 * Run configuration files (JSON), schema validation with pointer
 * paths, and the batch run orchestration behind the CLI.
 */

#ifndef RCIS_CONFIG_HPP_
#define RCIS_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "rcis/algorithms.hpp"
#include "rcis/systems.hpp"

namespace rcis {

/* config error with the JSON pointer of the offending value */
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& pointer, const std::string& msg)
      : std::runtime_error(pointer + ": " + msg), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

private:
  std::string pointer_;
};

struct RunConfigFile {
  std::string system;                     // builtin name or "expressions"
  std::vector<std::string> expressions;   // when system == "expressions"
  std::optional<Box> X, U, W;             // overrides (required for expressions;
                                          // input/disturbance dims come from U/W)
  RunMode mode = RunMode::outer;
  int max_iterations = 16;
  double eps = 1e-3;
  ImageMethod method = ImageMethod::sampling;
  bool refine_level = false;
  std::uint64_t seed = 0;
  SamplerConfig sampler;                  // defaults: boundary 10 / 5 / vertices
  std::string out_dir = "out";

  RunConfig engine_config() const;
};

/* parse + validate; unknown keys are rejected, every complaint carries
 * the JSON pointer of the offending value */
RunConfigFile load_config(const std::filesystem::path& path);
RunConfigFile parse_config_json(const std::string& text);

/* instantiate the configured model, applying box overrides */
SystemModel build_model(const RunConfigFile& cfg);

struct RunCommandOptions {
  bool progress_to_stdout = false;
  std::optional<std::string> out_dir;  // overrides the config
  bool refine_level = false;           // forced on by --refine-level
};

/* execute the configured run and write cells.csv, report.json and
 * progress.jsonl into the output directory; returns the process exit
 * status (0 also for a clean empty result) */
int run_command(const RunConfigFile& cfg, const RunCommandOptions& options);

/* grid oracle run: writes kernel.pgm and oracle.json */
int oracle_command(const RunConfigFile& cfg, int resolution,
                   const RunCommandOptions& options);

}  // namespace rcis

#endif  // RCIS_CONFIG_HPP_
