#include "rcis/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "json.hpp"
#include "rcis/export.hpp"
#include "rcis/oracle.hpp"

namespace rcis {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& pointer,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ConfigError(pointer + "/" + key, "unknown key");
}

double finite_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) throw ConfigError(pointer, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(pointer, "must be finite");
  return v;
}

Box parse_box(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected {\"lo\":[],\"hi\":[]}");
  reject_unknown_keys(j, pointer, {"lo", "hi"});
  if (!j.contains("lo") || !j.contains("hi"))
    throw ConfigError(pointer, "needs both lo and hi");
  auto read = [&](const char* key) {
    const json& arr = j.at(key);
    if (!arr.is_array())
      throw ConfigError(pointer + "/" + key, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(
          finite_number(arr[i], pointer + "/" + key + "/" + std::to_string(i)));
    return out;
  };
  std::vector<double> lo = read("lo"), hi = read("hi");
  if (lo.empty()) return Box::empty_dim();
  if (lo.size() != hi.size())
    throw ConfigError(pointer, "lo and hi must have the same length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i])
      throw ConfigError(pointer + "/lo/" + std::to_string(i), "lo > hi");
  return Box(std::move(lo), std::move(hi));
}

CellStrategy parse_cell_strategy(const std::string& s, const std::string& pointer) {
  if (s == "uniform") return CellStrategy::uniform;
  if (s == "boundary") return CellStrategy::boundary;
  if (s == "center") return CellStrategy::center;
  if (s == "random") return CellStrategy::random;
  throw ConfigError(pointer,
                    "expected uniform, boundary, center or random, got '" + s + "'");
}

int positive_int(const json& j, const std::string& pointer) {
  if (!j.is_number_integer())
    throw ConfigError(pointer, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 1) throw ConfigError(pointer, "must be >= 1");
  return static_cast<int>(v);
}

}  // namespace

RunConfig RunConfigFile::engine_config() const {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.max_iterations = max_iterations;
  cfg.eps = eps;
  cfg.sampler = sampler;
  cfg.method = method;
  cfg.refine_level = refine_level;
  return cfg;
}

RunConfigFile parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "top level must be an object");
  reject_unknown_keys(j, "",
                      {"system", "expressions", "X", "U", "W", "mode", "N",
                       "eps", "method", "refine_level", "seed", "sampler",
                       "out_dir"});

  RunConfigFile cfg;
  if (!j.contains("system")) throw ConfigError("/system", "required");
  if (!j.at("system").is_string())
    throw ConfigError("/system", "expected a string");
  cfg.system = j.at("system").get<std::string>();
  if (cfg.system != "expressions" && !is_builtin_system(cfg.system)) {
    std::string names;
    for (const auto& n : builtin_system_names()) names += " " + n;
    throw ConfigError("/system",
                      "unknown system '" + cfg.system +
                          "'; builtins are" + names + ", or \"expressions\"");
  }

  if (cfg.system == "expressions") {
    if (!j.contains("expressions"))
      throw ConfigError("/expressions", "required for expression systems");
    for (const auto& e : j.at("expressions")) {
      if (!e.is_string()) throw ConfigError("/expressions", "expected strings");
      cfg.expressions.push_back(e.get<std::string>());
    }
    if (cfg.expressions.empty())
      throw ConfigError("/expressions", "must not be empty");
    if (!j.contains("X")) throw ConfigError("/X", "required for expression systems");
  } else if (j.contains("expressions")) {
    throw ConfigError("/expressions", "only valid with system=\"expressions\"");
  }

  if (j.contains("X")) cfg.X = parse_box(j.at("X"), "/X");
  if (j.contains("U")) cfg.U = parse_box(j.at("U"), "/U");
  if (j.contains("W")) cfg.W = parse_box(j.at("W"), "/W");

  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "outer")
      cfg.mode = RunMode::outer;
    else if (m == "inner")
      cfg.mode = RunMode::inner;
    else
      throw ConfigError("/mode", "expected \"outer\" or \"inner\"");
  }
  if (j.contains("N")) cfg.max_iterations = positive_int(j.at("N"), "/N");
  if (j.contains("eps")) {
    cfg.eps = finite_number(j.at("eps"), "/eps");
    if (cfg.eps <= 0.0) throw ConfigError("/eps", "must be > 0");
  }
  if (j.contains("method")) {
    const std::string m = j.at("method").get<std::string>();
    if (m == "sampling")
      cfg.method = ImageMethod::sampling;
    else if (m == "interval")
      cfg.method = ImageMethod::interval;
    else
      throw ConfigError("/method", "expected \"sampling\" or \"interval\"");
  }
  if (j.contains("refine_level")) {
    if (!j.at("refine_level").is_boolean())
      throw ConfigError("/refine_level", "expected a boolean");
    cfg.refine_level = j.at("refine_level").get<bool>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw ConfigError("/seed", "expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("out_dir")) {
    if (!j.at("out_dir").is_string())
      throw ConfigError("/out_dir", "expected a string");
    cfg.out_dir = j.at("out_dir").get<std::string>();
  }

  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    if (!s.is_object()) throw ConfigError("/sampler", "expected an object");
    reject_unknown_keys(s, "/sampler",
                        {"cell_strategy", "cell_samples", "input_samples",
                         "disturbance_mode", "disturbance_samples_per_dim"});
    if (s.contains("cell_strategy"))
      cfg.sampler.cell_strategy = parse_cell_strategy(
          s.at("cell_strategy").get<std::string>(), "/sampler/cell_strategy");
    if (s.contains("cell_samples"))
      cfg.sampler.cell_samples =
          positive_int(s.at("cell_samples"), "/sampler/cell_samples");
    if (s.contains("input_samples"))
      cfg.sampler.input_samples =
          positive_int(s.at("input_samples"), "/sampler/input_samples");
    if (s.contains("disturbance_mode")) {
      const std::string m = s.at("disturbance_mode").get<std::string>();
      if (m == "vertices")
        cfg.sampler.disturbance_mode = DisturbanceMode::vertices;
      else if (m == "grid")
        cfg.sampler.disturbance_mode = DisturbanceMode::grid;
      else
        throw ConfigError("/sampler/disturbance_mode",
                          "expected \"vertices\" or \"grid\"");
    }
    if (s.contains("disturbance_samples_per_dim"))
      cfg.sampler.disturbance_samples_per_dim = positive_int(
          s.at("disturbance_samples_per_dim"),
          "/sampler/disturbance_samples_per_dim");
  }
  cfg.sampler.rng_seed = cfg.seed;
  if (cfg.sampler.cell_strategy == CellStrategy::random && !j.contains("seed"))
    throw ConfigError("/seed",
                      "random sampling requires an explicit seed for "
                      "reproducibility");
  return cfg;
}

RunConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_json(text);
}

namespace {

void warn_origin(const SystemModel& model) {
  auto contains_origin = [](const Box& b) {
    for (int i = 0; i < b.dim(); ++i)
      if (b.lo(i) > 0.0 || b.hi(i) < 0.0) return false;
    return true;
  };
  if (!contains_origin(model.U()))
    std::cerr << "warning: U does not contain the origin\n";
  if (!contains_origin(model.W()))
    std::cerr << "warning: W does not contain the origin\n";
}

}  // namespace

SystemModel build_model(const RunConfigFile& cfg) {
  SystemModel model = [&cfg] {
    if (cfg.system == "expressions") {
      const Box X = cfg.X.value();
      const Box U = cfg.U ? *cfg.U : Box::empty_dim();
      const Box W = cfg.W ? *cfg.W : Box::empty_dim();
      if (X.dim() != static_cast<int>(cfg.expressions.size()))
        throw ConfigError("/X", "dimension must match the number of expressions");
      return SystemModel::from_expressions("expressions", cfg.expressions,
                                           U.dim(), W.dim(), X, U, W);
    }
    return make_builtin_system(cfg.system).with_boxes(cfg.X, cfg.U, cfg.W);
  }();
  warn_origin(model);
  return model;
}

int run_command(const RunConfigFile& cfg, const RunCommandOptions& options) {
  const SystemModel model = build_model(cfg);

  const std::filesystem::path out_dir =
      options.out_dir ? *options.out_dir : cfg.out_dir;
  std::filesystem::create_directories(out_dir);

  std::ofstream progress_log(out_dir / "progress.jsonl");
  RunConfig run_cfg = cfg.engine_config();
  if (options.refine_level) run_cfg.refine_level = true;
  run_cfg.progress = [&](const IterationRecord& r) {
    nlohmann::json event = {{"event", "iteration"},
                            {"iteration", r.iteration},
                            {"cells", r.cell_count},
                            {"diameter", r.diameter},
                            {"edges", r.edge_total},
                            {"wall_seconds", r.wall_seconds}};
    progress_log << event.dump() << '\n';
    progress_log.flush();
    if (options.progress_to_stdout) std::cout << event.dump() << std::endl;
  };

  const RunReport report = cfg.mode == RunMode::inner
                               ? run_inner(model, run_cfg)
                               : run_outer(model, run_cfg);

  write_text_file(out_dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_text_file(out_dir / "cells.csv", cells_csv(report.final_covering));

  nlohmann::json done = {{"event", "done"},
                         {"termination", to_string(report.termination)},
                         {"iterations", report.iterations_completed},
                         {"cells", report.final_covering.size()},
                         {"graphs_per_iteration", report.graphs_per_iteration},
                         {"total_seconds", report.total_seconds}};
  progress_log << done.dump() << '\n';
  std::cout << done.dump() << std::endl;
  return 0;
}

int oracle_command(const RunConfigFile& cfg, int resolution,
                   const RunCommandOptions& options) {
  const SystemModel model = build_model(cfg);
  const GridKernel kernel =
      grid_discriminating_kernel(model, resolution, cfg.sampler);

  const std::filesystem::path out_dir =
      options.out_dir ? *options.out_dir : cfg.out_dir;
  std::filesystem::create_directories(out_dir);

  if (model.state_dim() == 2) {
    std::ofstream pgm(out_dir / "kernel.pgm");
    kernel.write_pgm(pgm);
  }
  nlohmann::json j = {{"resolution", resolution},
                      {"iterations_to_fixpoint", kernel.iterations_to_fixpoint},
                      {"retained_cells", kernel.retained()},
                      {"total_cells", kernel.cell_count()},
                      {"volume", kernel.volume()}};
  write_text_file(out_dir / "oracle.json", j.dump(2) + "\n");
  std::cout << j.dump() << std::endl;
  return 0;
}

}  // namespace rcis
