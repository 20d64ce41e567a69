#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

#include "specmeasure/config.hpp"

namespace {

using namespace specmeasure;

std::vector<double> parse_epsilon_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("invalid epsilon value: '" + item + "'");
    }
  }
  return out;
}

bool parse_grid_flag(const std::string& text, config::GridSpec& grid) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &extra) != 3) return false;
  grid.min = lo;
  grid.max = hi;
  grid.n = n;
  return true;
}

int run_command(const std::string& config_path, double epsilon_flag, int order_flag,
                const std::string& grid_flag, const std::string& output_flag, int threads) {
  config::RunConfig cfg = config::RunConfig::from_file(config_path);
  if (epsilon_flag > 0.0) cfg.epsilon = epsilon_flag;
  if (order_flag > 0) {
    cfg.kernel.order = order_flag;
    cfg.kernel.poles.clear();
  }
  if (!grid_flag.empty() && !parse_grid_flag(grid_flag, cfg.grid))
    throw ConfigError("--grid expects MIN:MAX:N");
  if (cfg.grid.n > 1 && !(cfg.grid.max > cfg.grid.min))
    throw ConfigError("grid.max must exceed grid.min");
  if (!output_flag.empty()) cfg.output.path = output_flag;

  const auto t0 = std::chrono::steady_clock::now();
  const RationalKernel kernel = config::build_kernel(cfg.kernel);
  const auto problem = config::build_problem(cfg);

  MeasureQuery query;
  query.epsilon = cfg.epsilon;
  query.kernel = kernel;
  query.solver = cfg.solver;
  query.points.reserve(cfg.grid.n);
  for (int i = 0; i < cfg.grid.n; ++i)
    query.points.push_back(cfg.grid.n == 1
                               ? cfg.grid.min
                               : cfg.grid.min + (cfg.grid.max - cfg.grid.min) * i / (cfg.grid.n - 1));

  const Engine engine(threads);
  const MeasureResult result = engine.evaluate_grid(*problem, query);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string body = cfg.output.format == "csv" ? config::csv_to_string(result)
                                                      : config::json_rows_to_string(result);
  config::write_text_file(cfg.output.path, body);
  config::write_text_file(cfg.output.path + ".meta.json",
                          config::metadata_to_string(kernel, result, wall));

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << cfg.output.path << " (" << result.points.size() << " points)\n";
  return result.warnings.empty() ? 0 : 2;
}

int sweep_command(const std::string& config_path, const std::string& epsilons_text, double point,
                  const std::string& reference, const std::string& output_flag, int threads) {
  const config::RunConfig cfg = config::RunConfig::from_file(config_path);
  const std::vector<double> epsilons = parse_epsilon_list(epsilons_text);
  const Engine engine(threads);
  const config::SweepResult result =
      config::convergence_study(cfg, epsilons, point, reference, engine);

  const std::string table = config::sweep_csv_to_string(result);
  std::cout << table;
  std::printf("slope %.6f\n", result.slope);
  if (!output_flag.empty()) {
    config::write_text_file(output_flag, table);
    config::write_text_file(output_flag + ".meta.json",
                            "{\n  \"slope\": " + std::to_string(result.slope) + "\n}\n");
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return result.warnings.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specmeasure: smoothed spectral measures of self-adjoint operators and pencils"};
  app.require_subcommand(1);

  std::string config_path, grid_flag, output_flag, epsilons_text, reference = "laplacian";
  double epsilon_flag = 0.0, point = 0.0;
  int order_flag = 0, threads = 0;

  CLI::App* run = app.add_subcommand("run", "evaluate a measure over a grid");
  run->add_option("--config", config_path, "JSON problem configuration")->required();
  run->add_option("--epsilon", epsilon_flag, "override epsilon");
  run->add_option("--order", order_flag, "override kernel order (equispaced poles)");
  run->add_option("--grid", grid_flag, "override grid as MIN:MAX:N");
  run->add_option("--output", output_flag, "override output path");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI::App* sweep = app.add_subcommand("sweep", "epsilon-convergence study at one point");
  sweep->add_option("--config", config_path, "JSON problem configuration")->required();
  sweep->add_option("--epsilons", epsilons_text, "comma-separated epsilon list")->required();
  sweep->add_option("--point", point, "evaluation point x0")->required();
  sweep->add_option("--reference", reference, "reference oracle: laplacian | dense");
  sweep->add_option("--output", output_flag, "write the sweep table to this CSV");
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;

  try {
    if (run->parsed())
      return run_command(config_path, epsilon_flag, order_flag, grid_flag, output_flag, threads);
    return sweep_command(config_path, epsilons_text, point, reference, output_flag, threads);
  } catch (const specmeasure::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const specmeasure::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
