#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "specmeasure/engine.hpp"
#include "specmeasure/expression.hpp"

namespace specmeasure::config {

struct TermSpec {
  std::string kind;
  int order = 0;
  std::string axis;                     // "x" | "y" (2-D derivative only)
  std::optional<expr::Expression> coeff;
  std::vector<expr::Expression> factors;
  std::optional<expr::Expression> symbol;
};

struct FSpec {
  std::optional<expr::Expression> expr;
  std::vector<Complex> coeffs;
  int first_index = 0;
};

struct KernelSpec {
  int order = 4;
  std::vector<Complex> poles;  // optional custom poles (overrides equispaced)
};

struct GridSpec {
  double min = 0.0, max = 1.0;
  int n = 1;
};

struct OutputSpec {
  std::string path = "measure.csv";
  std::string format = "csv";  // csv | json
};

/// Validated run configuration. Unknown keys anywhere in the document are
/// rejected with a field-path message.
struct RunConfig {
  std::string mode = "operator";  // operator | pencil
  Basis backend = Basis::realline;
  std::vector<TermSpec> terms;
  std::vector<TermSpec> b_terms;
  FSpec f;
  KernelSpec kernel;
  double epsilon = 0.1;
  GridSpec grid;
  SolverOptions solver;
  OutputSpec output;

  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig from_file(const std::string& path);
};

RationalKernel build_kernel(const KernelSpec& spec);
std::unique_ptr<DiscretizedProblem> build_problem(const RunConfig& cfg);

std::string csv_to_string(const MeasureResult& result);
void write_text_file(const std::string& path, const std::string& contents);
std::string json_rows_to_string(const MeasureResult& result);
std::string metadata_to_string(const RationalKernel& kernel, const MeasureResult& result,
                               double wall_seconds);

struct SweepRow {
  double epsilon = 0.0;
  double value = 0.0;
  double reference = 0.0;
  double rel_error = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double slope = 0.0;  // least-squares slope in log10-log10 coordinates
  std::vector<std::string> warnings;
};

/// Epsilon-sweep convergence study at one point against an oracle reference
/// ("laplacian" or "dense"). Requires at least three epsilons.
SweepResult convergence_study(const RunConfig& cfg, const std::vector<double>& epsilons,
                              double point, const std::string& reference, const Engine& engine);

std::string sweep_csv_to_string(const SweepResult& result);

}  // namespace specmeasure::config
