#include "specmeasure/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "specmeasure/oracle.hpp"

namespace specmeasure::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + (path.empty() ? "<root>" : path) + ": " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const std::string& path, const std::string& key) {
  const json* v = find(j, key);
  if (!v) fail(path, "missing required key '" + key + "'");
  return *v;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Complex as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  fail(path, "expected a number or [re, im] pair");
}

expr::Expression parse_expr(const json& j, const std::string& path) {
  const std::string text = as_string(j, path);
  try {
    return expr::Expression::parse(text);
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

TermSpec parse_term(const json& j, const std::string& path) {
  require_object(j, path);
  TermSpec term;
  term.kind = as_string(require(j, path, "kind"), path + ".kind");
  if (term.kind == "multiplication") {
    reject_unknown(j, path, {"kind", "a"});
    term.coeff = parse_expr(require(j, path, "a"), path + ".a");
  } else if (term.kind == "derivative") {
    reject_unknown(j, path, {"kind", "order", "coeff", "axis"});
    term.order = as_int(require(j, path, "order"), path + ".order");
    if (const json* c = find(j, "coeff")) term.coeff = parse_expr(*c, path + ".coeff");
    if (const json* a = find(j, "axis")) {
      term.axis = as_string(*a, path + ".axis");
      if (term.axis != "x" && term.axis != "y") fail(path + ".axis", "expected \"x\" or \"y\"");
    }
  } else if (term.kind == "cauchy_lowrank") {
    reject_unknown(j, path, {"kind", "factors"});
    const json& factors = require(j, path, "factors");
    if (!factors.is_array() || factors.empty())
      fail(path + ".factors", "expected a non-empty array of expressions");
    for (std::size_t i = 0; i < factors.size(); ++i)
      term.factors.push_back(
          parse_expr(factors[i], path + ".factors[" + std::to_string(i) + "]"));
  } else if (term.kind == "fourier_symbol") {
    reject_unknown(j, path, {"kind", "b"});
    term.symbol = parse_expr(require(j, path, "b"), path + ".b");
  } else {
    fail(path + ".kind", "unknown term kind '" + term.kind + "'");
  }
  return term;
}

std::vector<TermSpec> parse_terms(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of terms");
  std::vector<TermSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_term(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

RunConfig RunConfig::from_json(const json& doc) {
  RunConfig cfg;
  require_object(doc, "");
  reject_unknown(doc, "", {"problem", "f", "kernel", "epsilon", "grid", "solver", "output"});

  const json& problem = require(doc, "", "problem");
  require_object(problem, "problem");
  reject_unknown(problem, "problem", {"mode", "backend", "terms", "B_terms"});
  cfg.mode = as_string(require(problem, "problem", "mode"), "problem.mode");
  if (cfg.mode != "operator" && cfg.mode != "pencil")
    fail("problem.mode", "expected \"operator\" or \"pencil\"");
  const std::string backend =
      as_string(require(problem, "problem", "backend"), "problem.backend");
  if (backend == "realline") cfg.backend = Basis::realline;
  else if (backend == "fourier1d") cfg.backend = Basis::fourier1d;
  else if (backend == "fourier2d") cfg.backend = Basis::fourier2d;
  else fail("problem.backend", "expected realline, fourier1d or fourier2d");
  cfg.terms = parse_terms(require(problem, "problem", "terms"), "problem.terms");
  if (cfg.mode == "pencil") {
    if (cfg.backend == Basis::realline)
      fail("problem.backend", "pencil mode requires a Fourier backend");
    cfg.b_terms = parse_terms(require(problem, "problem", "B_terms"), "problem.B_terms");
  } else if (find(problem, "B_terms")) {
    fail("problem.B_terms", "B_terms are only valid in pencil mode");
  }

  const json& f = require(doc, "", "f");
  require_object(f, "f");
  reject_unknown(f, "f", {"expr", "coeffs", "first_index"});
  if (const json* e = find(f, "expr")) cfg.f.expr = parse_expr(*e, "f.expr");
  if (const json* c = find(f, "coeffs")) {
    if (!c->is_array() || c->empty()) fail("f.coeffs", "expected a non-empty array");
    for (std::size_t i = 0; i < c->size(); ++i)
      cfg.f.coeffs.push_back(as_complex((*c)[i], "f.coeffs[" + std::to_string(i) + "]"));
    cfg.f.first_index = 0;
    if (const json* fi = find(f, "first_index"))
      cfg.f.first_index = as_int(*fi, "f.first_index");
  } else if (find(f, "first_index")) {
    fail("f.first_index", "first_index is only valid together with coeffs");
  }
  if (cfg.f.expr.has_value() == !cfg.f.coeffs.empty())
    fail("f", "exactly one of expr or coeffs is required");
  if (!cfg.f.coeffs.empty() && cfg.backend == Basis::fourier2d)
    fail("f.coeffs", "explicit coefficients are only supported for 1-D backends");

  const json& kernel = require(doc, "", "kernel");
  require_object(kernel, "kernel");
  reject_unknown(kernel, "kernel", {"order", "poles"});
  cfg.kernel.order = as_int(require(kernel, "kernel", "order"), "kernel.order");
  if (cfg.kernel.order < 1) fail("kernel.order", "kernel order must be >= 1");
  if (const json* p = find(kernel, "poles")) {
    if (!p->is_array() || p->empty()) fail("kernel.poles", "expected a non-empty array");
    for (std::size_t i = 0; i < p->size(); ++i)
      cfg.kernel.poles.push_back(as_complex((*p)[i], "kernel.poles[" + std::to_string(i) + "]"));
    if (static_cast<int>(cfg.kernel.poles.size()) != cfg.kernel.order)
      fail("kernel.poles", "pole count must equal kernel.order");
    for (const auto& a : cfg.kernel.poles)
      if (!(a.imag() > 0.0)) fail("kernel.poles", "poles must lie in the open upper half-plane");
  }

  cfg.epsilon = as_number(require(doc, "", "epsilon"), "epsilon");
  if (!(cfg.epsilon > 0.0)) fail("epsilon", "epsilon must be positive");

  const json& grid = require(doc, "", "grid");
  require_object(grid, "grid");
  reject_unknown(grid, "grid", {"min", "max", "n"});
  cfg.grid.min = as_number(require(grid, "grid", "min"), "grid.min");
  cfg.grid.max = as_number(require(grid, "grid", "max"), "grid.max");
  cfg.grid.n = as_int(require(grid, "grid", "n"), "grid.n");
  if (cfg.grid.n < 1) fail("grid.n", "grid must contain at least one point");
  if (cfg.grid.n > 1 && !(cfg.grid.max > cfg.grid.min))
    fail("grid.max", "grid.max must exceed grid.min");

  if (const json* solver = find(doc, "solver")) {
    require_object(*solver, "solver");
    reject_unknown(*solver, "solver", {"tol", "init_dofs", "max_dofs"});
    if (const json* t = find(*solver, "tol")) cfg.solver.tol = as_number(*t, "solver.tol");
    if (const json* i = find(*solver, "init_dofs"))
      cfg.solver.init_dofs = as_int(*i, "solver.init_dofs");
    if (const json* m = find(*solver, "max_dofs"))
      cfg.solver.max_dofs = as_int(*m, "solver.max_dofs");
    if (!(cfg.solver.tol > 0.0 && cfg.solver.tol < 1.0))
      fail("solver.tol", "tol must lie in (0, 1)");
    if (!power_of_two(cfg.solver.init_dofs))
      fail("solver.init_dofs", "init_dofs must be a power of two");
    if (cfg.solver.init_dofs > cfg.solver.max_dofs)
      fail("solver.max_dofs", "max_dofs must be >= init_dofs");
  }

  if (const json* output = find(doc, "output")) {
    require_object(*output, "output");
    reject_unknown(*output, "output", {"path", "format"});
    if (const json* p = find(*output, "path")) cfg.output.path = as_string(*p, "output.path");
    if (const json* fjson = find(*output, "format")) {
      cfg.output.format = as_string(*fjson, "output.format");
      if (cfg.output.format != "csv" && cfg.output.format != "json")
        fail("output.format", "expected \"csv\" or \"json\"");
    }
  }

  // Expression variable constraints per backend.
  const bool two_d = cfg.backend == Basis::fourier2d;
  if (cfg.f.expr && cfg.f.expr->uses_y() && !two_d)
    fail("f.expr", "variable y is only valid with the fourier2d backend");
  auto check_terms = [&](const std::vector<TermSpec>& terms, const std::string& base) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string path = base + "[" + std::to_string(i) + "]";
      const TermSpec& t = terms[i];
      if (!two_d) {
        if (t.coeff && t.coeff->uses_y()) fail(path, "variable y requires the fourier2d backend");
        if (t.symbol && t.symbol->uses_y()) fail(path, "variable y requires the fourier2d backend");
        for (const auto& fac : t.factors)
          if (fac.uses_y()) fail(path, "variable y requires the fourier2d backend");
        if (!t.axis.empty()) fail(path, "axis is only valid with the fourier2d backend");
      }
      if (t.kind == "cauchy_lowrank" && cfg.backend != Basis::realline)
        fail(path, "cauchy_lowrank terms require the realline backend");
      if (t.kind == "fourier_symbol" && cfg.backend == Basis::realline)
        fail(path, "fourier_symbol terms require a Fourier backend");
      if (t.kind == "derivative" && two_d && t.coeff && t.coeff->uses_y())
        fail(path + ".coeff", "derivative coefficients may depend on x only");
    }
  };
  check_terms(cfg.terms, "problem.terms");
  check_terms(cfg.b_terms, "problem.B_terms");
  for (const auto& t : cfg.b_terms)
    if (t.kind != "fourier_symbol")
      fail("problem.B_terms", "B must be a sum of fourier_symbol terms");

  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

RationalKernel build_kernel(const KernelSpec& spec) {
  if (!spec.poles.empty()) return RationalKernel::from_poles(spec.poles);
  return RationalKernel::equispaced(spec.order);
}

namespace {

OperatorTerm build_term(const TermSpec& spec, Basis backend) {
  auto coeff_fn = [](const expr::Expression& e) -> CoeffFn {
    return [e](double x) -> std::complex<double> { return e.eval(x); };
  };
  if (spec.kind == "multiplication") {
    return OperatorTerm::multiplication(coeff_fn(*spec.coeff));
  }
  if (spec.kind == "derivative") {
    const int axis = spec.axis == "y" ? 1 : 0;
    CoeffFn c;
    if (spec.coeff) c = coeff_fn(*spec.coeff);
    return OperatorTerm::derivative(spec.order, std::move(c), axis);
  }
  if (spec.kind == "cauchy_lowrank") {
    std::vector<CoeffFn> ks;
    for (const auto& f : spec.factors) ks.push_back(coeff_fn(f));
    return OperatorTerm::cauchy_lowrank(std::move(ks));
  }
  if (spec.kind == "fourier_symbol") {
    const expr::Expression e = *spec.symbol;
    if (backend == Basis::fourier2d)
      return OperatorTerm::fourier_symbol([e](double kx, double ky) { return e.eval(kx, ky); });
    return OperatorTerm::fourier_symbol([e](double k, double) { return e.eval(k); });
  }
  throw ConfigError("unknown term kind: " + spec.kind);
}

FunctionRep coeffs_to_rep(const FSpec& f, Basis basis) {
  // Smallest power-of-two window holding [first_index, first_index + len).
  const int lo = f.first_index;
  const int hi = lo + static_cast<int>(f.coeffs.size());
  int n = 4;
  while (-n / 2 > lo || hi > n / 2) n *= 2;
  FunctionRep rep;
  rep.basis = basis;
  rep.N = n;
  rep.coeffs = Eigen::VectorXcd::Zero(n);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    rep.coeffs(lo + static_cast<int>(i) + n / 2) = f.coeffs[i];
  return rep;
}

}  // namespace

std::unique_ptr<DiscretizedProblem> build_problem(const RunConfig& cfg) {
  std::vector<OperatorTerm> terms, b_terms;
  for (const auto& t : cfg.terms) terms.push_back(build_term(t, cfg.backend));
  for (const auto& t : cfg.b_terms) b_terms.push_back(build_term(t, cfg.backend));

  if (cfg.backend == Basis::realline) {
    if (!cfg.f.coeffs.empty())
      return std::make_unique<RealLineProblem>(std::move(terms),
                                               coeffs_to_rep(cfg.f, Basis::realline));
    const expr::Expression e = *cfg.f.expr;
    return std::make_unique<RealLineProblem>(
        std::move(terms), [e](double x) -> std::complex<double> { return e.eval(x); });
  }
  if (cfg.backend == Basis::fourier1d) {
    if (!cfg.f.coeffs.empty()) {
      const FunctionRep rep = coeffs_to_rep(cfg.f, Basis::fourier1d);
      return std::make_unique<FourierProblem>(
          cfg.backend, std::move(terms), std::move(b_terms),
          fourier::Fn1([rep](double x) {
            return fourier::synthesize(rep, std::span<const double>(&x, 1))(0);
          }));
    }
    const expr::Expression e = *cfg.f.expr;
    return std::make_unique<FourierProblem>(
        cfg.backend, std::move(terms), std::move(b_terms),
        fourier::Fn1([e](double x) -> std::complex<double> { return e.eval(x); }));
  }
  const expr::Expression e = *cfg.f.expr;
  return std::make_unique<FourierProblem>(
      cfg.backend, std::move(terms), std::move(b_terms),
      fourier::Fn2([e](double x, double y) -> std::complex<double> { return e.eval(x, y); }));
}

namespace {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_to_string(const MeasureResult& result) {
  std::string out = "x,mu,err_est,dofs_max\n";
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    out += format_g17(result.points[i]);
    out += ',';
    out += format_g17(result.values[i]);
    out += ',';
    out += format_g17(result.err_est[i]);
    out += ',';
    out += std::to_string(result.dofs[i]);
    out += '\n';
  }
  return out;
}

std::string json_rows_to_string(const MeasureResult& result) {
  json rows = json::array();
  for (std::size_t i = 0; i < result.points.size(); ++i)
    rows.push_back({{"x", result.points[i]},
                    {"mu", result.values[i]},
                    {"err_est", result.err_est[i]},
                    {"dofs_max", result.dofs[i]}});
  return json{{"rows", rows}}.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output file: " + path);
  out << contents;
}

std::string metadata_to_string(const RationalKernel& kernel, const MeasureResult& result,
                               double wall_seconds) {
  json poles = json::array(), residues = json::array();
  for (const auto& p : kernel.poles) poles.push_back({p.real(), p.imag()});
  for (const auto& r : kernel.residues) residues.push_back({r.real(), r.imag()});
  json warnings = json::array();
  for (const auto& w : kernel.warnings) warnings.push_back(w);
  for (const auto& w : result.warnings) warnings.push_back(w);
  const json meta = {{"kernel", {{"order", kernel.order}, {"poles", poles}, {"residues", residues}}},
                     {"normalization_constant", result.normalization_constant},
                     {"warnings", warnings},
                     {"wall_time_seconds", wall_seconds}};
  return meta.dump(2) + "\n";
}

SweepResult convergence_study(const RunConfig& cfg, const std::vector<double>& epsilons,
                              double point, const std::string& reference, const Engine& engine) {
  if (epsilons.size() < 3)
    throw ConfigError("convergence study needs at least three epsilon values");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("epsilons must be positive");
  if (reference != "laplacian" && reference != "dense")
    throw ConfigError("reference must be \"laplacian\" or \"dense\"");

  const auto problem = build_problem(cfg);
  const RationalKernel kernel = build_kernel(cfg.kernel);

  double ref_value = 0.0;
  if (reference == "laplacian") {
    // rho_f at the point for the normalized f; scale-quadratic in the
    // normalization constant.
    oracle::ComplexFn f;
    if (!cfg.f.coeffs.empty()) {
      const FunctionRep rep = coeffs_to_rep(cfg.f, Basis::realline);
      f = [rep](double x) -> std::complex<double> {
        return realline::synthesize(rep, std::span<const double>(&x, 1))(0);
      };
    } else {
      const expr::Expression e = *cfg.f.expr;
      f = [e](double x) -> std::complex<double> { return e.eval(x); };
    }
    const double c = problem->normalization_constant();
    ref_value = c * c * oracle::laplacian_density(f, point);
  } else {
    const auto* realline_problem = dynamic_cast<const RealLineProblem*>(problem.get());
    if (!realline_problem)
      throw ConfigError("dense reference requires the realline backend");
    const int n_ref = std::min(1024, cfg.solver.max_dofs);
    const Eigen::MatrixXcd h = realline_problem->operator_matrix(n_ref).dense();
    const Eigen::VectorXcd fvec = realline_problem->rhs(n_ref).coeffs;
    double eps_ref = epsilons.front();
    for (double e : epsilons) eps_ref = std::min(eps_ref, e);
    ref_value = oracle::dense_measure(h, fvec, kernel, eps_ref / 10.0, point);
  }
  if (ref_value == 0.0) throw ConfigError("reference value vanishes at the chosen point");

  SweepResult out;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double eps : epsilons) {
    const PointResult pr = engine.evaluate_point(*problem, kernel, point, eps, cfg.solver);
    SweepRow row;
    row.epsilon = eps;
    row.value = pr.value;
    row.reference = ref_value;
    row.rel_error = std::abs(pr.value - ref_value) / std::abs(ref_value);
    if (!pr.converged) {
      std::ostringstream os;
      os << "NoConvergence at epsilon = " << eps << " (err_est = " << pr.err_est << ")";
      out.warnings.push_back(os.str());
    }
    out.rows.push_back(row);
    const double lx = std::log10(eps);
    const double ly = std::log10(std::max(row.rel_error, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(epsilons.size());
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

std::string sweep_csv_to_string(const SweepResult& result) {
  std::string out = "epsilon,mu,reference,rel_error\n";
  for (const auto& row : result.rows) {
    out += format_g17(row.epsilon);
    out += ',';
    out += format_g17(row.value);
    out += ',';
    out += format_g17(row.reference);
    out += ',';
    out += format_g17(row.rel_error);
    out += '\n';
  }
  return out;
}

}  // namespace specmeasure::config
