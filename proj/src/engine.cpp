#include "specmeasure/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace specmeasure {

namespace {

constexpr double kPi = std::numbers::pi;

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

struct ShiftState {
  std::complex<double> z;
  std::complex<double> phi = 0.0;
  double delta = 0.0;  // |phi_2N - phi_N| of the last doubling
  int dofs = 0;
  bool converged = false;
  bool exhausted = false;  // hit max_dofs
};

std::complex<double> functional_at(const DiscretizedProblem& problem, std::complex<double> z,
                                   int N) {
  const FunctionRep g = problem.rhs(N);
  const FunctionRep u = problem.factor(z, N)->solve(g);
  return inner_product(u, g);
}

}  // namespace

void SolverOptions::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw Error("solver tol must lie in (0, 1)");
  if (!power_of_two(init_dofs)) throw Error("init_dofs must be a power of two");
  if (init_dofs > max_dofs) throw Error("init_dofs must not exceed max_dofs");
}

AdaptiveSolveResult adaptive_solve(const DiscretizedProblem& problem, std::complex<double> z,
                                   double tol, int init_dofs, int max_dofs) {
  if (z.imag() == 0.0) throw ShiftOnRealAxisError("adaptive solve needs a complex shift");
  AdaptiveSolveResult result;
  int N = std::max(init_dofs, problem.min_dofs());
  std::complex<double> phi_prev = functional_at(problem, z, N);
  for (;;) {
    if (2 * N > max_dofs) {
      // never even reached the first comparison
      result.converged = false;
      result.dofs = N;
      result.functional = phi_prev;
      result.err_est = 1.0;
      result.solution = problem.factor(z, N)->solve(problem.rhs(N));
      return result;
    }
    N *= 2;
    const FunctionRep g = problem.rhs(N);
    const FunctionRep u = problem.factor(z, N)->solve(g);
    const std::complex<double> phi = inner_product(u, g);
    const double delta = std::abs(phi - phi_prev);
    if (delta <= tol * std::abs(phi)) {
      result.converged = true;
      result.dofs = N;
      result.functional = phi;
      result.err_est = std::abs(phi) > 0.0 ? delta / std::abs(phi) : 0.0;
      result.solution = u;
      return result;
    }
    if (2 * N > max_dofs) {
      result.converged = false;
      result.dofs = N;
      result.functional = phi;
      result.err_est = std::abs(phi) > 0.0 ? delta / std::abs(phi) : 1.0;
      result.solution = u;
      return result;
    }
    phi_prev = phi;
  }
}

PointResult Engine::evaluate_point(const DiscretizedProblem& problem, const RationalKernel& kernel,
                                   double x0, double epsilon, const SolverOptions& opts) const {
  opts.validate();
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (!std::isfinite(x0)) throw Error("evaluation point must be finite");
  const int m = kernel.order;
  std::vector<ShiftState> shifts(m);
  const int start = std::max(opts.init_dofs, problem.min_dofs());
  for (int j = 0; j < m; ++j) {
    shifts[j].z = x0 - epsilon * kernel.poles[j];
    shifts[j].phi = functional_at(problem, shifts[j].z, start);
    shifts[j].dofs = start;
    // until a doubling comparison happens the uncertainty is the value itself
    shifts[j].delta = std::abs(shifts[j].phi);
  }

  auto combined = [&]() {
    std::complex<double> s = 0.0;
    for (int j = 0; j < m; ++j) s += kernel.residues[j] * shifts[j].phi;
    return s;
  };

  // Doubling rounds with per-shift convergence tracking: converged shifts
  // are not re-solved at larger truncations.
  bool all_done = false;
  while (!all_done) {
    all_done = true;
    for (int j = 0; j < m; ++j) {
      auto& s = shifts[j];
      if (s.converged || s.exhausted) continue;
      if (2 * s.dofs > opts.max_dofs) {
        s.exhausted = true;
        continue;
      }
      s.dofs *= 2;
      try {
        const std::complex<double> phi = functional_at(problem, s.z, s.dofs);
        s.delta = std::abs(phi - s.phi);
        s.phi = phi;
        if (s.delta <= opts.tol * std::abs(phi)) s.converged = true;
        else all_done = false;
      } catch (const NearSpectrumError&) {
        // the truncation is (numerically) singular at this shift; keep the
        // previous functional and let the next doubling move past it
        all_done = false;
      }
    }
    // Combined guard: the per-shift criterion controls phi_j, but the output
    // mixes shifts with the residues; keep refining while the propagated
    // estimate exceeds tol and refinement is still possible.
    if (all_done) {
      const double mu = -combined().imag() / kPi;
      double err_abs = 0.0;
      for (int j = 0; j < m; ++j) err_abs += std::abs(kernel.residues[j]) * shifts[j].delta;
      err_abs /= kPi;
      if (std::abs(mu) > 0.0 && err_abs > opts.tol * std::abs(mu)) {
        for (int j = 0; j < m; ++j) {
          auto& s = shifts[j];
          if (s.exhausted || 2 * s.dofs > opts.max_dofs) continue;
          if (std::abs(kernel.residues[j]) * s.delta > opts.tol * std::abs(mu) * kPi / m &&
              s.delta > 0.0) {
            s.converged = false;
            all_done = false;
          }
        }
      }
    }
  }

  PointResult out;
  const std::complex<double> s = combined();
  out.value = -s.imag() / kPi;
  double err_abs = 0.0;
  out.converged = true;
  out.dofs = 0;
  for (int j = 0; j < m; ++j) {
    err_abs += std::abs(kernel.residues[j]) * shifts[j].delta;
    out.dofs = std::max(out.dofs, shifts[j].dofs);
    if (shifts[j].exhausted && !shifts[j].converged) out.converged = false;
  }
  err_abs /= kPi;
  out.err_est = std::abs(out.value) > 0.0 ? err_abs / std::abs(out.value) : err_abs;
  if (out.err_est > opts.tol) out.converged = false;

  if (opts.conjugate_check) {
    // Complete the two-sum form with genuine lower-half-plane solves; the
    // imaginary part of the completed combination measures departures from
    // Hermitian symmetry in the discretization and solver.
    std::complex<double> s_conj = 0.0;
    for (int j = 0; j < m; ++j) {
      const std::complex<double> zc = x0 - epsilon * std::conj(kernel.poles[j]);
      s_conj += std::conj(kernel.residues[j]) * functional_at(problem, zc, shifts[j].dofs);
    }
    const std::complex<double> completed = (s - s_conj) / std::complex<double>(0.0, 2.0 * kPi);
    out.conj_residue =
        std::abs(completed.imag()) / std::max(std::abs(completed), 1e-300);
  }
  return out;
}

double Engine::evaluate_point_fixed(const DiscretizedProblem& problem,
                                    const RationalKernel& kernel, double x0, double epsilon,
                                    int N) const {
  std::complex<double> s = 0.0;
  for (int j = 0; j < kernel.order; ++j) {
    const std::complex<double> z = x0 - epsilon * kernel.poles[j];
    s += kernel.residues[j] * functional_at(problem, z, N);
  }
  return -s.imag() / kPi;
}

MeasureResult Engine::evaluate_grid(const DiscretizedProblem& problem,
                                    const MeasureQuery& query) const {
  query.solver.validate();
  const std::size_t n = query.points.size();
  MeasureResult result;
  result.points = query.points;
  result.values.resize(n);
  result.err_est.resize(n);
  result.dofs.resize(n);
  result.normalization_constant = problem.normalization_constant();
  std::vector<std::string> point_warning(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const PointResult pr = evaluate_point(problem, query.kernel, query.points[i],
                                              query.epsilon, query.solver);
        result.values[i] = pr.value;
        result.err_est[i] = pr.err_est;
        result.dofs[i] = pr.dofs;
        if (!pr.converged) {
          std::ostringstream os;
          os << "NoConvergence at x = " << query.points[i]
             << ": max_dofs = " << query.solver.max_dofs << " reached, err_est = " << pr.err_est;
          point_warning[i] = os.str();
        }
      } catch (const std::exception& e) {
        result.values[i] = std::numeric_limits<double>::quiet_NaN();
        result.err_est[i] = std::numeric_limits<double>::infinity();
        result.dofs[i] = 0;
        std::ostringstream os;
        os << "error at x = " << query.points[i] << ": " << e.what();
        point_warning[i] = os.str();
      }
    }
  };

  const int threads = std::min<std::size_t>(threads_, std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& w : point_warning)
    if (!w.empty()) result.warnings.push_back(std::move(w));
  return result;
}

}  // namespace specmeasure
