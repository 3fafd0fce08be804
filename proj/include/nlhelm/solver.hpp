#ifndef NLHELM_SOLVER_HPP_
#define NLHELM_SOLVER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "nlhelm/farfield.hpp"
#include "nlhelm/lineig.hpp"
#include "nlhelm/nonlin.hpp"
#include "nlhelm/resolvent.hpp"

namespace nlhelm {

/// Discretized scattering problem: grid, basis, cutoff and the per-mode
/// outgoing Green functions for (n, lambda, V).
struct Problem {
  int n = 3;
  Real lambda = 1.0;
  RadialGridPtr grid;
  AngularBasisPtr basis;
  RadialProfile potential = RadialProfile::constant(0.0);
  Real R0 = 2.0;
  GreensSet greens;
};

Problem make_problem(int n, Real lambda, RadialGridPtr grid,
                     AngularBasisPtr basis, const RadialProfile& V, Real R0);

struct SolverConfig {
  Real delta = -1.0;          // <= 0: use 1/(4p) from validate
  Real tol_step = 1e-10;      // relative step tolerance
  Real tol_residual = 1e-6;   // relative PDE residual tolerance
  int max_iter = 60;
  int k = 2;                  // angular module order, > (n-1)/2
  Real smallness_budget = 0.2;  // soft warning threshold on ||f||_{H^{k+2}}

  NormSpec norm(Real weight_l) const { return NormSpec{2, weight_l, 1, k, +1}; }
};

struct IterationReport {
  std::vector<Real> step_norms;  // ||w_{j+1} - w_j|| in the module norm
  std::vector<Real> ratios;      // consecutive quotients
  std::vector<Real> residuals;   // relative PDE residual per iteration
  bool converged = false;
  int iterations = 0;
  Real final_residual = 0;
  Real eta = 0;  // ||u_-|| in the minus module norm (contraction scale)
  std::string warning;
};

struct Solution {
  AngularSpectrum f;
  Field u, w, u_minus, u_plus;
  AngularSpectrum g_preview;
  AdmissibilityReport admissibility;
  IterationReport report;
  ResolventStats resolvent_stats;
  Real weight_l = 0;
};

/// Picard iteration for the fixed point of Phi(w) = u_+ + R(N[u_- + w]).
/// Throws NonConvergenceError when step ratios stay >= 1 for five
/// consecutive iterations; exhausting max_iter leaves converged = false.
Solution solve(const AngularSpectrum& f, const NonlinearitySpec& spec,
               const SolverConfig& cfg, const Problem& prob,
               const Field* w_init = nullptr);

struct ProbeRow {
  Real scale = 0;
  Real eta = 0;
  Real ratio = 0;  // asymptotic step ratio
  bool converged = false;
  bool usable = false;
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  Real slope = 0;  // fitted d log(ratio) / d log(eta); contraction gives p-1
};

ProbeTable contraction_probe(const AngularSpectrum& f,
                             const NonlinearitySpec& spec,
                             const SolverConfig& cfg, const Problem& prob,
                             const std::vector<Real>& scales);

struct UniquenessReport {
  Real max_rel_disagreement = 0;
  Real tolerance = 0;  // 10 * tol_step
  bool ok = false;
  int diverged_inits = 0;  // large seeds outside the ball: flagged, not failed
};

/// Solves from w = 0 and from each perturbed seed; all runs inside the
/// contraction ball must land on the same fixed point.
UniquenessReport uniqueness_check(const AngularSpectrum& f,
                                  const NonlinearitySpec& spec,
                                  const SolverConfig& cfg, const Problem& prob,
                                  const std::vector<Field>& perturbations);

/// Deterministic random band-limited field scaled to a target module norm.
Field random_field(const Problem& prob, unsigned seed, Real target_norm,
                   const NormSpec& norm_spec);

/// Deterministic random band-limited spectrum scaled to a target H^k norm.
AngularSpectrum random_spectrum(const AngularBasis& basis, unsigned seed,
                                Real target_norm, Real sobolev_k,
                                Index band_limit = -1);

}  // namespace nlhelm

#endif  // NLHELM_SOLVER_HPP_
