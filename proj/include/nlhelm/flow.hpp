#ifndef NLHELM_FLOW_HPP_
#define NLHELM_FLOW_HPP_

#include <vector>

#include "nlhelm/types.hpp"

namespace nlhelm {

/// Point on the compactified scattering phase space near spatial infinity:
/// x = 1/r, chart coordinates y on S^{n-1}, nu dual to r, mu = eta/r.
/// n=3 uses two stereographic charts (0: |y| from the north pole, 1: south);
/// n=2 has the periodic angle itself.
struct PhasePoint {
  int n = 3;
  int chart = 0;
  Real x = 0;
  Eigen::Vector2d y{0, 0};
  Real nu = 0;
  Eigen::Vector2d mu{0, 0};
};

/// nu^2 + |mu|^2_y, conserved along the rescaled flow.
Real phase_energy(const PhasePoint& q);
/// |mu|_y (metric length of the angular covector).
Real mu_norm(const PhasePoint& q);
/// Move to the other stereographic chart (n=3).
PhasePoint swap_chart(const PhasePoint& q);

struct TrajectorySample {
  Real t = 0;
  PhasePoint q;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool escaped_interior = false;  // x grew past the collar while integrating
};

/// Integrates the rescaled Hamilton field
///   x' = -2 nu x, y' = 2 h^{jk} mu_k, nu' = 2 |mu|^2_y,
///   mu' = -2 nu mu - dh/dy mu mu
/// from t = 0 to t_end (either sign), with chart handoff at |y| > 1.5.
Trajectory hamilton_flow(const PhasePoint& q0, Real t_end, Real lambda,
                         Real tol = 1e-10);

enum class LimitClass { kRPlus, kRMinus, kInterior, kUndecided };

/// Looks at the end state of a trajectory: within 1e-6 of a radial set,
/// escaped into the interior, or undecided (t span too short).
LimitClass classify_limit(const Trajectory& traj, Real lambda);

/// Variable spatial weight l_+(nu): values in [-1/2-delta, -1/2+delta],
/// constant -1/2 -+ delta near nu = +-lambda, monotone ramp between.
/// l_- = -1 - l_+. reversed flips the ramp (a spec that must be rejected).
struct WeightSpec {
  Real lambda = 1.0;
  Real delta = 0.05;
  Real margin = 0.2;
  bool reversed = false;

  Real lplus(Real nu, Real mu_norm_unused = 0.0) const;
  Real lminus(Real nu, Real mu_norm_unused = 0.0) const {
    return -1.0 - lplus(nu, mu_norm_unused);
  }
};

struct WeightReport {
  bool ok = true;
  Real worst_increase = 0;  // of l_+ along the flow (slack 1e-10)
  Index violation_index = -1;
};

WeightReport check_weight(const WeightSpec& ws, const Trajectory& traj);

/// The rescaled Hamilton vector field itself (time derivative of each
/// component of q), exposed for finite-difference linearization checks.
void hamilton_rhs(const PhasePoint& q, PhasePoint& dq);

/// d(xdot)/dx at the radial set nu = +-lambda by a finite-difference
/// quotient through hamilton_rhs; nonzero (-+ 2 lambda) — the
/// nondegeneracy behind the radial point estimates.
Real radial_set_x_eigenvalue(int n, Real lambda, int sign);

}  // namespace nlhelm

#endif  // NLHELM_FLOW_HPP_
