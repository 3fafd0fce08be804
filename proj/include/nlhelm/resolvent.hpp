#ifndef NLHELM_RESOLVENT_HPP_
#define NLHELM_RESOLVENT_HPP_

#include <vector>

#include "nlhelm/field.hpp"
#include "nlhelm/profiles.hpp"
#include "nlhelm/types.hpp"

namespace nlhelm {

/// Regular/outgoing radial pair for one angular mode, realizing the
/// outgoing resolvent kernel G_l(r,r') = phi(r_<) psi(r_>) / wronskian_c
/// against the measure r^{n-1} dr'.
struct ModeGreens {
  Index l = 0;     // degree (n=3) or |l| (n=2)
  Real order = 0;  // nu = l + (n-2)/2
  VecXcd phi, phi_prime;
  VecXcd psi, psi_prime;
  Complex wronskian_c;   // r^{n-1} (phi psi' - phi' psi)
  Real wronskian_drift = 0;  // max relative deviation over the grid
};

ModeGreens mode_greens_free(Index l, int n, Real lambda, const RadialGrid& g);

/// Radial potential case: phi integrated outward from free initial data at
/// r_min, psi inward from r_max with the Hankel asymptotics corrected to
/// first order in the potential tail. Wronskian drift > 1e-4 throws.
ModeGreens mode_greens_potential(Index l, int n, Real lambda,
                                 const RadialProfile& V, const RadialGrid& g);

/// Per-degree Green functions 0..L plus metadata. sign = -1 conjugates psi,
/// giving the incoming resolvent (test use).
struct GreensSet {
  int n = 3;
  Real lambda = 1;
  int sign = +1;
  RadialGridPtr grid;
  std::vector<ModeGreens> per_degree;
};

GreensSet build_greens(int n, Real lambda, Index L, const RadialProfile* V,
                       const RadialGridPtr& grid, int sign = +1);

struct ResolventStats {
  Real tail_bound_rel = 0;  // fitted truncation tail vs output norm
  bool tail_warning = false;
};

/// u = R(lambda + i0) F: P u = F with u purely outgoing. F in mode
/// representation, same grid; tail truncation bound is fitted from the last
/// decade of the outer integrand and reported through stats.
Field apply_resolvent(const GreensSet& gs, const Field& F,
                      ResolventStats* stats = nullptr,
                      Real tail_tolerance = 1e-6);

}  // namespace nlhelm

#endif  // NLHELM_RESOLVENT_HPP_
