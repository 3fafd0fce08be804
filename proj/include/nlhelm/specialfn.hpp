#ifndef NLHELM_SPECIALFN_HPP_
#define NLHELM_SPECIALFN_HPP_

#include "nlhelm/types.hpp"

namespace nlhelm {

/// Joint evaluation of J_nu and H^(1)_nu at one point, with derivatives.
/// Invariant: j*h1' - j'*h1 = 2i/(pi*x).
struct CylinderEval {
  Real order = 0;
  Real argument = 0;
  Real j = 0;
  Real j_prime = 0;
  Complex h1;
  Complex h1_prime;
};

/// Evaluates the cylinder pair (J_nu, H^(1)_nu) for nu >= 0, x > 0.
/// Power/Temme series below x = 2, Steed continued fractions above;
/// half-integer orders go through closed trigonometric forms.
/// Throws std::domain_error for invalid (nu, x), std::range_error on
/// overflow (extreme nu/x ratios).
CylinderEval cylinder_pair(Real order, Real argument);

/// J and Y over the order ladder nu0, nu0+1, ..., nu0+count-1 at fixed x.
/// J by downward recurrence normalized through the cross Wronskian
/// J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi x); Y by upward recurrence.
struct CylinderLadder {
  Real nu0 = 0;
  Real argument = 0;
  VecXd j, j_prime, y, y_prime;

  Complex h1(Index k) const { return {j[k], y[k]}; }
  Complex h1_prime(Index k) const { return {j_prime[k], y_prime[k]}; }
};

CylinderLadder cylinder_ladder(Real nu0, Index count, Real argument);

}  // namespace nlhelm

#endif  // NLHELM_SPECIALFN_HPP_
