#ifndef NLHELM_LINEIG_HPP_
#define NLHELM_LINEIG_HPP_

#include "nlhelm/field.hpp"
#include "nlhelm/resolvent.hpp"

namespace nlhelm {

/// Helmholtz eigenfunction with prescribed incoming data f:
/// u0 ~ r^{-(n-1)/2} (e^{-i lambda r} f(w) + e^{+i lambda r} g0(w) + O(1/r)).
struct LinearEigenfunction {
  Real lambda = 1;
  AngularSpectrum f;
  AngularSpectrum g0;
  Field u0;
  VecXcd per_mode_amplitudes;  // per flat mode index
  VecXcd sigma;                // per-degree phases, g0_l = sigma_l f_l
};

/// Per-degree scattering phases sigma_l, l = 0..L. Free case: the exact
/// J_nu asymptotic phase gives sigma_l = exp(-i pi (nu + 1/2)) with
/// nu = l + (n-2)/2, i.e. (-1)^l (-i)^{n-1}. Potential case: least-squares
/// match of the regular solution against {psi, conj(psi)} over the window
/// [0.7 r_max, r_max]; |sigma_l| = 1 to the integration accuracy.
VecXcd scattering_matrix(Real lambda, int n, const RadialProfile* V, Index L,
                         const RadialGridPtr& grid);

LinearEigenfunction linear_eigenfunction(const AngularSpectrum& f, Real lambda,
                                         const RadialProfile* V,
                                         const RadialGridPtr& grid,
                                         const AngularBasisPtr& basis);

struct SplitEigenfunction {
  Field u_minus;  // chi(r) r^{-(n-1)/2} e^{-i lambda r} f(w)
  Field u_plus;   // u0 - u_minus
  Real crosscheck_rel = 0;  // |u_plus + R(P u_minus)| / |u_plus|
};

/// Splits u0 = u_minus + u_plus and verifies u_plus = -R(lambda+i0)(P u_minus)
/// with P u_minus evaluated analytically. Tolerance breach throws
/// AccuracyError (flags a resolvent/grid inconsistency).
SplitEigenfunction split_incoming(const LinearEigenfunction& lin, Real R0,
                                  const GreensSet& gs,
                                  const RadialProfile* V = nullptr,
                                  Real check_tol = 1e-3);

/// Analytic P u_minus for u_minus = chi r^{-(n-1)/2} e^{-i lambda r} f.
Field apply_helmholtz_to_u_minus(const AngularSpectrum& f, Real lambda,
                                 Real R0, const RadialGridPtr& grid,
                                 const AngularBasisPtr& basis,
                                 const RadialProfile* V = nullptr);

/// The incoming leading term itself, assembled in mode space.
Field make_u_minus(const AngularSpectrum& f, Real lambda, Real R0,
                   const RadialGridPtr& grid, const AngularBasisPtr& basis);

}  // namespace nlhelm

#endif  // NLHELM_LINEIG_HPP_
