#ifndef NLHELM_FARFIELD_HPP_
#define NLHELM_FARFIELD_HPP_

#include <string>

#include "nlhelm/field.hpp"

namespace nlhelm {

struct FarFieldWindow {
  Real lo_frac = 0.60;  // of r_max
  Real hi_frac = 0.95;  // outer 5% excluded as FD closure band
};

struct FarFieldReport {
  AngularSpectrum g;
  Real eps_prime = 0;    // fitted decay exponent of the stripped residual
  bool fit_ok = true;    // monotone residual, positive exponent
  bool exact = false;    // residual at rounding level, no fit attempted
  Real window_lo = 0, window_hi = 0;
  VecXd residual_radii;
  VecXd residual_curve;  // per-radius mode-l2 distance of slices from g
  Real flux_in = 0;      // ||f||_{L^2}
  Real flux_out = 0;     // ||g||_{L^2}
  std::string warning;
};

/// Strips the known incoming term and the outgoing oscillation, then
/// Richardson-averages the window slices: per mode fit a + b r^{-eps'} and
/// report a. eps' comes from the log-log slope of the residual curve.
FarFieldReport extract_outgoing(const Field& u, const AngularSpectrum& f,
                                Real lambda, Real R0,
                                FarFieldWindow window = {});

/// | ||f||^2 - ||g||^2 | / ||f||^2.
Real flux_balance(const AngularSpectrum& f, const AngularSpectrum& g);

/// Im of the grid pairing integral of conj(u) * Nu, measure r^{n-1} dr dw.
/// Boundary-pairing oracle: lambda (||g||^2 - ||f||^2) = -Im of it.
Real pairing_imag(const Field& u, const Field& Nu);

}  // namespace nlhelm

#endif  // NLHELM_FARFIELD_HPP_
