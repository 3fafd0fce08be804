#ifndef NLHELM_FIELD_HPP_
#define NLHELM_FIELD_HPP_

#include <vector>

#include "nlhelm/angular.hpp"
#include "nlhelm/profiles.hpp"
#include "nlhelm/radial.hpp"
#include "nlhelm/types.hpp"

namespace nlhelm {

/// Discrete norm descriptor for H^{s,l; kappa,k} with module sign.
/// weight_l must sit in (-3/2, -1/2) for solver use; kappa <= 1.
struct NormSpec {
  int s = 2;
  Real weight_l = -0.55;
  int kappa = 1;
  int k = 2;
  int sign = +1;
};

/// Complex function on (radius x sphere), carried as point values and as
/// per-radius harmonic coefficients. Conversions are cached; both
/// representations agree (to transform accuracy) for band-limited content,
/// which is the class every pipeline stage hands around. Projecting
/// non-band-limited point data (nonlinearity output) truncates.
class Field {
 public:
  Field() = default;
  Field(RadialGridPtr grid, AngularBasisPtr basis);  // zero field

  static Field from_modes(RadialGridPtr grid, AngularBasisPtr basis,
                          MatXcd modes);
  static Field from_values(RadialGridPtr grid, AngularBasisPtr basis,
                           MatXcd values);
  /// Separable field radial(r) * f(omega), assembled in mode space.
  static Field separable(RadialGridPtr grid, AngularBasisPtr basis,
                         const VecXcd& radial, const AngularSpectrum& f);

  const RadialGridPtr& grid_ptr() const { return grid_; }
  const AngularBasisPtr& basis_ptr() const { return basis_; }
  const RadialGrid& grid() const { return *grid_; }
  const AngularBasis& basis() const { return *basis_; }
  int n() const { return basis_->n(); }
  Index radial_count() const { return grid_->count(); }
  Index mode_count() const { return basis_->modes(); }
  Index node_count() const { return basis_->grid().node_count(); }

  bool has_modes() const { return modes_current_; }
  bool has_values() const { return values_current_; }

  /// Rows are radii. Missing representation is synthesized on demand.
  const MatXcd& modes() const;
  const MatXcd& values() const;

  void set_modes(MatXcd m);
  void set_values(MatXcd v);

  bool compatible_with(const Field& o) const {
    return grid_ == o.grid_ && basis_ == o.basis_;
  }
  /// Max relative mismatch between the two representations (both current).
  Real representation_mismatch() const;

  /// Row i of the mode matrix as a spectrum.
  AngularSpectrum spectrum_at(Index i) const;

 private:
  RadialGridPtr grid_;
  AngularBasisPtr basis_;
  mutable MatXcd modes_, values_;
  mutable bool modes_current_ = false;
  mutable bool values_current_ = false;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(Complex c, const Field& a);

/// Multiply every row (fixed radius) by a radial factor.
Field scale_radial(const Field& a, const VecXcd& factor);

/// d/dr, 4th order in the radial index coordinate.
Field d_radial(const Field& u);

/// Components of r^-1 d_omega u in the orthonormal sphere frame:
/// n=2 -> { r^-1 d_theta }; n=3 -> { r^-1 d_theta, r^-1 (sin theta)^-1 d_phi }.
std::vector<Field> angular_frame(const Field& u);

/// One frame direction: 0 = d_r, 1.. = angular components as above.
Field frame_derivative(const Field& u, int direction);
/// Composition of frame derivatives, applied left to right; length <= 2.
Field frame_word(const Field& u, const std::vector<int>& word);

/// P u = -u'' - (n-1)/r u' + (mu_l/r^2 + V - lambda^2) u per mode.
/// Interior-accurate; the FD closure bands near both ends carry one-sided
/// stencils (callers exclude them through the window arguments of norms).
Field apply_helmholtz(const Field& u, Real lambda,
                      const RadialProfile* V = nullptr);

/// sqrt of the sum over frame-derivative words up to length s of
/// the weighted L^2 integrals of <r>^l (word) u, measure r^{n-1} dr domega.
/// Angular words act spectrally (multiplier sqrt(mu_l)/r per application).
/// [i_lo, i_hi) restricts the radial window; i_hi < 0 means the full grid.
Real weighted_norm(const Field& u, int s, Real weight_l, Index i_lo = 0,
                   Index i_hi = -1);

/// Discrete H^{s,l;kappa,k}_{+/-} norm: sum over a <= kappa applications of
/// r(D_r -+ lambda) and b <= k applications of (1+Delta_omega)^(1/2)
/// of weighted_norm squared.
Real module_norm(const Field& u, const NormSpec& spec, Real lambda,
                 Index i_lo = 0, Index i_hi = -1);

/// Interior radial window [i_lo, i_hi): skips the FD closure band at the
/// inner end and the outer fraction where truncation/closure pollutes.
void interior_window(const RadialGrid& g, Index& i_lo, Index& i_hi,
                     Real outer_fraction = 0.8);

}  // namespace nlhelm

#endif  // NLHELM_FIELD_HPP_
