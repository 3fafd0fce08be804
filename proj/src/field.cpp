#include "nlhelm/field.hpp"

#include <cmath>

namespace nlhelm {

Field::Field(RadialGridPtr grid, AngularBasisPtr basis)
    : grid_(std::move(grid)), basis_(std::move(basis)) {
  modes_ = MatXcd::Zero(grid_->count(), basis_->modes());
  values_ = MatXcd::Zero(grid_->count(), basis_->grid().node_count());
  modes_current_ = values_current_ = true;
}

Field Field::from_modes(RadialGridPtr grid, AngularBasisPtr basis,
                        MatXcd modes) {
  if (modes.rows() != grid->count() || modes.cols() != basis->modes())
    throw ShapeError("Field::from_modes: shape mismatch");
  Field f;
  f.grid_ = std::move(grid);
  f.basis_ = std::move(basis);
  f.modes_ = std::move(modes);
  f.modes_current_ = true;
  return f;
}

Field Field::from_values(RadialGridPtr grid, AngularBasisPtr basis,
                         MatXcd values) {
  if (values.rows() != grid->count() ||
      values.cols() != basis->grid().node_count())
    throw ShapeError("Field::from_values: shape mismatch");
  Field f;
  f.grid_ = std::move(grid);
  f.basis_ = std::move(basis);
  f.values_ = std::move(values);
  f.values_current_ = true;
  return f;
}

Field Field::separable(RadialGridPtr grid, AngularBasisPtr basis,
                       const VecXcd& radial, const AngularSpectrum& f) {
  if (radial.size() != grid->count())
    throw ShapeError("Field::separable: radial size mismatch");
  if (f.coeffs.size() != basis->modes())
    throw ShapeError("Field::separable: spectrum does not match basis");
  MatXcd m = radial.matrix() * f.coeffs.matrix().transpose();
  return from_modes(std::move(grid), std::move(basis), std::move(m));
}

const MatXcd& Field::modes() const {
  if (!modes_current_) {
    modes_ = values_ * basis_->analysis().transpose();
    modes_current_ = true;
  }
  return modes_;
}

const MatXcd& Field::values() const {
  if (!values_current_) {
    values_ = modes_ * basis_->synthesis().transpose();
    values_current_ = true;
  }
  return values_;
}

void Field::set_modes(MatXcd m) {
  if (m.rows() != grid_->count() || m.cols() != basis_->modes())
    throw ShapeError("Field::set_modes: shape mismatch");
  modes_ = std::move(m);
  modes_current_ = true;
  values_current_ = false;
}

void Field::set_values(MatXcd v) {
  if (v.rows() != grid_->count() || v.cols() != basis_->grid().node_count())
    throw ShapeError("Field::set_values: shape mismatch");
  values_ = std::move(v);
  values_current_ = true;
  modes_current_ = false;
}

Real Field::representation_mismatch() const {
  if (!modes_current_ || !values_current_) return 0.0;
  const MatXcd synth = modes_ * basis_->synthesis().transpose();
  const Real denom = values_.norm();
  if (denom == 0.0) return synth.norm();
  return (synth - values_).norm() / denom;
}

AngularSpectrum Field::spectrum_at(Index i) const {
  AngularSpectrum s;
  s.n = n();
  s.L = basis_->band_limit();
  s.coeffs = modes().row(i).transpose().array();
  return s;
}

namespace {

void require_compatible(const Field& a, const Field& b, const char* op) {
  if (!a.compatible_with(b))
    throw ShapeError(std::string(op) + ": fields on different grids");
}

}  // namespace

Field operator+(const Field& a, const Field& b) {
  require_compatible(a, b, "operator+");
  return Field::from_modes(a.grid_ptr(), a.basis_ptr(), a.modes() + b.modes());
}

Field operator-(const Field& a, const Field& b) {
  require_compatible(a, b, "operator-");
  return Field::from_modes(a.grid_ptr(), a.basis_ptr(), a.modes() - b.modes());
}

Field operator*(Complex c, const Field& a) {
  return Field::from_modes(a.grid_ptr(), a.basis_ptr(), c * a.modes());
}

Field scale_radial(const Field& a, const VecXcd& factor) {
  if (factor.size() != a.radial_count())
    throw ShapeError("scale_radial: factor size mismatch");
  return Field::from_modes(a.grid_ptr(), a.basis_ptr(),
                           factor.matrix().asDiagonal() * a.modes());
}

Field d_radial(const Field& u) {
  const MatXcd& m = u.modes();
  MatXcd out(m.rows(), m.cols());
  parallel_for(m.cols(), [&](Index c) {
    VecXcd col = m.col(c).array();
    VecXcd dcol;
    radial_derivative(u.grid(), col, dcol);
    out.col(c) = dcol.matrix();
  });
  return Field::from_modes(u.grid_ptr(), u.basis_ptr(), std::move(out));
}

std::vector<Field> angular_frame(const Field& u) {
  const AngularBasis& basis = u.basis();
  const VecXd inv_r = u.grid().nodes.inverse();
  std::vector<Field> out;
  if (u.n() == 2) {
    // d_theta as the il multiplier, then 1/r.
    MatXcd m = u.modes();
    for (Index c = 0; c < m.cols(); ++c)
      m.col(c) *= kI * basis.fourier_index()[c];
    Field f = Field::from_modes(u.grid_ptr(), u.basis_ptr(), std::move(m));
    out.push_back(scale_radial(f, inv_r.cast<Complex>()));
  } else {
    MatXcd vth = u.modes() * basis.synthesis_dtheta().transpose();
    MatXcd vph = u.modes() * basis.synthesis_dphi_over_sin().transpose();
    vth = inv_r.matrix().asDiagonal() * vth;
    vph = inv_r.matrix().asDiagonal() * vph;
    out.push_back(Field::from_values(u.grid_ptr(), u.basis_ptr(), std::move(vth)));
    out.push_back(Field::from_values(u.grid_ptr(), u.basis_ptr(), std::move(vph)));
  }
  return out;
}

Field frame_derivative(const Field& u, int direction) {
  if (direction == 0) {
    // flag hopelessly under-resolved data on the dominant mode column
    const MatXcd& m = u.modes();
    Index cmax = 0;
    Real best = -1;
    for (Index c = 0; c < m.cols(); ++c) {
      const Real nn = m.col(c).norm();
      if (nn > best) {
        best = nn;
        cmax = c;
      }
    }
    if (best > 0) {
      const Real est =
          fd_resolution_estimate(u.grid(), m.col(cmax).array());
      if (est > 0.25)
        throw AccuracyError(
            "frame_derivative: grid too coarse for the data (FD "
            "disagreement " +
            std::to_string(est) + ")");
    }
    return d_radial(u);
  }
  auto ang = angular_frame(u);
  const int idx = direction - 1;
  if (idx < 0 || idx >= static_cast<int>(ang.size()))
    throw ConfigError("frame_derivative: direction out of range");
  return ang[static_cast<size_t>(idx)];
}

Field frame_word(const Field& u, const std::vector<int>& word) {
  if (word.size() > 2)
    throw ConfigError("frame_word: derivative words have length <= 2");
  Field cur = u;
  for (int d : word) cur = frame_derivative(cur, d);
  return cur;
}

Field apply_helmholtz(const Field& u, Real lambda, const RadialProfile* V) {
  const RadialGrid& g = u.grid();
  const MatXcd& m = u.modes();
  const VecXd& r = g.nodes;
  VecXd vr = VecXd::Zero(r.size());
  if (V && !V->is_zero()) {
    if (!V->decays_quadratically())
      throw ConfigError("apply_helmholtz: potential must decay like r^-2");
    vr = V->sample(r);
  }
  const VecXd inv_r = r.inverse();
  const VecXd inv_r2 = inv_r * inv_r;
  const Real nm1 = u.n() - 1.0;
  MatXcd out(m.rows(), m.cols());
  const VecXd& eig = u.basis().eigenvalues();
  parallel_for(m.cols(), [&](Index c) {
    VecXcd col = m.col(c).array();
    VecXcd d1, d2;
    radial_derivative2(g, col, d1, d2);
    VecXcd res = -d2 - nm1 * inv_r * d1 +
                 (eig[c] * inv_r2 + vr - lambda * lambda) * col;
    out.col(c) = res.matrix();
  });
  return Field::from_modes(u.grid_ptr(), u.basis_ptr(), std::move(out));
}

namespace {

// Weighted L^2 square over the window, measure r^{n-1} dr, weight <r>^l.
Real l2w_square(const MatXcd& modes, const RadialGrid& g, int n, Real wl,
                Index i_lo, Index i_hi) {
  const VecXd mw = g.measure_weights(n);
  const VecXd br = (1.0 + g.nodes * g.nodes).sqrt().pow(2.0 * wl);
  Real acc = 0.0;
  for (Index i = i_lo; i < i_hi; ++i)
    acc += mw[i] * br[i] * modes.row(i).squaredNorm();
  return acc;
}

// Same integral from point values and angular quadrature weights. Agrees
// with the mode route for band-limited content; for raw point data (not
// band-limited) this is the honest grid quadrature.
Real l2w_square_values(const Field& f, Real wl, Index i_lo, Index i_hi) {
  const RadialGrid& g = f.grid();
  const VecXd mw = g.measure_weights(f.n());
  const VecXd br = (1.0 + g.nodes * g.nodes).sqrt().pow(2.0 * wl);
  const VecXd& wang = f.basis().grid().weights;
  const MatXcd& v = f.values();
  Real acc = 0.0;
  for (Index i = i_lo; i < i_hi; ++i) {
    Real row = 0.0;
    for (Index j = 0; j < v.cols(); ++j) row += wang[j] * std::norm(v(i, j));
    acc += mw[i] * br[i] * row;
  }
  return acc;
}

// Apply one angular frame letter spectrally: sqrt(mu_l)/r.
MatXcd apply_angular_letter(const MatXcd& m, const RadialGrid& g,
                            const VecXd& eig) {
  MatXcd out = g.nodes.inverse().matrix().asDiagonal() * m;
  for (Index c = 0; c < out.cols(); ++c) out.col(c) *= std::sqrt(eig[c]);
  return out;
}

MatXcd apply_radial_letter(const MatXcd& m, const RadialGrid& g) {
  MatXcd out(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) {
    VecXcd col = m.col(c).array();
    VecXcd dcol;
    radial_derivative(g, col, dcol);
    out.col(c) = dcol.matrix();
  }
  return out;
}

}  // namespace

Real weighted_norm(const Field& u, int s, Real weight_l, Index i_lo,
                   Index i_hi) {
  if (s < 0 || s > 2) throw ConfigError("weighted_norm: s must be 0, 1 or 2");
  if (i_hi < 0) i_hi = u.radial_count();
  const RadialGrid& g = u.grid();
  const VecXd& eig = u.basis().eigenvalues();
  const int n = u.n();

  Real acc = (u.has_values() && !u.has_modes())
                 ? l2w_square_values(u, weight_l, i_lo, i_hi)
                 : l2w_square(u.modes(), g, n, weight_l, i_lo, i_hi);
  if (s >= 1) {
    const MatXcd ur = apply_radial_letter(u.modes(), g);
    const MatXcd ua = apply_angular_letter(u.modes(), g, eig);
    acc += l2w_square(ur, g, n, weight_l, i_lo, i_hi);
    acc += l2w_square(ua, g, n, weight_l, i_lo, i_hi);
    if (s == 2) {
      acc += l2w_square(apply_radial_letter(ur, g), g, n, weight_l, i_lo, i_hi);
      acc += l2w_square(apply_angular_letter(ur, g, eig), g, n, weight_l,
                        i_lo, i_hi);
      acc += l2w_square(apply_radial_letter(ua, g), g, n, weight_l, i_lo, i_hi);
      acc += l2w_square(apply_angular_letter(ua, g, eig), g, n, weight_l,
                        i_lo, i_hi);
    }
  }
  return std::sqrt(acc);
}

Real module_norm(const Field& u, const NormSpec& spec, Real lambda,
                 Index i_lo, Index i_hi) {
  if (spec.kappa < 0 || spec.kappa > 1)
    throw ConfigError("module_norm: kappa must be 0 or 1");
  if (spec.k < 0) throw ConfigError("module_norm: negative angular order");
  if (i_hi < 0) i_hi = u.radial_count();
  const RadialGrid& g = u.grid();
  const VecXd& eig = u.basis().eigenvalues();
  const Real sgn = spec.sign >= 0 ? 1.0 : -1.0;

  // A_pm u = r (D_r -+ lambda) u = -i r u' -+ lambda r u
  auto apply_module = [&](const MatXcd& m) {
    MatXcd du = apply_radial_letter(m, g);
    MatXcd out(m.rows(), m.cols());
    const VecXd& r = g.nodes;
    for (Index c = 0; c < m.cols(); ++c)
      out.col(c) = (-kI) * (r.cast<Complex>() * du.col(c).array()).matrix() -
                   sgn * lambda * (r.cast<Complex>() * m.col(c).array()).matrix();
    return out;
  };

  Real acc = 0.0;
  MatXcd base = u.modes();
  for (int a = 0; a <= spec.kappa; ++a) {
    MatXcd cur = base;
    for (int b = 0; b <= spec.k; ++b) {
      Field tmp = Field::from_modes(u.grid_ptr(), u.basis_ptr(), cur);
      const Real nn = weighted_norm(tmp, spec.s, spec.weight_l, i_lo, i_hi);
      acc += nn * nn;
      if (b < spec.k) {
        // one application of (1 + Delta_omega)^(1/2)
        for (Index c = 0; c < cur.cols(); ++c)
          cur.col(c) *= std::sqrt(1.0 + eig[c]);
      }
    }
    if (a < spec.kappa) base = apply_module(base);
  }
  return std::sqrt(acc);
}

void interior_window(const RadialGrid& g, Index& i_lo, Index& i_hi,
                     Real outer_fraction) {
  i_lo = 3;
  const Real r_cut = g.r_min + outer_fraction * (g.r_max - g.r_min);
  i_hi = g.count() - 3;
  while (i_hi > i_lo && g.nodes[i_hi - 1] > r_cut) --i_hi;
}

}  // namespace nlhelm
