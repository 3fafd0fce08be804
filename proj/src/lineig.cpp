#include "nlhelm/lineig.hpp"

#include <cmath>

#include "nlhelm/specialfn.hpp"

namespace nlhelm {

namespace {

Real phase_theta(Real nu) { return nu * kPi / 2.0 + kPi / 4.0; }

// Least-squares coefficients of target ~ A basis1 + B basis2 over [i0, N).
void fit_two_basis(const VecXcd& target, const VecXcd& basis1,
                   const VecXcd& basis2, Index i0, Complex& A, Complex& B,
                   Real& rel_residual) {
  Complex g11 = 0, g12 = 0, g22 = 0, b1 = 0, b2 = 0;
  Real t2 = 0;
  const Index N = target.size();
  for (Index i = i0; i < N; ++i) {
    g11 += std::conj(basis1[i]) * basis1[i];
    g12 += std::conj(basis1[i]) * basis2[i];
    g22 += std::conj(basis2[i]) * basis2[i];
    b1 += std::conj(basis1[i]) * target[i];
    b2 += std::conj(basis2[i]) * target[i];
    t2 += std::norm(target[i]);
  }
  const Complex det = g11 * g22 - g12 * std::conj(g12);
  A = (g22 * b1 - g12 * b2) / det;
  B = (g11 * b2 - std::conj(g12) * b1) / det;
  Real r2 = 0;
  for (Index i = i0; i < N; ++i)
    r2 += std::norm(target[i] - A * basis1[i] - B * basis2[i]);
  rel_residual = std::sqrt(r2 / std::max(t2, 1e-300));
}

}  // namespace

VecXcd scattering_matrix(Real lambda, int n, const RadialProfile* V, Index L,
                         const RadialGridPtr& grid) {
  VecXcd sigma(L + 1);
  const bool free_case = (V == nullptr) || V->is_zero();
  if (free_case) {
    for (Index l = 0; l <= L; ++l) {
      const Real nu = l + 0.5 * (n - 2);
      sigma[l] = std::exp(-2.0 * kI * phase_theta(nu));
    }
    return sigma;
  }

  const Index N = grid->count();
  Index i0 = N - 1;
  const Real window_lo = 0.7 * grid->r_max;
  while (i0 > 0 && grid->nodes[i0 - 1] > window_lo) --i0;

  parallel_for(L + 1, [&](Index l) {
    const ModeGreens mg = mode_greens_potential(l, n, lambda, *V, *grid);
    const VecXcd psi_conj = mg.psi.conjugate();
    Complex A, B;
    Real res;
    fit_two_basis(mg.phi, mg.psi, psi_conj, i0, A, B, res);
    if (res > 1e-3)
      throw AccuracyError(
          "scattering_matrix: asymptotic matching failed at l=" +
          std::to_string(l) + " (window residual " + std::to_string(res) +
          ")");
    const Real nu = l + 0.5 * (n - 2);
    sigma[l] = (A / B) * std::exp(-2.0 * kI * phase_theta(nu));
  });
  return sigma;
}

LinearEigenfunction linear_eigenfunction(const AngularSpectrum& f, Real lambda,
                                         const RadialProfile* V,
                                         const RadialGridPtr& grid,
                                         const AngularBasisPtr& basis) {
  if (!(lambda > 0)) throw ConfigError("linear_eigenfunction: lambda <= 0");
  if (f.n != basis->n() || f.coeffs.size() != basis->modes())
    throw ShapeError("linear_eigenfunction: f does not match basis");
  // the incoming oscillation must be resolved by the radial grid
  Real max_spacing = 0;
  for (Index i = 0; i + 1 < grid->count(); ++i)
    max_spacing =
        std::max(max_spacing, grid->nodes[i + 1] - grid->nodes[i]);
  if (lambda * max_spacing > 0.3)
    throw ConfigError("linear_eigenfunction: grid under-resolves lambda "
                      "(lambda * spacing > 0.3)");

  const int n = basis->n();
  const Index L = basis->band_limit();
  const Index N = grid->count();
  const bool free_case = (V == nullptr) || V->is_zero();

  LinearEigenfunction lin;
  lin.lambda = lambda;
  lin.f = f;
  lin.sigma = scattering_matrix(lambda, n, V, L, grid);

  // per-degree radial profiles phi_l and mode normalizations
  MatXcd radial(N, L + 1);
  VecXcd incoming_coef(L + 1);  // coefficient of r^{-(n-1)/2} e^{-i lambda r}
  if (free_case) {
    const Real a2 = 0.5 * (n - 2);
    parallel_for(N, [&](Index i) {
      const Real r = grid->nodes[i];
      const CylinderLadder lad = cylinder_ladder(a2, L + 1, lambda * r);
      const Real ra = std::pow(r, -a2);
      for (Index l = 0; l <= L; ++l) radial(i, l) = ra * lad.j[l];
    });
    for (Index l = 0; l <= L; ++l) {
      const Real nu = l + a2;
      incoming_coef[l] = std::sqrt(1.0 / (2.0 * kPi * lambda)) *
                         std::exp(kI * phase_theta(nu));
    }
  } else {
    const Index i0 = [&] {
      Index i = N - 1;
      while (i > 0 && grid->nodes[i - 1] > 0.7 * grid->r_max) --i;
      return i;
    }();
    std::vector<ModeGreens> mgs(L + 1);
    parallel_for(L + 1, [&](Index l) {
      mgs[l] = mode_greens_potential(l, n, lambda, *V, *grid);
    });
    for (Index l = 0; l <= L; ++l) {
      radial.col(l) = mgs[l].phi.matrix();
      Complex A, B;
      Real res;
      fit_two_basis(mgs[l].phi, mgs[l].psi, mgs[l].psi.conjugate(), i0, A, B,
                    res);
      const Real nu = l + 0.5 * (n - 2);
      // conj(psi) carries incoming coefficient conj(h+),
      // h+ = sqrt(2/(pi lambda)) e^{-i theta_nu}
      const Complex hplus = std::sqrt(2.0 / (kPi * lambda)) *
                            std::exp(-kI * phase_theta(nu));
      incoming_coef[l] = B * std::conj(hplus);
    }
  }

  lin.per_mode_amplitudes.resize(basis->modes());
  MatXcd modes(N, basis->modes());
  const VecXd& deg = basis->degrees();
  for (Index c = 0; c < basis->modes(); ++c) {
    const Index l = static_cast<Index>(deg[c]);
    const Complex a = f.coeffs[c] / incoming_coef[l];
    lin.per_mode_amplitudes[c] = a;
    modes.col(c) = a * radial.col(l);
  }
  lin.u0 = Field::from_modes(grid, basis, std::move(modes));

  lin.g0.n = f.n;
  lin.g0.L = f.L;
  lin.g0.coeffs.resize(f.coeffs.size());
  for (Index c = 0; c < basis->modes(); ++c)
    lin.g0.coeffs[c] =
        lin.sigma[static_cast<Index>(deg[c])] * f.coeffs[c];
  return lin;
}

Field make_u_minus(const AngularSpectrum& f, Real lambda, Real R0,
                   const RadialGridPtr& grid, const AngularBasisPtr& basis) {
  const Real a1 = 0.5 * (basis->n() - 1);
  VecXcd radial(grid->count());
  for (Index i = 0; i < grid->count(); ++i) {
    const Real r = grid->nodes[i];
    radial[i] = cutoff_chi_value(r, R0) * std::pow(r, -a1) *
                std::exp(-kI * lambda * r);
  }
  return Field::separable(grid, basis, radial, f);
}

Field apply_helmholtz_to_u_minus(const AngularSpectrum& f, Real lambda,
                                 Real R0, const RadialGridPtr& grid,
                                 const AngularBasisPtr& basis,
                                 const RadialProfile* V) {
  const int n = basis->n();
  const Real a1 = 0.5 * (n - 1);
  const Index N = grid->count();
  const VecXd& deg = basis->degrees();
  MatXcd out(N, basis->modes());
  for (Index i = 0; i < N; ++i) {
    const Real r = grid->nodes[i];
    const Real chi = cutoff_chi_value(r, R0);
    const Real dchi = cutoff_chi_d1(r, R0);
    const Real d2chi = cutoff_chi_d2(r, R0);
    const Real ra = std::pow(r, -a1);
    const Real rap = -a1 * std::pow(r, -a1 - 1.0);
    const Real rapp = a1 * (a1 + 1.0) * std::pow(r, -a1 - 2.0);
    const Real h = chi * ra;
    const Real hp = dchi * ra + chi * rap;
    const Real hpp = d2chi * ra + 2.0 * dchi * rap + chi * rapp;
    const Real vr = V ? (*V)(r) : 0.0;
    const Complex osc = std::exp(-kI * lambda * r);
    // P (h e^{-i lambda r} Y_lm) = e^{-i lambda r} *
    //   [-h'' + 2 i lambda h' - (n-1)/r (h' - i lambda h) + (mu/r^2 + V) h]
    const Complex base =
        (-hpp + 2.0 * kI * lambda * hp -
         (n - 1.0) / r * (hp - kI * lambda * h) + vr * h) *
        osc;
    const Complex ang_term = osc * h / (r * r);
    for (Index c = 0; c < basis->modes(); ++c) {
      const Real mu = laplace_eigenvalue(n, static_cast<Index>(deg[c]));
      out(i, c) = f.coeffs[c] * (base + mu * ang_term);
    }
  }
  return Field::from_modes(grid, basis, std::move(out));
}

SplitEigenfunction split_incoming(const LinearEigenfunction& lin, Real R0,
                                  const GreensSet& gs, const RadialProfile* V,
                                  Real check_tol) {
  SplitEigenfunction sp;
  sp.u_minus = make_u_minus(lin.f, lin.lambda, R0, lin.u0.grid_ptr(),
                            lin.u0.basis_ptr());
  sp.u_plus = lin.u0 - sp.u_minus;

  const Real fscale = lin.f.coeffs.matrix().norm();
  if (fscale == 0.0) {
    sp.crosscheck_rel = 0.0;
    return sp;
  }

  // Cross-check u_plus = -R(lambda + i0)(P u_minus) with P u_minus analytic.
  // P u_minus decays only two orders faster than u_minus, so the outer
  // integral feels the domain truncation; the identity is therefore
  // re-evaluated on a grid extended to 3 r_max and compared on the
  // original interior window.
  const RadialGrid& g0 = lin.u0.grid();
  const Index count_ext = 3 * (g0.count() - 1) + 1;
  auto grid_ext = make_grid(g0.r_min, 3.0 * g0.r_max, count_ext, g0.grading);
  const AngularBasisPtr& basis = lin.u0.basis_ptr();
  const GreensSet gs_ext = build_greens(gs.n, lin.lambda,
                                        basis->band_limit(), V, grid_ext);
  const LinearEigenfunction lin_ext =
      linear_eigenfunction(lin.f, lin.lambda, V, grid_ext, basis);
  const Field um_ext =
      make_u_minus(lin.f, lin.lambda, R0, grid_ext, basis);
  const Field uplus_ext = lin_ext.u0 - um_ext;
  const Field pum_ext = apply_helmholtz_to_u_minus(lin.f, lin.lambda, R0,
                                                   grid_ext, basis, V);
  const Field ru_ext = apply_resolvent(gs_ext, pum_ext);
  const Field mismatch = uplus_ext + ru_ext;

  Index lo = 3, hi = 3;
  const Real r_cut = g0.r_min + 0.8 * (g0.r_max - g0.r_min);
  while (hi < grid_ext->count() && grid_ext->nodes[hi] < r_cut) ++hi;
  const Real denom = weighted_norm(uplus_ext, 0, 0.0, lo, hi);
  sp.crosscheck_rel = weighted_norm(mismatch, 0, 0.0, lo, hi) /
                      std::max(denom, 1e-300);
  if (sp.crosscheck_rel > check_tol)
    throw AccuracyError("split_incoming: resolvent cross-check failed (" +
                        std::to_string(sp.crosscheck_rel) + ")");
  return sp;
}

}  // namespace nlhelm
