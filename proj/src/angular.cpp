#include "nlhelm/angular.hpp"

#include <cmath>

namespace nlhelm {

Index mode_count(int n, Index L) {
  return n == 2 ? 2 * L + 1 : (L + 1) * (L + 1);
}

Index mode_index(int n, Index L, Index l, Index m) {
  if (n == 2) return l + L;  // l in [-L, L]
  return l * l + l + m;
}

Index mode_degree(int n, Index L, Index idx) {
  if (n == 2) return std::abs(idx - L);
  return static_cast<Index>(std::sqrt(static_cast<Real>(idx) + 0.5));
}

Real laplace_eigenvalue(int n, Index degree) {
  return static_cast<Real>(degree) * (degree + n - 2);
}

void gauss_legendre(Index count, VecXd& nodes, VecXd& weights) {
  nodes.resize(count);
  weights.resize(count);
  const Index half = (count + 1) / 2;
  for (Index i = 0; i < half; ++i) {
    Real z = std::cos(kPi * (i + 0.75) / (count + 0.5));
    Real pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p1 = 1.0, p2 = 0.0;
      for (Index j = 0; j < count; ++j) {
        const Real p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = count * (z * p1 - p2) / (z * z - 1.0);
      const Real dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[count - 1 - i] = z;
    weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

void normalized_legendre(Index L, Real c, Real s, MatXd& P) {
  P.setZero(L + 1, L + 1);
  P(0, 0) = std::sqrt(0.5);
  for (Index m = 1; m <= L; ++m)
    P(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * P(m - 1, m - 1);
  for (Index m = 0; m + 1 <= L; ++m)
    P(m + 1, m) = std::sqrt(2.0 * m + 3.0) * c * P(m, m);
  for (Index m = 0; m <= L; ++m) {
    for (Index l = m + 2; l <= L; ++l) {
      const Real l2m2 = static_cast<Real>(l * l - m * m);
      const Real a = std::sqrt((4.0 * l * l - 1.0) / l2m2);
      const Real b = std::sqrt((2.0 * l + 1.0) * (l - 1.0 + m) *
                               (l - 1.0 - m) / ((2.0 * l - 3.0) * l2m2));
      P(l, m) = a * c * P(l - 1, m) - b * P(l - 2, m);
    }
  }
}

namespace {

// d/dtheta of the orthonormal P(l,m), from the pole-safe two-term relation.
Real legendre_dtheta(const MatXd& P, Index l, Index m) {
  Real upper = 0.0, lower = 0.0;
  if (m + 1 <= l) upper = std::sqrt((l - m) * (l + m + 1.0)) * P(l, m + 1);
  if (m >= 1)
    lower = std::sqrt((l + m) * (l - m + 1.0)) * P(l, m - 1);
  else if (l >= 1)
    lower = -std::sqrt(l * (l + 1.0)) * P(l, 1);  // P(l,-1) = -P(l,1)
  return 0.5 * (upper - lower);
}

}  // namespace

AngularBasis::AngularBasis(int n, Index L) : n_(n), L_(L) {
  if (n != 2 && n != 3) throw ConfigError("AngularBasis: n must be 2 or 3");
  if (L < 0) throw ConfigError("AngularBasis: negative band limit");
  const Index nm = nlhelm::mode_count(n, L);
  degrees_.resize(nm);
  eigenvalues_.resize(nm);
  fourier_index_.resize(n == 2 ? nm : 0);

  grid_.n = n;
  grid_.L = L;

  if (n == 2) {
    const Index M = 2 * L + 2;
    grid_.theta.resize(M);
    grid_.weights.setConstant(M, 2.0 * kPi / M);
    for (Index j = 0; j < M; ++j) grid_.theta[j] = 2.0 * kPi * j / M;

    synthesis_.resize(M, nm);
    const Real norm = 1.0 / std::sqrt(2.0 * kPi);
    for (Index idx = 0; idx < nm; ++idx) {
      const Index l = idx - L;
      fourier_index_[idx] = static_cast<Real>(l);
      degrees_[idx] = static_cast<Real>(std::abs(l));
      eigenvalues_[idx] = laplace_eigenvalue(2, std::abs(l));
      for (Index j = 0; j < M; ++j)
        synthesis_(j, idx) = norm * std::exp(kI * (l * grid_.theta[j]));
    }
  } else {
    const Index nt = L + 1;
    const Index np = 2 * L + 2;
    VecXd glx, glw;
    gauss_legendre(nt, glx, glw);
    const Index M = nt * np;
    grid_.theta.resize(M);
    grid_.phi.resize(M);
    grid_.weights.resize(M);

    synthesis_.resize(M, nm);
    synthesis_dtheta_.resize(M, nm);
    synthesis_dphi_over_sin_.resize(M, nm);

    for (Index idx = 0; idx < nm; ++idx) {
      const Index l = nlhelm::mode_degree(3, L, idx);
      degrees_[idx] = static_cast<Real>(l);
      eigenvalues_[idx] = laplace_eigenvalue(3, l);
    }

    const Real norm = 1.0 / std::sqrt(2.0 * kPi);
    MatXd P;
    for (Index i = 0; i < nt; ++i) {
      const Real c = glx[i];
      const Real s = std::sqrt(1.0 - c * c);
      normalized_legendre(L, c, s, P);
      for (Index jj = 0; jj < np; ++jj) {
        const Index node = i * np + jj;
        const Real ph = 2.0 * kPi * jj / np;
        grid_.theta[node] = std::acos(c);
        grid_.phi[node] = ph;
        grid_.weights[node] = glw[i] * 2.0 * kPi / np;
        for (Index l = 0; l <= L; ++l) {
          for (Index m = -l; m <= l; ++m) {
            const Index idx = mode_index(3, L, l, m);
            const Index am = std::abs(m);
            // Y_{l,-m} = (-1)^m conj(Y_{l,m})
            const Real sign = (m < 0 && (am % 2)) ? -1.0 : 1.0;
            const Complex az = norm * std::exp(kI * (m * ph));
            synthesis_(node, idx) = sign * P(l, am) * az;
            synthesis_dtheta_(node, idx) =
                sign * legendre_dtheta(P, l, am) * az;
            synthesis_dphi_over_sin_(node, idx) =
                sign * P(l, am) * az * kI * static_cast<Real>(m) / s;
          }
        }
      }
    }
  }

  analysis_ = synthesis_.adjoint() * grid_.weights.matrix().asDiagonal();
}

AngularBasisPtr make_angular_basis(int n, Index L) {
  return std::make_shared<AngularBasis>(n, L);
}

AngularSpectrum forward_transform(const VecXcd& samples,
                                  const AngularBasis& basis) {
  if (samples.size() != basis.grid().node_count())
    throw ShapeError("forward_transform: sample count does not match grid");
  AngularSpectrum spec;
  spec.n = basis.n();
  spec.L = basis.band_limit();
  spec.coeffs = basis.analysis() * samples.matrix();
  return spec;
}

VecXcd inverse_transform(const AngularSpectrum& spec,
                         const AngularBasis& basis) {
  if (spec.n != basis.n() || spec.L != basis.band_limit() ||
      spec.coeffs.size() != basis.modes())
    throw ShapeError("inverse_transform: spectrum does not match basis");
  return basis.synthesis() * spec.coeffs.matrix();
}

AngularSpectrum antipodal(const AngularSpectrum& spec) {
  AngularSpectrum out = spec;
  for (Index idx = 0; idx < spec.coeffs.size(); ++idx) {
    const Index l = mode_degree(spec.n, spec.L, idx);
    if (l % 2) out.coeffs[idx] = -out.coeffs[idx];
  }
  return out;
}

Real sobolev_norm(const AngularSpectrum& spec, Real k) {
  if (k < 0) throw ConfigError("sobolev_norm: order must be nonnegative");
  Real acc = 0;
  for (Index idx = 0; idx < spec.coeffs.size(); ++idx) {
    const Index l = mode_degree(spec.n, spec.L, idx);
    const Real mul = std::pow(1.0 + laplace_eigenvalue(spec.n, l), k);
    acc += mul * std::norm(spec.coeffs[idx]);
  }
  return std::sqrt(acc);
}

}  // namespace nlhelm
