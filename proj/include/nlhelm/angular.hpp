#ifndef NLHELM_ANGULAR_HPP_
#define NLHELM_ANGULAR_HPP_

#include <memory>

#include "nlhelm/types.hpp"

namespace nlhelm {

/// Harmonic coefficients of a function on S^{n-1}.
/// n=2: basis e^{il theta}/sqrt(2 pi), flat index l+L for -L <= l <= L.
/// n=3: orthonormal complex Y_lm with Condon-Shortley phase,
///      flat index l^2 + l + m for 0 <= l <= L, |m| <= l.
struct AngularSpectrum {
  int n = 3;
  Index L = 0;
  VecXcd coeffs;
};

Index mode_count(int n, Index L);
Index mode_index(int n, Index L, Index l, Index m = 0);
/// Degree l of a flat mode index.
Index mode_degree(int n, Index L, Index idx);
/// Eigenvalue l(l+n-2) of the sphere Laplacian at degree l.
Real laplace_eigenvalue(int n, Index degree);

/// Quadrature nodes on S^{n-1} matched to band limit L.
/// n=2: 2L+2 uniform nodes; n=3: Gauss-Legendre (L+1) in cos(theta)
/// times 2L+2 uniform in phi, flattened theta-major. Exact for products
/// of harmonics up to degree 2L.
struct SphereGrid {
  int n = 3;
  Index L = 0;
  VecXd theta;
  VecXd phi;      // empty for n=2
  VecXd weights;  // sums to 2 pi (n=2) or 4 pi (n=3)
  Index node_count() const { return weights.size(); }
};

/// Immutable transform plan: synthesis/analysis matrices for (n, L),
/// plus tangential-derivative synthesis used for frame derivatives.
class AngularBasis {
 public:
  AngularBasis(int n, Index L);

  int n() const { return n_; }
  Index band_limit() const { return L_; }
  Index modes() const { return synthesis_.cols(); }
  const SphereGrid& grid() const { return grid_; }

  /// values (nodes) = synthesis * coeffs
  const MatXcd& synthesis() const { return synthesis_; }
  /// coeffs = analysis * values
  const MatXcd& analysis() const { return analysis_; }
  /// d/dtheta of the basis at nodes (n=3; n=2 uses the il multiplier).
  const MatXcd& synthesis_dtheta() const { return synthesis_dtheta_; }
  /// (1/sin theta) d/dphi of the basis at nodes (n=3).
  const MatXcd& synthesis_dphi_over_sin() const {
    return synthesis_dphi_over_sin_;
  }

  /// Degree and Laplace eigenvalue per flat mode index.
  const VecXd& degrees() const { return degrees_; }
  const VecXd& eigenvalues() const { return eigenvalues_; }
  /// Signed Fourier index per mode (n=2 only).
  const VecXd& fourier_index() const { return fourier_index_; }

 private:
  int n_;
  Index L_;
  SphereGrid grid_;
  MatXcd synthesis_, analysis_;
  MatXcd synthesis_dtheta_, synthesis_dphi_over_sin_;
  VecXd degrees_, eigenvalues_, fourier_index_;
};

using AngularBasisPtr = std::shared_ptr<const AngularBasis>;
AngularBasisPtr make_angular_basis(int n, Index L);

AngularSpectrum forward_transform(const VecXcd& samples,
                                  const AngularBasis& basis);
VecXcd inverse_transform(const AngularSpectrum& spec,
                         const AngularBasis& basis);

/// Pullback under omega -> -omega: degree-l coefficients pick up (-1)^l.
AngularSpectrum antipodal(const AngularSpectrum& spec);

/// Sqrt of sum over modes of (1 + l(l+n-2))^k |c|^2; k=0 is the l^2 norm.
Real sobolev_norm(const AngularSpectrum& spec, Real k);

/// Gauss-Legendre rule on [-1, 1] (Newton on P_N).
void gauss_legendre(Index count, VecXd& nodes, VecXd& weights);

/// Orthonormal associated Legendre values at cos(theta)=c, sin(theta)=s:
/// fills P(l, m) for 0 <= m <= l <= L, normalized so the integral of
/// P(l,m)^2 over [-1,1] is 1, Condon-Shortley phase included.
void normalized_legendre(Index L, Real c, Real s, MatXd& P);

}  // namespace nlhelm

#endif  // NLHELM_ANGULAR_HPP_
