#ifndef NLHELM_RADIAL_HPP_
#define NLHELM_RADIAL_HPP_

#include <memory>
#include <string>

#include "nlhelm/types.hpp"

namespace nlhelm {

enum class Grading { kUniform, kGeometric };

Grading grading_from_string(const std::string& s);
std::string to_string(Grading g);

/// Radial grid on [r_min, r_max], r = 0 excluded. Nodes are the image of a
/// uniform index coordinate under a smooth map, so 4th-order stencils and
/// Gregory quadrature apply in index space with the chain rule.
struct RadialGrid {
  Real r_min = 0, r_max = 0;
  Grading grading = Grading::kUniform;
  VecXd nodes;
  VecXd jac1;        // dr/ds at nodes (s = index coordinate)
  VecXd jac2;        // d2r/ds2 at nodes
  VecXd quad_dr;     // weights for integral of f dr  (4th-order Gregory)

  Index count() const { return nodes.size(); }
  /// Weights for the measure r^{n-1} dr.
  VecXd measure_weights(int n) const;
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;

/// count >= 16 nodes between 0 < r_min < r_max. Geometric grading clusters
/// nodes near r_min (spacing grows outward).
RadialGridPtr make_grid(Real r_min, Real r_max, Index count, Grading grading);

/// First and second derivative in r of per-node samples, 4th order,
/// one-sided closures at the two nodes nearest each end.
void radial_derivative(const RadialGrid& g, const VecXcd& u, VecXcd& du);
void radial_derivative2(const RadialGrid& g, const VecXcd& u, VecXcd& du,
                        VecXcd& d2u);

/// Cumulative integral of f dr from r_min: out[i] = integral up to node i.
/// Locally cubic (4th order); out[0] = 0.
void cumulative_integral(const RadialGrid& g, const VecXcd& f, VecXcd& out);

/// Relative disagreement between the 4th- and 2nd-order first-derivative
/// stencils on u; O((lambda h)^2) for resolved oscillations, O(1) when the
/// grid is too coarse for the data.
Real fd_resolution_estimate(const RadialGrid& g, const VecXcd& u);

/// Smooth cutoff: 0 for r <= R0, 1 for r >= 2 R0, quintic smoothstep in
/// between (C^2, chi(1.5 R0) = 1/2). Throws ConfigError if 2 R0 > r_max.
VecXd cutoff_chi(const RadialGrid& g, Real R0);
Real cutoff_chi_value(Real r, Real R0);
Real cutoff_chi_d1(Real r, Real R0);
Real cutoff_chi_d2(Real r, Real R0);

}  // namespace nlhelm

#endif  // NLHELM_RADIAL_HPP_
