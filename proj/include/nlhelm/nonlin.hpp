#ifndef NLHELM_NONLIN_HPP_
#define NLHELM_NONLIN_HPP_

#include <string>
#include <vector>

#include "nlhelm/field.hpp"

namespace nlhelm {

/// One factor of a monomial: a frame-derivative word (length <= 2) applied
/// to u, optionally conjugated afterwards.
struct MonomialFactor {
  bool conjugated = false;
  std::vector<int> word;  // 0 = d_r, 1.. = angular frame components
};

/// coefficient * profile(r) * prod_k factor_k
struct Monomial {
  Complex coefficient{1.0, 0.0};
  RadialProfile profile = RadialProfile::constant(1.0);
  std::vector<MonomialFactor> factors;
  Index degree() const { return static_cast<Index>(factors.size()); }
};

/// N[u] as a sum of monomials in u, conj(u) and frame derivatives.
struct NonlinearitySpec {
  std::vector<Monomial> monomials;
  int declared_p = 2;
};

/// alpha |u|^{p-1} u for odd p (gauge-invariant power law).
NonlinearitySpec power_law(int p, Complex alpha);

struct AdmissibilityReport {
  int n = 0;
  int p = 0;
  bool condition_ok = false;  // (p-1)(n-1)/2 > 2
  Real delta_max = 0;         // 1/(4p)
  Real delta = 0;
  Real weight_l = 0;          // -1/2 - delta
  std::string message;
};

/// Checks monomial well-formedness and the admissibility condition.
/// delta <= 0 selects the default delta = delta_max.
AdmissibilityReport validate(const NonlinearitySpec& spec, int n,
                             Real delta = -1.0);

/// Smallest admissible p for dimension n (from the condition above).
int minimal_admissible_p(int n);

/// Pointwise evaluation of N[u] on the grid of u; the result field carries
/// point values (mode projection happens on access).
Field evaluate(const NonlinearitySpec& spec, const Field& u);

}  // namespace nlhelm

#endif  // NLHELM_NONLIN_HPP_
