#ifndef NLHELM_PROFILES_HPP_
#define NLHELM_PROFILES_HPP_

#include <string>

#include "nlhelm/types.hpp"

namespace nlhelm {

/// Radial coefficient/potential profiles, smooth in 1/r on [r_min, inf).
/// kConstant:    c
/// kPowBracket:  c <r>^-q,  <r> = sqrt(1+r^2)
/// kInvQuad:     c / (w^2 + r^2)
struct RadialProfile {
  enum class Kind { kConstant, kPowBracket, kInvQuad };

  Kind kind = Kind::kConstant;
  Real c = 0.0;
  Real q = 0.0;  // kPowBracket exponent
  Real w = 1.0;  // kInvQuad width

  static RadialProfile constant(Real value) {
    return {Kind::kConstant, value, 0.0, 1.0};
  }
  static RadialProfile pow_bracket(Real value, Real exponent) {
    return {Kind::kPowBracket, value, exponent, 1.0};
  }
  static RadialProfile inv_quadratic(Real value, Real width = 1.0) {
    return {Kind::kInvQuad, value, 0.0, width};
  }

  bool is_zero() const { return c == 0.0; }

  Real operator()(Real r) const {
    switch (kind) {
      case Kind::kConstant:
        return c;
      case Kind::kPowBracket:
        return c * std::pow(1.0 + r * r, -0.5 * q);
      case Kind::kInvQuad:
        return c / (w * w + r * r);
    }
    return 0.0;
  }

  VecXd sample(const VecXd& r) const {
    VecXd out(r.size());
    for (Index i = 0; i < r.size(); ++i) out[i] = (*this)(r[i]);
    return out;
  }

  /// True when r^2 V(r) stays bounded (admissible as a potential).
  bool decays_quadratically() const {
    if (is_zero()) return true;
    switch (kind) {
      case Kind::kConstant:
        return false;
      case Kind::kPowBracket:
        return q >= 2.0;
      case Kind::kInvQuad:
        return true;
    }
    return false;
  }

  /// Integral of the profile over [r, infinity); used for the first-order
  /// outgoing phase correction. Only decaying kinds support it.
  Real tail_integral(Real r) const;
};

RadialProfile profile_from_string(const std::string& kind, Real c, Real q,
                                  Real w);

}  // namespace nlhelm

#endif  // NLHELM_PROFILES_HPP_
