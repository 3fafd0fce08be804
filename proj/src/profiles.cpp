#include "nlhelm/profiles.hpp"

#include <cmath>

namespace nlhelm {

Real RadialProfile::tail_integral(Real r) const {
  switch (kind) {
    case Kind::kConstant:
      if (c == 0.0) return 0.0;
      throw ConfigError("tail_integral: constant profile does not decay");
    case Kind::kInvQuad:
      return (c / w) * (0.5 * kPi - std::atan(r / w));
    case Kind::kPowBracket: {
      if (q <= 1.0)
        throw ConfigError("tail_integral: profile decays too slowly");
      // integral of <s>^-q over [r, inf): geometric-tail refinement of the
      // power bound; 64-panel Gauss-ish composite plus the exact power tail
      // beyond 32 r (relative error far below the uses' tolerances).
      const Real far = std::max(32.0 * r, 64.0);
      const Index panels = 256;
      const Real h = (far - r) / panels;
      Real acc = 0.0;
      for (Index i = 0; i < panels; ++i) {
        const Real a = r + h * i;
        // Simpson per panel
        const Real m = a + 0.5 * h;
        auto f = [&](Real s) { return std::pow(1.0 + s * s, -0.5 * q); };
        acc += h / 6.0 * (f(a) + 4.0 * f(m) + f(a + h));
      }
      // beyond 'far': <s>^-q ~ s^-q
      acc += std::pow(far, 1.0 - q) / (q - 1.0);
      return c * acc;
    }
  }
  return 0.0;
}

RadialProfile profile_from_string(const std::string& kind, Real c, Real q,
                                  Real w) {
  if (kind == "constant") return RadialProfile::constant(c);
  if (kind == "pow_bracket") return RadialProfile::pow_bracket(c, q);
  if (kind == "inv_quadratic") return RadialProfile::inv_quadratic(c, w);
  if (kind == "none" || kind.empty()) return RadialProfile::constant(0.0);
  throw ConfigError("unknown radial profile kind '" + kind + "'");
}

}  // namespace nlhelm
