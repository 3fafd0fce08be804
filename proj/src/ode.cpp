#include "nlhelm/ode.hpp"

#include <cmath>

namespace nlhelm {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr Real a21 = 1.0 / 5;
constexpr Real a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
               a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
               a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
               b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th-order weights
constexpr Real e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
               e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

void integrate_rk45(const OdeRhs& f, Eigen::VectorXd& y, Real t0, Real t1,
                    const OdeOptions& opt, const OdeObserver* observer) {
  if (t0 == t1) return;
  const Real dir = (t1 > t0) ? 1.0 : -1.0;
  const Real span = std::abs(t1 - t0);
  Real h = opt.h_init > 0 ? opt.h_init : std::min(opt.h_max, span / 16.0);
  h = std::min(h, span);

  const Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Eigen::VectorXd ytmp(n), y5(n), err(n);

  Real t = t0;
  if (observer) (*observer)(t, y);
  f(t, y, k1);

  for (Index step = 0; step < opt.max_steps; ++step) {
    const Real remaining = std::abs(t1 - t);
    if (remaining <= 1e-14 * (std::abs(t1) + 1.0)) return;
    h = std::min({h, remaining, opt.h_max});
    const Real hd = dir * h;

    ytmp = y + hd * a21 * k1;
    f(t + c2 * hd, ytmp, k2);
    ytmp = y + hd * (a31 * k1 + a32 * k2);
    f(t + c3 * hd, ytmp, k3);
    ytmp = y + hd * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * hd, ytmp, k4);
    ytmp = y + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * hd, ytmp, k5);
    ytmp = y + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + hd, ytmp, k6);
    y5 = y + hd * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + hd, y5, k7);

    err = hd * ((b1 - e1) * k1 + (b3 - e3) * k3 + (b4 - e4) * k4 +
                (b5 - e5) * k5 + (b6 - e6) * k6 - e7 * k7);
    Real ratio = 0.0;
    for (Index i = 0; i < n; ++i) {
      const Real sc =
          opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      ratio = std::max(ratio, std::abs(err[i]) / sc);
    }

    if (ratio <= 1.0) {
      t += hd;
      y.swap(y5);
      k1.swap(k7);  // FSAL
      if (observer) (*observer)(t, y);
      const Real grow = 0.9 * std::pow(std::max(ratio, 1e-10), -0.2);
      h *= std::min(5.0, grow);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(ratio, -0.25));
      if (h < 1e-14 * span)
        throw AccuracyError("integrate_rk45: step size underflow");
    }
  }
  throw AccuracyError("integrate_rk45: step budget exhausted");
}

}  // namespace nlhelm
