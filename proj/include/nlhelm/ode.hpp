#ifndef NLHELM_ODE_HPP_
#define NLHELM_ODE_HPP_

#include <functional>

#include "nlhelm/types.hpp"

namespace nlhelm {

struct OdeOptions {
  Real rtol = 1e-10;
  Real atol = 1e-13;
  Real h_max = std::numeric_limits<Real>::infinity();
  Real h_init = 0.0;  // 0: pick from h_max or span
  Index max_steps = 2000000;
};

using OdeRhs =
    std::function<void(Real t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;
using OdeObserver = std::function<void(Real t, const Eigen::VectorXd& y)>;

/// Dormand-Prince 5(4) with PI step control. Integrates y from t0 to t1
/// (either direction); y holds the final state. The observer, when given,
/// fires at every accepted step including the initial point.
void integrate_rk45(const OdeRhs& f, Eigen::VectorXd& y, Real t0, Real t1,
                    const OdeOptions& opt = {},
                    const OdeObserver* observer = nullptr);

}  // namespace nlhelm

#endif  // NLHELM_ODE_HPP_
