#include "nlhelm/flow.hpp"

#include <cmath>

#include "nlhelm/ode.hpp"

namespace nlhelm {

namespace {

// stereographic round-metric conformal factor: h^{jk} = s(y)^2 delta^{jk},
// s = (1 + |y|^2)/2
Real conf(const Eigen::Vector2d& y) { return 0.5 * (1.0 + y.squaredNorm()); }

constexpr Real kChartSwitch = 1.5;
constexpr Real kEscapeX = 0.5;

void pack(const PhasePoint& q, Eigen::VectorXd& s) {
  if (q.n == 2) {
    s.resize(4);
    s << q.x, q.y[0], q.nu, q.mu[0];
  } else {
    s.resize(6);
    s << q.x, q.y[0], q.y[1], q.nu, q.mu[0], q.mu[1];
  }
}

void unpack(const Eigen::VectorXd& s, PhasePoint& q) {
  if (q.n == 2) {
    q.x = s[0];
    q.y[0] = s[1];
    q.nu = s[2];
    q.mu[0] = s[3];
  } else {
    q.x = s[0];
    q.y = {s[1], s[2]};
    q.nu = s[3];
    q.mu = {s[4], s[5]};
  }
}

}  // namespace

Real mu_norm(const PhasePoint& q) {
  if (q.n == 2) return std::abs(q.mu[0]);
  return conf(q.y) * q.mu.norm();
}

Real phase_energy(const PhasePoint& q) {
  const Real m = mu_norm(q);
  return q.nu * q.nu + m * m;
}

PhasePoint swap_chart(const PhasePoint& q) {
  if (q.n == 2) return q;
  PhasePoint out = q;
  const Real yy = q.y.squaredNorm();
  if (yy == 0.0)
    throw ConfigError("swap_chart: the antipodal chart is singular here");
  out.chart = 1 - q.chart;
  out.y = q.y / yy;
  // covector pullback under the inversion y -> y/|y|^2
  const Real zz = out.y.squaredNorm();
  Eigen::Matrix2d J;  // d(y_old)/d(y_new) evaluated at the new coords
  J = Eigen::Matrix2d::Identity() / zz -
      2.0 * out.y * out.y.transpose() / (zz * zz);
  out.mu = J.transpose() * q.mu;
  return out;
}

void hamilton_rhs(const PhasePoint& q, PhasePoint& dq) {
  dq = q;
  if (q.n == 2) {
    dq.x = -2.0 * q.nu * q.x;
    dq.y[0] = 2.0 * q.mu[0];
    dq.nu = 2.0 * q.mu[0] * q.mu[0];
    dq.mu[0] = -2.0 * q.nu * q.mu[0];
    return;
  }
  const Real cf = conf(q.y);
  const Real mu2 = cf * cf * q.mu.squaredNorm();
  dq.x = -2.0 * q.nu * q.x;
  dq.y = 2.0 * cf * cf * q.mu;
  dq.nu = 2.0 * mu2;
  // d(h^{jk})/dy_l mu_j mu_k = 2 cf y_l |mu|_e^2
  dq.mu = -2.0 * q.nu * q.mu - 2.0 * cf * q.mu.squaredNorm() * q.y;
}

Trajectory hamilton_flow(const PhasePoint& q0, Real t_end, Real lambda,
                         Real tol) {
  (void)lambda;
  Trajectory traj;
  PhasePoint q = q0;

  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;

  const int n = q.n;
  const OdeRhs rhs = [n](Real, const Eigen::VectorXd& s, Eigen::VectorXd& d) {
    PhasePoint p, dp;
    p.n = n;
    unpack(s, p);
    hamilton_rhs(p, dp);
    pack(dp, d);
  };

  const Real dir = t_end >= 0 ? 1.0 : -1.0;
  const Real chunk = 0.25;
  Real t = 0.0;
  traj.samples.push_back({t, q});
  while (std::abs(t) < std::abs(t_end)) {
    const Real t_next = dir * std::min(std::abs(t) + chunk, std::abs(t_end));
    Eigen::VectorXd s;
    pack(q, s);
    integrate_rk45(rhs, s, t, t_next, opt);
    t = t_next;
    unpack(s, q);
    if (q.n == 3 && q.y.norm() > kChartSwitch) q = swap_chart(q);
    traj.samples.push_back({t, q});
    if (q.x > kEscapeX) {
      traj.escaped_interior = true;
      break;
    }
  }
  return traj;
}

LimitClass classify_limit(const Trajectory& traj, Real lambda) {
  if (traj.escaped_interior) return LimitClass::kInterior;
  if (traj.samples.empty()) return LimitClass::kUndecided;
  const PhasePoint& q = traj.samples.back().q;
  const Real tol = 1e-6 * lambda;
  if (mu_norm(q) <= tol && q.x <= tol / lambda) {
    if (std::abs(q.nu - lambda) <= tol) return LimitClass::kRPlus;
    if (std::abs(q.nu + lambda) <= tol) return LimitClass::kRMinus;
  }
  return LimitClass::kUndecided;
}

Real WeightSpec::lplus(Real nu, Real) const {
  const Real t = std::clamp(nu / lambda, -1.0, 1.0);
  Real ramp;
  if (t <= -1.0 + margin)
    ramp = -1.0;
  else if (t >= 1.0 - margin)
    ramp = 1.0;
  else {
    const Real p = (t - (-1.0 + margin)) / (2.0 - 2.0 * margin);
    ramp = -1.0 + 2.0 * (p * p * p * (10.0 + p * (-15.0 + 6.0 * p)));
  }
  if (reversed) ramp = -ramp;
  return -0.5 - delta * ramp;
}

WeightReport check_weight(const WeightSpec& ws, const Trajectory& traj) {
  WeightReport rep;
  Real prev = std::numeric_limits<Real>::infinity();
  for (Index i = 0; i < static_cast<Index>(traj.samples.size()); ++i) {
    const PhasePoint& q = traj.samples[i].q;
    const Real v = ws.lplus(q.nu, mu_norm(q));
    if (i > 0 && v > prev + 1e-10) {
      rep.ok = false;
      rep.worst_increase = std::max(rep.worst_increase, v - prev);
      if (rep.violation_index < 0) rep.violation_index = i;
    }
    prev = v;
  }
  return rep;
}

Real radial_set_x_eigenvalue(int n, Real lambda, int sign) {
  PhasePoint q, dq0, dqh;
  q.n = n;
  q.nu = sign >= 0 ? lambda : -lambda;
  hamilton_rhs(q, dq0);
  const Real h = 1e-7;
  PhasePoint qh = q;
  qh.x = h;
  hamilton_rhs(qh, dqh);
  return (dqh.x - dq0.x) / h;
}

}  // namespace nlhelm
