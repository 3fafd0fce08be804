#include "nlhelm/radial.hpp"

#include <cmath>

namespace nlhelm {

Grading grading_from_string(const std::string& s) {
  if (s == "uniform") return Grading::kUniform;
  if (s == "geometric") return Grading::kGeometric;
  throw ConfigError("unknown grading '" + s + "' (uniform|geometric)");
}

std::string to_string(Grading g) {
  return g == Grading::kUniform ? "uniform" : "geometric";
}

VecXd RadialGrid::measure_weights(int n) const {
  return quad_dr * nodes.pow(n - 1);
}

RadialGridPtr make_grid(Real r_min, Real r_max, Index count, Grading grading) {
  if (!(0 < r_min && r_min < r_max))
    throw ConfigError("make_grid: need 0 < r_min < r_max");
  if (count < 16) throw ConfigError("make_grid: need at least 16 nodes");

  auto g = std::make_shared<RadialGrid>();
  g->r_min = r_min;
  g->r_max = r_max;
  g->grading = grading;
  g->nodes.resize(count);
  g->jac1.resize(count);
  g->jac2.resize(count);

  if (grading == Grading::kUniform) {
    const Real h = (r_max - r_min) / (count - 1);
    for (Index i = 0; i < count; ++i) g->nodes[i] = r_min + h * i;
    g->nodes[count - 1] = r_max;
    g->jac1.setConstant(h);
    g->jac2.setZero();
  } else {
    // r(s) = r_min exp(a s / (count-1)), a = log(r_max/r_min)
    const Real a = std::log(r_max / r_min) / (count - 1);
    for (Index i = 0; i < count; ++i) {
      const Real r = r_min * std::exp(a * i);
      g->nodes[i] = r;
      g->jac1[i] = a * r;
      g->jac2[i] = a * a * r;
    }
    g->nodes[count - 1] = r_max;
  }

  // Gregory end-corrected trapezoid in index space; O(h^4).
  VecXd w = VecXd::Ones(count);
  w[0] = w[count - 1] = 3.0 / 8.0;
  w[1] = w[count - 2] = 7.0 / 6.0;
  w[2] = w[count - 3] = 23.0 / 24.0;
  g->quad_dr = w * g->jac1;
  return g;
}

namespace {

// 4th-order stencils in index space (unit spacing).
void index_derivative(const VecXcd& u, VecXcd& du) {
  const Index n = u.size();
  du.resize(n);
  du[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] -
           3.0 * u[4]) /
          12.0;
  du[1] =
      (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) / 12.0;
  for (Index i = 2; i < n - 2; ++i)
    du[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / 12.0;
  du[n - 2] = (3.0 * u[n - 1] + 10.0 * u[n - 2] - 18.0 * u[n - 3] +
               6.0 * u[n - 4] - u[n - 5]) /
              12.0;
  du[n - 1] = (25.0 * u[n - 1] - 48.0 * u[n - 2] + 36.0 * u[n - 3] -
               16.0 * u[n - 4] + 3.0 * u[n - 5]) /
              12.0;
}

void index_derivative2(const VecXcd& u, VecXcd& d2u) {
  const Index n = u.size();
  d2u.resize(n);
  d2u[0] = (45.0 * u[0] - 154.0 * u[1] + 214.0 * u[2] - 156.0 * u[3] +
            61.0 * u[4] - 10.0 * u[5]) /
           12.0;
  d2u[1] = (10.0 * u[0] - 15.0 * u[1] - 4.0 * u[2] + 14.0 * u[3] -
            6.0 * u[4] + u[5]) /
           12.0;
  for (Index i = 2; i < n - 2; ++i)
    d2u[i] = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] -
              u[i + 2]) /
             12.0;
  d2u[n - 2] = (10.0 * u[n - 1] - 15.0 * u[n - 2] - 4.0 * u[n - 3] +
                14.0 * u[n - 4] - 6.0 * u[n - 5] + u[n - 6]) /
               12.0;
  d2u[n - 1] = (45.0 * u[n - 1] - 154.0 * u[n - 2] + 214.0 * u[n - 3] -
                156.0 * u[n - 4] + 61.0 * u[n - 5] - 10.0 * u[n - 6]) /
               12.0;
}

}  // namespace

void radial_derivative(const RadialGrid& g, const VecXcd& u, VecXcd& du) {
  VecXcd us;
  index_derivative(u, us);
  du = us / g.jac1;
}

void radial_derivative2(const RadialGrid& g, const VecXcd& u, VecXcd& du,
                        VecXcd& d2u) {
  VecXcd us, uss;
  index_derivative(u, us);
  index_derivative2(u, uss);
  du = us / g.jac1;
  d2u = (uss - g.jac2 * du) / (g.jac1 * g.jac1);
}

void cumulative_integral(const RadialGrid& g, const VecXcd& f, VecXcd& out) {
  const Index n = f.size();
  if (n != g.count()) throw ShapeError("cumulative_integral: size mismatch");
  const VecXcd fs = f * g.jac1;  // integrand in index space
  out.resize(n);
  out[0] = 0.0;
  // interval [i, i+1] from the cubic through i-1..i+2
  out[1] = out[0] +
           (9.0 * fs[0] + 19.0 * fs[1] - 5.0 * fs[2] + fs[3]) / 24.0;
  for (Index i = 1; i < n - 2; ++i)
    out[i + 1] = out[i] + (13.0 * (fs[i] + fs[i + 1]) -
                           (fs[i - 1] + fs[i + 2])) /
                              24.0;
  out[n - 1] = out[n - 2] + (9.0 * fs[n - 1] + 19.0 * fs[n - 2] -
                             5.0 * fs[n - 3] + fs[n - 4]) /
                                24.0;
}

// Degree-7 smoothstep: C^3 at both seams, symmetric about the midpoint.
// One order smoother than the minimum C^2 requirement; the extra order
// keeps P(chi ...) kink-free enough for 4th-order quadrature across the
// transition (a C^2 cutoff caps the resolvent cross-check near 1e-3).
Real fd_resolution_estimate(const RadialGrid& g, const VecXcd& u) {
  const Index n = u.size();
  if (n != g.count()) throw ShapeError("fd_resolution_estimate: size");
  VecXcd d4;
  index_derivative(u, d4);
  VecXcd d2(n);
  d2[0] = u[1] - u[0];
  for (Index i = 1; i < n - 1; ++i) d2[i] = 0.5 * (u[i + 1] - u[i - 1]);
  d2[n - 1] = u[n - 1] - u[n - 2];
  const Real scale = d4.matrix().norm();
  if (scale == 0.0) return 0.0;
  return (d4 - d2).matrix().norm() / scale;
}

Real cutoff_chi_value(Real r, Real R0) {
  if (r <= R0) return 0.0;
  if (r >= 2.0 * R0) return 1.0;
  const Real t = (r - R0) / R0;
  return (((-20.0 * t + 70.0) * t - 84.0) * t + 35.0) * t * t * t * t;
}

Real cutoff_chi_d1(Real r, Real R0) {
  if (r <= R0 || r >= 2.0 * R0) return 0.0;
  const Real t = (r - R0) / R0;
  return ((((-140.0 * t + 420.0) * t - 420.0) * t + 140.0) * t * t * t) / R0;
}

Real cutoff_chi_d2(Real r, Real R0) {
  if (r <= R0 || r >= 2.0 * R0) return 0.0;
  const Real t = (r - R0) / R0;
  return ((((-840.0 * t + 2100.0) * t - 1680.0) * t + 420.0) * t * t) /
         (R0 * R0);
}

VecXd cutoff_chi(const RadialGrid& g, Real R0) {
  if (R0 < g.r_min) throw ConfigError("cutoff_chi: R0 below r_min");
  if (2.0 * R0 > g.r_max)
    throw ConfigError("cutoff_chi: transition [R0, 2R0] exceeds r_max");
  VecXd chi(g.count());
  for (Index i = 0; i < g.count(); ++i)
    chi[i] = cutoff_chi_value(g.nodes[i], R0);
  return chi;
}

}  // namespace nlhelm
