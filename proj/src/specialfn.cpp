#include "nlhelm/specialfn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlhelm {

namespace {

constexpr Real kEps = std::numeric_limits<Real>::epsilon();
constexpr Real kTiny = std::numeric_limits<Real>::min() / kEps;
constexpr int kMaxIter = 20000;
// Crossover between Temme series and Steed CF2.
constexpr Real kSeriesCross = 2.0;

[[noreturn]] void overflow_error(Real nu, Real x, const char* where) {
  throw std::range_error("cylinder function overflow (" + std::string(where) +
                         ") at nu=" + std::to_string(nu) +
                         ", x=" + std::to_string(x));
}

// gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)]/(2 mu), gam2 = [... + ...]/2,
// for |mu| <= 1/2. Near mu = 0 the difference quotient is replaced by the
// series of 1/Gamma(1+mu), whose odd coefficients it isolates.
void temme_gammas(Real mu, Real& gam1, Real& gam2, Real& gampl, Real& gammi) {
  gampl = 1.0 / std::tgamma(1.0 + mu);
  gammi = 1.0 / std::tgamma(1.0 - mu);
  gam2 = 0.5 * (gammi + gampl);
  if (std::abs(mu) < 1e-4) {
    constexpr Real c1 = 0.5772156649015328606;   // Euler gamma
    constexpr Real c3 = -0.0420026350340952355;  // x^3 coeff of 1/Gamma(1+x)
    gam1 = -(c1 + c3 * mu * mu);
  } else {
    gam1 = (gammi - gampl) / (2.0 * mu);
  }
}

struct JYResult {
  Real j, jp, y, yp;
};

// Steed's method after Barnett / Temme; gives J_nu, Y_nu and derivatives
// for real nu >= 0, x > 0.
JYResult bessel_jy_general(Real nu, Real x) {
  const int nl = (x < kSeriesCross)
                     ? static_cast<int>(nu + 0.5)
                     : std::max(0, static_cast<int>(nu - x + 1.5));
  const Real mu = nu - nl;
  const Real mu2 = mu * mu;
  const Real xi = 1.0 / x;
  const Real xi2 = 2.0 * xi;
  const Real wron = xi2 / kPi;

  // CF1 for J'_nu / J_nu, tracking the sign of J_nu.
  int isign = 1;
  Real h = nu * xi;
  if (h < kTiny) h = kTiny;
  Real b = xi2 * nu;
  Real d = 0.0;
  Real c = h;
  int it = 0;
  for (; it < kMaxIter; ++it) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const Real del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  if (it >= kMaxIter)
    throw std::range_error("bessel CF1 failed to converge: nu=" +
                           std::to_string(nu) + ", x=" + std::to_string(x));

  // Downward recurrence from nu to mu.
  Real rjl = isign * kTiny;
  Real rjpl = h * rjl;
  const Real rjl1 = rjl;
  const Real rjp1 = rjpl;
  Real fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const Real rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const Real f = rjpl / rjl;

  Real rjmu, rymu, ry1, rymup;
  if (x < kSeriesCross) {
    // Temme's series for Y_mu, Y_{mu+1}.
    const Real x2 = 0.5 * x;
    const Real pimu = kPi * mu;
    const Real fact3 = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    Real dd = -std::log(x2);
    Real e = mu * dd;
    const Real fact2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    Real gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);
    Real ff = 2.0 / kPi * fact3 * (gam1 * std::cosh(e) + gam2 * fact2 * dd);
    e = std::exp(e);
    Real p = e / (gampl * kPi);
    Real q = 1.0 / (e * kPi * gammi);
    const Real pimu2 = 0.5 * pimu;
    const Real fact4 =
        (std::abs(pimu2) < kEps) ? 1.0 : std::sin(pimu2) / pimu2;
    const Real rr = kPi * pimu2 * fact4 * fact4;
    Real cc = 1.0;
    const Real d2 = -x2 * x2;
    Real sum = ff + rr * q;
    Real sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * i - mu2);
      cc *= d2 / i;
      p /= (i - mu);
      q /= (i + mu);
      const Real del = cc * (ff + rr * q);
      sum += del;
      const Real del1 = cc * p - i * del;
      sum1 += del1;
      if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
    }
    if (i > kMaxIter)
      throw std::range_error("bessel Temme series failed: nu=" +
                             std::to_string(nu));
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = mu * xi * rymu - ry1;
    rjmu = wron / (rymup - f * rymu);
  } else {
    // CF2 for (p + iq) = (J' - iY')/(J - iY) at order mu.
    Real a = 0.25 - mu2;
    Real p = -0.5 * xi;
    Real q = 1.0;
    Real br = 2.0 * x;
    Real bi = 2.0;
    Real fact5 = a * xi / (p * p + q * q);
    Real cr = br + q * fact5;
    Real ci = bi + p * fact5;
    Real den = br * br + bi * bi;
    Real dr = br / den;
    Real di = -bi / den;
    Real dlr = cr * dr - ci * di;
    Real dli = cr * di + ci * dr;
    Real temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    int i = 1;
    for (; i < kMaxIter; ++i) {
      a += 2 * i;
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
      fact5 = a / (cr * cr + ci * ci);
      cr = br + cr * fact5;
      ci = bi - ci * fact5;
      if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
    }
    if (i >= kMaxIter)
      throw std::range_error("bessel CF2 failed to converge: nu=" +
                             std::to_string(nu) + ", x=" + std::to_string(x));
    const Real gam = (p - f) / q;
    rjmu = std::sqrt(wron / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = mu * xi * rymu - rymup;
  }

  const Real scale = rjmu / rjl;
  JYResult out;
  out.j = rjl1 * scale;
  out.jp = rjp1 * scale;
  // Upward recurrence for Y back to order nu.
  for (int i = 1; i <= nl; ++i) {
    const Real rytemp = (mu + i) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
    if (std::abs(ry1) > 1e300) overflow_error(nu, x, "Y recurrence");
  }
  out.y = rymu;
  out.yp = nu * xi * rymu - ry1;
  return out;
}

// Spherical Bessel j_l via downward (Miller) recurrence, y_l upward;
// normalization through the Wronskian j y' - j' y = 1/x^2, which has no
// zeros (unlike j_0 itself).
struct SphResult {
  Real j, jp, y, yp;
};

void spherical_jy(int l, Real x, SphResult& out) {
  const Real sx = std::sin(x);
  const Real cx = std::cos(x);
  Real y0 = -cx / x;
  Real y1 = -cx / (x * x) - sx / x;
  if (l == 0) {
    out.j = sx / x;
    out.jp = (cx - sx / x) / x;  // j0' = -j1
    out.y = y0;
    out.yp = (sx + cx / x) / x;  // y0' = -y1 = sin/x + cos/x^2
    return;
  }
  // y upward.
  Real ym = y0, yc = y1;
  for (int n = 1; n < l; ++n) {
    const Real yn = (2.0 * n + 1.0) / x * yc - ym;
    ym = yc;
    yc = yn;
    if (std::abs(yc) > 1e300) overflow_error(l + 0.5, x, "spherical y");
  }
  // j downward from a start order above both l and x.
  const int m0 =
      l + 20 + static_cast<int>(std::ceil(std::sqrt(40.0 * (l + 1))));
  const int m1 =
      static_cast<int>(x) + 20 + static_cast<int>(4 * std::cbrt(x));
  const int mstart = std::max(m0, m1);
  Real qp = 0.0;
  Real qc = kTiny;
  Real q_l = 0.0, q_lm1 = 0.0;
  for (int n = mstart; n >= 1; --n) {
    const Real qm = (2.0 * n + 1.0) / x * qc - qp;
    qp = qc;
    qc = qm;
    if (std::abs(qc) > 1e250) {
      qc *= 1e-250;
      qp *= 1e-250;
      q_l *= 1e-250;
      q_lm1 *= 1e-250;
    }
    if (n - 1 == l) q_l = qm;
    if (n - 1 == l - 1) q_lm1 = qm;
  }
  // qc = unnormalized j_0, qp = unnormalized j_1; j0' = -j1, and
  // j y' - j' y = 1/x^2 fixes the scale without hitting zeros of j_0.
  const Real scale = 1.0 / (x * x * (qc * (sx + cx / x) / x + qp * y0));
  out.j = q_l * scale;
  out.jp = q_lm1 * scale - (l + 1.0) / x * out.j;
  out.y = yc;
  out.yp = ym - (l + 1.0) / x * yc;
  if (!std::isfinite(out.j) || !std::isfinite(out.y))
    overflow_error(l + 0.5, x, "spherical pair");
}

bool is_half_integer(Real nu) {
  const Real two = 2.0 * nu;
  return std::abs(two - std::round(two)) == 0.0 &&
         std::lround(two) % 2 != 0;
}

}  // namespace

CylinderEval cylinder_pair(Real order, Real argument) {
  if (!(argument > 0.0))
    throw std::domain_error("cylinder_pair: argument must be positive");
  if (!(order >= 0.0))
    throw std::domain_error("cylinder_pair: order must be nonnegative");

  CylinderEval ev;
  ev.order = order;
  ev.argument = argument;

  Real j, jp, y, yp;
  if (is_half_integer(order)) {
    const int l = static_cast<int>(std::lround(order - 0.5));
    SphResult sr;
    spherical_jy(l, argument, sr);
    const Real conv = std::sqrt(2.0 * argument / kPi);
    const Real convp = 0.5 * std::sqrt(2.0 / (kPi * argument));
    j = conv * sr.j;
    jp = convp * sr.j + conv * sr.jp;
    y = conv * sr.y;
    yp = convp * sr.y + conv * sr.yp;
  } else {
    const JYResult r = bessel_jy_general(order, argument);
    j = r.j;
    jp = r.jp;
    y = r.y;
    yp = r.yp;
  }

  if (!std::isfinite(j) || !std::isfinite(jp) || !std::isfinite(y) ||
      !std::isfinite(yp))
    overflow_error(order, argument, "pair");

  ev.j = j;
  ev.j_prime = jp;
  ev.h1 = Complex(j, y);
  ev.h1_prime = Complex(jp, yp);
  return ev;
}

CylinderLadder cylinder_ladder(Real nu0, Index count, Real argument) {
  if (!(argument > 0.0))
    throw std::domain_error("cylinder_ladder: argument must be positive");
  if (!(nu0 >= 0.0) || count < 1)
    throw std::domain_error("cylinder_ladder: invalid order range");

  const Real x = argument;
  const Real xi = 1.0 / x;
  CylinderLadder lad;
  lad.nu0 = nu0;
  lad.argument = x;
  // One extra entry so derivatives come from J' = (nu/x) J - J_{nu+1}.
  const Index m = count + 1;
  lad.j.resize(m);
  lad.y.resize(m);
  lad.j_prime.resize(count);
  lad.y_prime.resize(count);

  // Y upward from two seed evaluations.
  const CylinderEval e0 = cylinder_pair(nu0, x);
  lad.y[0] = e0.h1.imag();
  if (m > 1) {
    const CylinderEval e1 = cylinder_pair(nu0 + 1.0, x);
    lad.y[1] = e1.h1.imag();
    for (Index k = 2; k < m; ++k) {
      const Real nu = nu0 + (k - 1);
      lad.y[k] = 2.0 * nu * xi * lad.y[k - 1] - lad.y[k - 2];
      if (std::abs(lad.y[k]) > 1e300)
        overflow_error(nu0 + k, x, "ladder Y");
    }
  }

  // J downward; the start order sits above both the ladder top and x.
  const Real nu_top = nu0 + (m - 1);
  const int extra =
      20 + static_cast<int>(std::ceil(std::sqrt(40.0 * (nu_top + 1.0))));
  const Index mstart =
      m - 1 + std::max<Index>(extra, static_cast<Index>(x - nu_top) + 20 +
                                         static_cast<Index>(4 * std::cbrt(x)));
  VecXd q(m);
  q.setZero();
  Real qp = 0.0;
  Real qc = kTiny;
  for (Index k = mstart; k >= 1; --k) {
    const Real nu = nu0 + k;
    const Real qm = 2.0 * nu * xi * qc - qp;
    qp = qc;
    qc = qm;
    if (std::abs(qc) > 1e250) {
      qc *= 1e-250;
      qp *= 1e-250;
      q *= 1e-250;
    }
    if (k - 1 < m) q[k - 1] = qm;
  }
  // Cross Wronskian J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi x).
  const Real denom = q[1] * lad.y[0] - q[0] * lad.y[1];
  if (denom == 0.0 || !std::isfinite(denom))
    throw std::range_error("cylinder_ladder: Wronskian normalization failed");
  const Real scale = 2.0 / (kPi * x) / denom;
  lad.j = q * scale;

  for (Index k = 0; k < count; ++k) {
    const Real nu = nu0 + k;
    lad.j_prime[k] = nu * xi * lad.j[k] - lad.j[k + 1];
    lad.y_prime[k] = nu * xi * lad.y[k] - lad.y[k + 1];
  }
  lad.j.conservativeResize(count);
  lad.y.conservativeResize(count);

  if (!lad.j.isFinite().all() || !lad.y.isFinite().all())
    overflow_error(nu_top, x, "ladder");
  return lad;
}

}  // namespace nlhelm
