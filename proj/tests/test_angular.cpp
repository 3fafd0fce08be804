#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlhelm/angular.hpp"
#include "oracles.hpp"

using namespace nlhelm;

TEST_CASE("constant on S^2 transforms to sqrt(4 pi) at (0,0)") {
  AngularBasis basis(3, 4);
  VecXcd ones = VecXcd::Ones(basis.grid().node_count());
  const AngularSpectrum spec = forward_transform(ones, basis);
  CHECK(std::abs(spec.coeffs[0] - std::sqrt(4.0 * kPi)) <= 1e-12);
  for (Index i = 1; i < spec.coeffs.size(); ++i)
    CHECK(std::abs(spec.coeffs[i]) <= 1e-12);
}

TEST_CASE("samples of Y_21 give a unit coefficient") {
  AngularBasis basis(3, 5);
  const Index idx = mode_index(3, 5, 2, 1);
  VecXcd samples = basis.synthesis().col(idx).array();
  const AngularSpectrum spec = forward_transform(samples, basis);
  for (Index i = 0; i < spec.coeffs.size(); ++i) {
    if (i == idx)
      CHECK(std::abs(spec.coeffs[i] - 1.0) <= 1e-12);
    else
      CHECK(std::abs(spec.coeffs[i]) <= 1e-12);
  }
}

TEST_CASE("n=2: cos(3 theta) hits l = +-3 with weight sqrt(2 pi)/2") {
  AngularBasis basis(2, 6);
  const SphereGrid& grid = basis.grid();
  VecXcd samples(grid.node_count());
  for (Index j = 0; j < grid.node_count(); ++j)
    samples[j] = std::cos(3.0 * grid.theta[j]);
  const AngularSpectrum spec = forward_transform(samples, basis);

  // brute-force quadrature oracle for c_3 = int cos(3t) e^{-3it}/sqrt(2pi)
  const double c3 = oracles::simpson(
      [](double t) { return std::cos(3.0 * t) * std::cos(3.0 * t); }, 0.0,
      2.0 * M_PI, 400) /
      std::sqrt(2.0 * M_PI);
  CHECK(c3 == doctest::Approx(0.5 * std::sqrt(2.0 * kPi)).epsilon(1e-10));

  for (Index l = -6; l <= 6; ++l) {
    const Complex c = spec.coeffs[mode_index(2, 6, l)];
    if (l == 3 || l == -3)
      CHECK(std::abs(c - c3) <= 1e-12);
    else
      CHECK(std::abs(c) <= 1e-12);
  }
}

TEST_CASE("round trip and Parseval on band-limited data") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  for (int n : {2, 3}) {
    AngularBasis basis(n, 7);
    VecXcd coeffs(basis.modes());
    for (Index i = 0; i < coeffs.size(); ++i)
      coeffs[i] = Complex(gauss(rng), gauss(rng));
    AngularSpectrum spec{n, 7, coeffs};

    const VecXcd samples = inverse_transform(spec, basis);
    const AngularSpectrum back = forward_transform(samples, basis);
    CHECK((back.coeffs - coeffs).matrix().norm() /
              coeffs.matrix().norm() <=
          1e-10);

    // Parseval: quadrature L^2 equals coefficient sum
    Real quad = 0;
    for (Index j = 0; j < samples.size(); ++j)
      quad += basis.grid().weights[j] * std::norm(samples[j]);
    CHECK(quad == doctest::Approx(coeffs.matrix().squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("antipodal: parity, involution, norm preservation") {
  AngularBasis basis(3, 4);
  VecXcd ones = VecXcd::Ones(basis.grid().node_count());
  AngularSpectrum constant = forward_transform(ones, basis);
  AngularSpectrum flipped = antipodal(constant);
  CHECK((flipped.coeffs - constant.coeffs).matrix().norm() <= 1e-12);

  AngularSpectrum y10{3, 4, VecXcd::Zero(basis.modes())};
  y10.coeffs[mode_index(3, 4, 1, 0)] = 1.0;
  CHECK(std::abs(antipodal(y10).coeffs[mode_index(3, 4, 1, 0)] + 1.0) <=
        1e-15);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  AngularSpectrum arb{3, 4, VecXcd(basis.modes())};
  for (Index i = 0; i < arb.coeffs.size(); ++i)
    arb.coeffs[i] = Complex(gauss(rng), gauss(rng));
  const AngularSpectrum twice = antipodal(antipodal(arb));
  CHECK((twice.coeffs - arb.coeffs).matrix().norm() <= 1e-15);
  for (Real k : {0.0, 1.0, 2.5})
    CHECK(sobolev_norm(antipodal(arb), k) ==
          doctest::Approx(sobolev_norm(arb, k)).epsilon(1e-14));

  // antipodal sampled on the grid agrees mode-by-mode (n=2)
  AngularBasis b2(2, 5);
  AngularSpectrum s2{2, 5, VecXcd(b2.modes())};
  for (Index i = 0; i < s2.coeffs.size(); ++i)
    s2.coeffs[i] = Complex(gauss(rng), gauss(rng));
  const VecXcd v = inverse_transform(s2, b2);
  VecXcd v_flip(v.size());
  const Index M = b2.grid().node_count();
  for (Index j = 0; j < M; ++j) v_flip[j] = v[(j + M / 2) % M];
  const AngularSpectrum via_grid = forward_transform(v_flip, b2);
  CHECK((via_grid.coeffs - antipodal(s2).coeffs).matrix().norm() <= 1e-10);
}

TEST_CASE("sobolev_norm examples") {
  AngularBasis basis(3, 3);
  VecXcd ones = VecXcd::Ones(basis.grid().node_count());
  AngularSpectrum constant = forward_transform(ones, basis);
  for (Real k : {0.0, 1.0, 3.0})
    CHECK(sobolev_norm(constant, k) ==
          doctest::Approx(std::sqrt(4.0 * kPi)).epsilon(1e-12));

  // Y_10: eigenvalue l(l+1) = 2, so the k=1 norm is sqrt(3).
  AngularSpectrum y10{3, 3, VecXcd::Zero(basis.modes())};
  y10.coeffs[mode_index(3, 3, 1, 0)] = 1.0;
  CHECK(sobolev_norm(y10, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

  // discrete Laplace-Beltrami oracle for the eigenvalue on cos(theta):
  // Delta = -f'' - cot(theta) f' (zonal), expect 2 cos(theta).
  const double th = 1.1, h = 1e-4;
  auto f = [](double t) { return std::cos(t); };
  const double lap = -(f(th + h) - 2.0 * f(th) + f(th - h)) / (h * h) -
                     std::cos(th) / std::sin(th) * (f(th + h) - f(th - h)) /
                         (2.0 * h);
  CHECK(lap / f(th) == doctest::Approx(2.0).epsilon(1e-6));

  // n=2: e^{i theta}/sqrt(2 pi) has unit coefficient at l=1; k=2 gives 2.
  AngularBasis b2(2, 2);
  AngularSpectrum s2{2, 2, VecXcd::Zero(b2.modes())};
  s2.coeffs[mode_index(2, 2, 1)] = 1.0;
  CHECK(sobolev_norm(s2, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("quadrature is exact for harmonic products up to degree 2L") {
  AngularBasis basis(3, 4);
  // integral over S^2 of Y_{4,2} conj(Y_{4,2}) = 1 and of Y_{4,2} Y_{3,1} conj pair = 0
  const Index a = mode_index(3, 4, 4, 2);
  const Index b = mode_index(3, 4, 3, 1);
  Complex ip_aa = 0, ip_ab = 0;
  for (Index j = 0; j < basis.grid().node_count(); ++j) {
    const Complex ya = basis.synthesis()(j, a);
    const Complex yb = basis.synthesis()(j, b);
    ip_aa += basis.grid().weights[j] * ya * std::conj(ya);
    ip_ab += basis.grid().weights[j] * ya * std::conj(yb);
  }
  CHECK(std::abs(ip_aa - 1.0) <= 1e-12);
  CHECK(std::abs(ip_ab) <= 1e-12);
}

TEST_CASE("grid/band-limit mismatch raises shape errors") {
  AngularBasis basis(3, 4);
  VecXcd wrong = VecXcd::Ones(7);
  CHECK_THROWS_AS(forward_transform(wrong, basis), ShapeError);
  AngularSpectrum bad{3, 5, VecXcd::Zero(36)};
  CHECK_THROWS_AS(inverse_transform(bad, basis), ShapeError);
}
