#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "splinedict/piecewise_poly.hpp"
#include "splinedict/spline_mra.hpp"

using namespace splinedict;

namespace {

PiecewisePoly constant(double v, Dyadic a, Dyadic b) { return PiecewisePoly({a, b}, {{v}}); }

// Monomial x^k on [a, b] in the local coordinate: sum_i binom(k,i) a^{k-i} h^i t^i.
PiecewisePoly monomial(int k, double a, double b) {
  const double h = b - a;
  PiecewisePoly::Coeffs c(k + 1);
  for (int i = 0; i <= k; ++i) c[i] = oracle::binom(k, i) * std::pow(a, k - i) * std::pow(h, i);
  return PiecewisePoly({Dyadic(static_cast<std::int64_t>(a)), Dyadic(static_cast<std::int64_t>(b))}, {c});
}

}  // namespace

TEST_CASE("dyadic normal form and arithmetic") {
  CHECK(Dyadic(6, 2) == Dyadic(3, 1));
  CHECK(Dyadic(8, 3) == Dyadic(1));
  CHECK(Dyadic(0, 5) == Dyadic(0));
  CHECK(Dyadic(3, 2) + Dyadic(1, 2) == Dyadic(1));
  CHECK(Dyadic(1, 1) - Dyadic(3, 2) == Dyadic(-1, 2));
  CHECK(Dyadic(-13, 2).to_string() == "-13/2^2");
  CHECK(Dyadic::parse("-13/2^2") == Dyadic(-13, 2));
  CHECK(Dyadic::parse("5") == Dyadic(5));
  CHECK(Dyadic(-13, 2).floor() == -4);
  CHECK(Dyadic(-13, 2).ceil() == -3);
  CHECK(Dyadic(7, 1).scaled_to_integer(1) == 7);
  CHECK_THROWS_AS(Dyadic(7, 2).scaled_to_integer(1), std::domain_error);
  CHECK(Dyadic(3).scaled(-2) == Dyadic(3, 2));
  CHECK(Dyadic(-1, 3) < Dyadic(0));
  CHECK(Dyadic(5, 2).to_double() == 1.25);
}

TEST_CASE("bspline hand values") {
  const auto b1 = bspline(1);
  CHECK(evaluate(b1, 0.0) == 1.0);
  CHECK(evaluate(b1, 0.999) == 1.0);
  CHECK(evaluate(b1, 1.0) == 0.0);
  const auto b2 = bspline(2);
  CHECK(evaluate(b2, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(evaluate(b2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(evaluate(bspline(4), 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(bspline_at_integer(4, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(bspline(0), std::invalid_argument);
}

TEST_CASE("bspline matches Cox-de Boor recursion") {
  for (int m = 1; m <= 8; ++m) {
    const auto b = bspline(m);
    for (int s = -10; s <= 100 * m + 10; ++s) {
      const double x = s / 100.0 + 0.003;
      CHECK(evaluate(b, x) == doctest::Approx(oracle::cox_de_boor(m, x)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("bspline integrates to one") {
  for (int m = 1; m <= 8; ++m)
    CHECK(inner_product(bspline(m), constant(1.0, 0, m)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("partition of unity on the interior") {
  for (int m = 2; m <= 6; ++m) {
    const SpaceParams sp{m, 0, 3 * m, 0};
    const auto atoms = basis_V(sp);
    for (int s = 0; s <= 200; ++s) {
      const double x = m + s * (m / 200.0);
      double sum = 0.0;
      for (const auto& a : atoms) sum += evaluate(a.shape, x);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gauss-Legendre exactness") {
  for (int n = 1; n <= 12; ++n) {
    const auto& g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("inner product of random polynomials matches closed form") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int dp = static_cast<int>(rng() % 6);
    const int dq = static_cast<int>(rng() % 6);
    // On [0, 1] the local and global coordinates agree, so the monomial
    // integral is sum a_i b_k / (i + k + 1).
    PiecewisePoly::Coeffs a(dp + 1), b(dq + 1);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    double exact = 0.0;
    for (int i = 0; i <= dp; ++i)
      for (int k = 0; k <= dq; ++k) exact += a[i] * b[k] / (i + k + 1);
    const PiecewisePoly p({0, 1}, {a}), q({0, 1}, {b});
    CHECK(inner_product(p, q) == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
  }
  // Monomials on a longer interval: int_2^5 x^3 x^4 dx = (5^8 - 2^8) / 8.
  CHECK(inner_product(monomial(3, 2, 5), monomial(4, 2, 5)) == doctest::Approx((390625.0 - 256.0) / 8.0).epsilon(1e-13));
}

TEST_CASE("inner product of atoms matches Simpson oracle") {
  const SpaceParams sp{4, 0, 8, 1};
  const auto a = make_scaling_atom(sp, Dyadic(3, 1));
  const auto w = make_wavelet_atom(sp, Dyadic(1, 2));
  auto fa = [&](double x) { return std::sqrt(2.0) * oracle::cox_de_boor(4, 2 * x - 1.5); };
  auto fw = [&](double x) { return std::sqrt(2.0) * oracle::chui_wang_psi(4, 2 * x - 0.25); };
  const double ref = oracle::simpson([&](double x) { return fa(x) * fw(x); }, 0.0, 8.0);
  CHECK(inner_product(a.shape, w.shape) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
  const double ref_norm = oracle::simpson([&](double x) { return fw(x) * fw(x); }, 0.0, 8.0);
  CHECK(w.norm * w.norm == doctest::Approx(ref_norm).epsilon(1e-10));
}

TEST_CASE("inner product is symmetric and Gram of a basis is positive definite") {
  const auto atoms = basis_V({3, 0, 6, 1});
  Eigen::MatrixXd g(atoms.size(), atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t k = 0; k < atoms.size(); ++k) g(i, k) = inner_product(atoms[i].shape, atoms[k].shape);
  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("linear combination") {
  const auto p = bspline(3);
  const std::vector<PiecewisePoly> one{p};
  const std::vector<double> c1{1.0};
  const auto same = linear_combination(c1, one);
  for (double x = -0.5; x < 3.5; x += 0.01) CHECK(evaluate(same, x) == evaluate(p, x));

  const std::vector<PiecewisePoly> two{p, p};
  const std::vector<double> c2{1.0, -1.0};
  CHECK(linear_combination(c2, two).is_zero());

  CHECK_THROWS_AS(linear_combination(c1, two), std::invalid_argument);
  CHECK_THROWS_AS(linear_combination(std::span<const double>{}, std::span<const PiecewisePoly>{}),
                  std::invalid_argument);
}

TEST_CASE("two-scale identity through linear_combination") {
  for (int m = 1; m <= 6; ++m) {
    const auto phi = bspline(m);
    const auto p = bspline_two_scale(m);
    std::vector<PiecewisePoly> terms;
    for (int n = 0; n <= m; ++n) terms.push_back(dilate_translate(phi, 1, Dyadic(n)));
    const auto sum = linear_combination(p, terms);
    for (int s = 0; s < 1000; ++s) {
      const double x = -0.5 + s * (m + 1.0) / 1000.0;
      CHECK(evaluate(sum, x) == doctest::Approx(evaluate(phi, x)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("restrict_to") {
  const auto phi = bspline(4);
  const auto full = restrict_to(phi, 0, 4);
  CHECK(full.support() == phi.support());
  for (double x = 0.0; x < 4.0; x += 0.05) CHECK(evaluate(full, x) == evaluate(phi, x));

  const auto shifted = dilate_translate(phi, 0, Dyadic(-3));
  const auto cut = restrict_to(shifted, 0, 8);
  CHECK(cut.support() == std::pair<Dyadic, Dyadic>{Dyadic(0), Dyadic(1)});
  CHECK(evaluate(cut, 0.25) == doctest::Approx(oracle::cox_de_boor(4, 3.25)).epsilon(1e-14));
  CHECK(evaluate(cut, -0.25) == 0.0);

  CHECK(restrict_to(phi, 5, 9).is_zero());
  CHECK_THROWS_AS(restrict_to(phi, 2, 2), std::invalid_argument);
}

TEST_CASE("dilate_translate and left limits") {
  const auto phi = bspline(2);
  const auto d = dilate_translate(phi, 2, Dyadic(3, 1), 2.0);  // 2 phi(4x - 3/2)
  for (double x = 0.0; x < 1.5; x += 0.01)
    CHECK(evaluate(d, x) == doctest::Approx(2.0 * oracle::cox_de_boor(2, 4 * x - 1.5)).epsilon(1e-14).scale(1.0));
  const auto cut = restrict_to(bspline(2), 0, 1);
  CHECK(evaluate(cut, 1.0) == 0.0);
  CHECK(evaluate_left(cut, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("reparametrize") {
  const std::vector<double> c{0.3, -1.2, 0.7, 2.0};
  const auto r = reparametrize(c, 0.25, 0.5);
  auto eval = [](std::span<const double> k, double t) {
    double s = 0.0;
    for (std::size_t i = k.size(); i-- > 0;) s = s * t + k[i];
    return s;
  };
  for (double s = 0.0; s <= 1.0; s += 0.1)
    CHECK(eval(r, s) == doctest::Approx(eval(c, 0.25 + 0.5 * s)).epsilon(1e-14));
}
