#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fonb/basis.hpp"
#include "fonb/verifier.hpp"

using namespace fonb;

namespace {

AffineIFS cantor() { return AffineIFS(3.0, {0.0, 2.0}); }
const std::vector<double> kCantorDual{0.0, 0.75};

std::vector<PiecewiseExp> cantor_basis(std::size_t max_len) {
  const AffineIFS ifs = cantor();
  return gen_fractal_onb(ifs, kCantorDual, find_extreme_cycles(ifs, kCantorDual).cycles, max_len);
}

}  // namespace

TEST_CASE("inner products of exponentials") {
  const AffineIFS ifs = cantor();
  const PiecewiseExp e0 = PiecewiseExp::exponential(ifs, 0.0);
  const PiecewiseExp e34 = PiecewiseExp::exponential(ifs, 0.75);
  CHECK(std::abs(inner_product(e0, e0) - 1.0) < 1e-15);
  CHECK(std::abs(inner_product(e34, e0)) < 1e-8);
  const McEstimate mc = inner_product_mc(e34, e0, 100000, 5);
  CHECK(std::abs(mc.mean) < 5.0 * mc.std_error);
  try {
    inner_product(e0, PiecewiseExp::exponential(AffineIFS(4.0, {0.0, 2.0}), 0.0));
    FAIL("expected MixedSystems");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::mixed_systems);
  }
}

TEST_CASE("product formula agrees with Monte Carlo on random pairs") {
  const auto basis = cantor_basis(4);
  CounterRng rng(8, 0);
  for (int k = 0; k < 20; ++k) {
    PiecewiseExp p = basis[rng.below(basis.size())];
    const PiecewiseExp q = basis[rng.below(basis.size())];
    p = apply_exponential_isometry(p, 1.7 * rng.uniform());  // leave the basis
    const cplx formula = inner_product(p, q);
    const McEstimate mc = inner_product_mc(p, q, 100000, 100 + k);
    CHECK(std::abs(formula - mc.mean) < 4.0 * mc.std_error + 1e-12);
  }
}

TEST_CASE("inner products are exactly Hermitian") {
  const auto basis = cantor_basis(4);
  const AffineIFS ifs = cantor();
  std::vector<PiecewiseExp> family(basis.begin(), basis.end());
  family.push_back(PiecewiseExp::exponential(ifs, 0.123));
  family.push_back(apply_exponential_isometry(PiecewiseExp::exponential(ifs, -2.9), 0.4));
  for (const auto& p : family)
    for (const auto& q : family) CHECK(inner_product(p, q) == std::conj(inner_product(q, p)));
}

TEST_CASE("Gram matrices") {
  const auto basis = cantor_basis(5);
  const GramReport g = gram_matrix(basis);
  CHECK(g.size == 32);
  CHECK(g.pass);
  CHECK(g.max_off_diagonal < 1e-6);
  CHECK(g.method == "product-formula");

  const GramReport one = gram_matrix(std::span(basis).first(1));
  CHECK(one.max_diag_deviation < 1e-8);

  std::vector<PiecewiseExp> dup(basis.begin(), basis.begin() + 4);
  dup.push_back(basis[2]);
  const GramReport d = gram_matrix(dup);
  CHECK_FALSE(d.pass);
  CHECK(d.max_off_diagonal == doctest::Approx(1.0));

  // reordering permutes the matrix
  std::vector<PiecewiseExp> rev(basis.rbegin(), basis.rend());
  const GramReport r = gram_matrix(rev);
  CHECK(r.max_off_diagonal == doctest::Approx(g.max_off_diagonal).epsilon(1e-6).scale(1e-15));
  CHECK_THROWS_AS(gram_matrix(std::span<const PiecewiseExp>{}), Error);
}

TEST_CASE("Parseval sums") {
  const AffineIFS ifs = cantor();
  const auto basis = cantor_basis(6);
  const double h0 = parseval_h(ifs, basis, 0.0);
  CHECK(h0 >= 1.0 - 1e-8);
  CHECK(h0 <= 1.0 + 1e-6);
  const auto curve = parseval_curve(ifs, basis, 0.3, 6);
  CHECK(curve.size() == 7);
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k] >= curve[k - 1]);
  CHECK(curve.back() <= 1.0 + 1e-6);
  CHECK(curve.back() == doctest::Approx(parseval_h(ifs, basis, 0.3)).epsilon(1e-12));

  const AffineIFS leb(2.0, {0.0, 1.0});
  const std::vector<double> l{0.0, 1.0};
  const auto lb = gen_fractal_onb(leb, l, find_extreme_cycles(leb, l).cycles, 8);
  // sum over n in [-256, 255] of sinc^2: tail < 2 / (pi^2 * 255)
  CHECK(parseval_h(leb, lb, 0.5) >= 1.0 - 2.0 / (M_PI * M_PI * 255.0));
}

TEST_CASE("transfer operator") {
  const AffineIFS ifs = cantor();
  const TransferGrid one = make_transfer_grid(kCantorDual, 3.0);
  CHECK(one.t.size() == 2048);
  CHECK(one.a < 0.0);
  CHECK(one.b > 0.375);
  const TransferGrid it = transfer_iterate(ifs, kCantorDual, one, 25);
  for (double h : it.h) CHECK(std::abs(h - 1.0) < 1e-12);

  TransferGrid noisy = one;
  CounterRng rng(6, 6);
  for (std::size_t i = 0; i < noisy.t.size(); ++i) {
    if (std::abs(noisy.t[i]) > 0.02) noisy.h[i] = 2.0 * rng.uniform();
  }
  const TransferGrid out = transfer_iterate(ifs, kCantorDual, noisy, 100);
  double dev = 0.0;
  for (double h : out.h) {
    CHECK(h >= 0.0);
    dev = std::max(dev, std::abs(h - 1.0));
  }
  CHECK(dev < 1e-3);

  TransferGrid narrow = make_transfer_grid(kCantorDual, 3.0, 64, 0.0);
  narrow.a = 0.1;
  for (std::size_t i = 0; i < narrow.t.size(); ++i) narrow.t[i] = 0.1 + 0.275 * static_cast<double>(i) / 63.0;
  try {
    transfer_iterate(ifs, kCantorDual, narrow, 1);
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::grid_too_coarse);
  }
}

TEST_CASE("Walsh Gram is exact") {
  const double s = std::sqrt(0.5);
  Eigen::MatrixXcd a(4, 4);
  a << 0.5, 0.5, 0.5, 0.5, s, -s, 0, 0, 0, 0, s, -s, 0.5, 0.5, -0.5, -0.5;
  const auto basis = gen_walsh_basis(UnitaryMatrix::from_matrix(a), 2);
  const GramReport g = walsh_gram(basis);
  CHECK(g.pass);
  CHECK(g.size == 16);
}
