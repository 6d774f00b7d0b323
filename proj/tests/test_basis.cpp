#include <doctest.h>

#include <cmath>

#include "fonb/basis.hpp"
#include "fonb/cuntz.hpp"

using namespace fonb;

namespace {

UnitaryMatrix block_walsh_matrix() {
  const double s = std::sqrt(0.5);
  Eigen::MatrixXcd a(4, 4);
  a << 0.5, 0.5, 0.5, 0.5, s, -s, 0, 0, 0, 0, s, -s, 0.5, 0.5, -0.5, -0.5;
  return UnitaryMatrix::from_matrix(a);
}

UnitaryMatrix hadamard2() {
  const double s = std::sqrt(0.5);
  Eigen::MatrixXcd a(2, 2);
  a << s, s, s, -s;
  return UnitaryMatrix::from_matrix(a);
}

// A^{(x) n} by left tensoring, (A (x) B)_{i1 + M i2, j1 + M j2} = a_{i1 j1} b_{i2 j2}.
Eigen::MatrixXcd left_tensor_power(const Eigen::MatrixXcd& a, std::size_t n) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Ones(1, 1);
  const Eigen::Index na = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Index m = t.rows();
    Eigen::MatrixXcd next(na * m, na * m);
    for (Eigen::Index i1 = 0; i1 < na; ++i1)
      for (Eigen::Index j1 = 0; j1 < na; ++j1)
        for (Eigen::Index i2 = 0; i2 < m; ++i2)
          for (Eigen::Index j2 = 0; j2 < m; ++j2) next(i1 + na * i2, j1 + na * j2) = a(i1, j1) * t(i2, j2);
    t = std::move(next);
  }
  return t;
}

// Direct evaluation of S_{l_1} ... S_{l_n} e_{-c}(x) = prod_k e_{l_k}(r^{k-1} x) e_{-c}(r^n x).
cplx direct_word(const AffineIFS& ifs, std::span<const double> word, double c, double x) {
  cplx v = 1.0;
  for (double l : word) {
    v *= expi(l * x);
    x = ifs.r_map(x);
  }
  return v * expi(-c * x);
}

}  // namespace

TEST_CASE("closed form agrees with the recursion") {
  CounterRng rng(77, 0);
  const std::vector<AffineIFS> systems{AffineIFS(3.0, {0.0, 2.0}), AffineIFS(4.0, {0.0, 2.0}),
                                       AffineIFS(5.0, {0.0, 1.0, 3.0}), AffineIFS(2.5, {0.0, 1.0})};
  for (int trial = 0; trial < 200; ++trial) {
    const AffineIFS& ifs = systems[trial % systems.size()];
    const std::size_t n = 1 + rng.below(5);
    std::vector<double> word(n);
    for (double& l : word) l = 4.0 * (rng.uniform() - 0.5);
    const double c = 2.0 * (rng.uniform() - 0.5);

    PiecewiseExp rec = PiecewiseExp::exponential(ifs, -c);
    for (auto it = word.rbegin(); it != word.rend(); ++it) rec = apply_exponential_isometry(rec, *it);
    const PiecewiseExp closed = closed_form_element(ifs, word, c);
    CHECK(closed.depth() == n);
    CHECK(closed.same_as(rec, 1e-10));
    CHECK(closed_form_frequency(word, c, ifs.scale()) == doctest::Approx(rec.pieces()[0].freq));

    for (double x : verification_grid(ifs, 16)) {
      CHECK(std::abs(closed(x) - direct_word(ifs, word, c, x)) < 1e-9);
    }
  }
}

TEST_CASE("closed-form phase on a hand-checked word") {
  // n = 2, b = (2, 0), l = (0.75, 0), c = 0 on R = 3:
  // alpha = -(b_1 l_2) + (R b_1 + b_2) c = 0
  const std::vector<double> b{2.0, 0.0};
  const std::vector<double> l{0.75, 0.0};
  CHECK(closed_form_alpha(b, l, 0.0, 3.0) == 0.0);
  // l = (0, 0.75): alpha = -2 * 0.75 = -1.5
  const std::vector<double> l2{0.0, 0.75};
  CHECK(closed_form_alpha(b, l2, 0.0, 3.0) == doctest::Approx(-1.5));
  CHECK(closed_form_frequency(l2, 0.0, 3.0) == doctest::Approx(2.25));
  CHECK_THROWS_AS(closed_form_alpha(b, std::vector<double>{0.0}, 0.0, 3.0), Error);
}

TEST_CASE("Cantor E(L) up to length 5 has 32 elements") {
  const AffineIFS ifs(3.0, {0.0, 2.0});
  const std::vector<double> l{0.0, 0.75};
  const auto cycles = find_extreme_cycles(ifs, l).cycles;
  const auto e = gen_fractal_onb(ifs, l, cycles, 5);
  CHECK(e.size() == 32);
  for (const auto& x : e) CHECK(x.unimodular());
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(e[i].same_as(e[j]));
  CHECK(gen_fractal_onb(ifs, l, cycles, 0).size() == 1);
}

TEST_CASE("integer spectra") {
  const AffineIFS ifs(4.0, {0.0, 2.0});
  const std::vector<double> l{0.0, 1.0};
  const auto spectrum = integer_spectrum(ifs, l, find_extreme_cycles(ifs, l).cycles, 4);
  REQUIRE(spectrum.size() == 16);
  // base-4 numerals with digits 0, 1
  for (std::size_t k = 0; k < 16; ++k) {
    double v = 0.0, p = 1.0;
    for (std::size_t bits = k; bits; bits >>= 1, p *= 4.0) v += static_cast<double>(bits & 1) * p;
    CHECK(std::count(spectrum.begin(), spectrum.end(), v) == 1);
  }
  CHECK(spectrum[0] == 0.0);
  CHECK(std::signbit(spectrum[0]) == false);

  const AffineIFS leb(2.0, {0.0, 1.0});
  const auto z = integer_spectrum(leb, l, find_extreme_cycles(leb, l).cycles, 3);
  CHECK(z.size() == 16);
  CHECK(z.front() == -8.0);
  CHECK(z.back() == 7.0);

  const AffineIFS c(3.0, {0.0, 2.0});
  try {
    integer_spectrum(c, std::vector<double>{0.0, 0.75}, {}, 2);
    FAIL("expected NonIntegerInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_integer_input);
  }
}

TEST_CASE("Walsh values follow the left tensor power") {
  const UnitaryMatrix a = block_walsh_matrix();
  for (std::size_t n : {1u, 2u, 3u}) {
    const Eigen::MatrixXcd t = left_tensor_power(a.entries(), n);
    const std::size_t cells = static_cast<std::size_t>(t.rows());
    std::vector<std::size_t> word(n), j(n);
    for (std::size_t row = 0; row < cells; ++row) {
      for (std::size_t q = row, k = 0; k < n; ++k, q /= 4) word[k] = q % 4;  // row = i0 + 4 i1 + ...
      for (std::size_t cell = 0; cell < cells; ++cell) {
        for (std::size_t q = cell, k = n; k-- > 0; q /= 4) j[k] = q % 4;  // cell = 4^{n-1} j0 + ...
        std::size_t col = 0;
        for (std::size_t k = n; k-- > 0;) col = col * 4 + j[k];
        const cplx expected = std::pow(2.0, static_cast<double>(n)) *
                              t(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        CHECK(std::abs(walsh_value(a, word, cell) - expected) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(walsh_value(a, std::vector<std::size_t>{4}, 0), Error);
  CHECK_THROWS_AS(walsh_value(a, std::vector<std::size_t>{1}, 4), Error);
}

TEST_CASE("generated Walsh functions agree with walsh_value and S_w 1") {
  const UnitaryMatrix a = block_walsh_matrix();
  const auto basis = gen_walsh_basis(a, 2);
  CHECK(basis.size() == 16);
  const QmfBasis filters = walsh_filters(a);
  const AffineIFS ifs = AffineIFS::unit_interval(4);
  const CuntzRep rep(ifs, filters);
  for (const StepWalsh& e : basis) {
    if (!e.word().empty()) CHECK(e.word().back() != 0);
    const StepWalsh fine = e.refined(2);
    std::vector<std::size_t> padded = e.word();
    padded.resize(2, 0);
    for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(fine.values()[k] - walsh_value(a, padded, k)) < 1e-12);
    // through the Cuntz isometries on a lazy constant
    const Function f = apply_word(rep, {e.word()}, Evaluable([](double) { return cplx(1.0); }));
    for (std::size_t k = 0; k < 16; ++k) {
      const double x = (static_cast<double>(k) + 0.37) / 16.0;
      CHECK(std::abs(evaluate(f, x) - fine.values()[k]) < 1e-12);
    }
  }
}

TEST_CASE("N = 2 Walsh functions are Rademacher products") {
  const auto basis = gen_walsh_basis(hadamard2(), 3);
  CHECK(basis.size() == 8);
  for (const StepWalsh& e : basis) {
    const StepWalsh fine = e.refined(3);
    for (std::size_t k = 0; k < 8; ++k) {
      const double x = (static_cast<double>(k) + 0.5) / 8.0;
      double v = 1.0;
      for (std::size_t t = 0; t < e.word().size(); ++t) {
        if (e.word()[t] == 1) v *= std::fmod(std::floor(std::ldexp(x, static_cast<int>(t) + 1)), 2.0) == 0.0 ? 1 : -1;
      }
      CHECK(std::abs(fine.values()[k] - v) <= 1e-15);
    }
  }
}

TEST_CASE("Walsh filters need a constant first row") {
  try {
    walsh_filters(random_unitary(3, 4));
    FAIL("expected FirstRowNotConstant");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::first_row_not_constant);
  }
}

TEST_CASE("fast Walsh analysis matches inner products") {
  const UnitaryMatrix a = random_unitary(3, 8, true);
  const auto basis = gen_walsh_basis(a, 2);
  REQUIRE(basis.size() == 9);
  CounterRng rng(4, 4);
  std::vector<cplx> signal(9);
  for (cplx& v : signal) v = {rng.uniform(), rng.uniform()};
  const auto coeffs = walsh_analyze(a, signal);
  const StepWalsh s(3, 2, signal);
  for (std::size_t idx = 0; idx < 9; ++idx) {
    const std::vector<std::size_t> word{idx / 3, idx % 3};
    std::vector<cplx> vals(9);
    for (std::size_t k = 0; k < 9; ++k) vals[k] = walsh_value(a, word, k);
    CHECK(std::abs(coeffs[idx] - step_inner_product(s, StepWalsh(3, 2, vals))) < 1e-12);
  }
  const auto back = walsh_synthesize(a, coeffs);
  for (std::size_t k = 0; k < 9; ++k) CHECK(std::abs(back[k] - signal[k]) < 1e-12);
  CHECK_THROWS_AS(walsh_analyze(a, std::vector<cplx>(10)), Error);
  CHECK(walsh_level(2, 256) == 8);
  CHECK(walsh_level(4, 1) == 0);
}
