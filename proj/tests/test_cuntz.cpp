#include <doctest.h>

#include <cmath>

#include "fonb/cuntz.hpp"
#include "fonb/verifier.hpp"

using namespace fonb;

namespace {

AffineIFS cantor() { return AffineIFS(3.0, {0.0, 2.0}); }

const std::vector<double> kCantorDual{0.0, 0.75};

double max_gap(const Function& f, const Function& g, std::span<const double> grid) {
  double gap = 0.0;
  for (double x : grid) gap = std::max(gap, std::abs(evaluate(f, x) - evaluate(g, x)));
  return gap;
}

UnitaryMatrix block_walsh_matrix() {
  const double s = std::sqrt(0.5);
  Eigen::MatrixXcd a(4, 4);
  a << 0.5, 0.5, 0.5, 0.5, s, -s, 0, 0, 0, 0, s, -s, 0.5, 0.5, -0.5, -0.5;
  return UnitaryMatrix::from_matrix(a);
}

}  // namespace

TEST_CASE("symbolic S_l agrees with m(x) f(r x) pointwise") {
  const AffineIFS ifs = cantor();
  const auto grid = verification_grid(ifs, 256);
  const CuntzRep rep(ifs, exponential_basis(kCantorDual));
  const CuntzRep lazy(ifs, {{FilterFunction::general([](double x) { return expi(0.0 * x); }),
                             FilterFunction::general([](double x) { return expi(0.75 * x); })}});
  const Function f = PiecewiseExp::exponential(ifs, -1.3);
  for (std::size_t i = 0; i < 2; ++i) {
    const Function sym = apply_S(rep, i, f);
    CHECK(std::holds_alternative<PiecewiseExp>(sym));
    const Function ref = apply_S(lazy, i, f);
    CHECK(std::holds_alternative<Evaluable>(ref));
    CHECK(max_gap(sym, ref, grid) < 1e-12);

    const Function sym_star = apply_S_star(rep, i, sym);
    CHECK(std::holds_alternative<PiecewiseExp>(sym_star));
    const Function ref_star = apply_S_star(lazy, i, ref);
    CHECK(max_gap(sym_star, ref_star, grid) < 1e-12);
  }
}

TEST_CASE("piecewise exponentials refine and coarsen losslessly") {
  const AffineIFS ifs = cantor();
  const PiecewiseExp e = PiecewiseExp::exponential(ifs, 2.25);
  const PiecewiseExp fine = e.refined(3);
  CHECK(fine.depth() == 3);
  CHECK(fine.cylinder_count() == 8);
  CHECK(fine.coarsened().depth() == 0);
  CHECK(fine.same_as(e));
  const PiecewiseExp s = apply_exponential_isometry(apply_exponential_isometry(e, 0.75), 0.0);
  CHECK(s.unimodular());
  CHECK(s.provenance().word == std::vector<double>{0.0, 0.75});
  const auto grid = verification_grid(ifs, 128);
  const PiecewiseExp c = s.coarsened();
  for (double x : grid) CHECK(std::abs(c(x) - s(x)) < 1e-12);
  CHECK_THROWS_AS(e(0.5), Error);
}

TEST_CASE("isometries preserve inner products") {
  const AffineIFS ifs = cantor();
  const PiecewiseExp f = apply_exponential_isometry(PiecewiseExp::exponential(ifs, 0.4), 0.75);
  const PiecewiseExp g = PiecewiseExp::exponential(ifs, -1.1);
  const cplx base = inner_product(f, g);
  for (double l : kCantorDual) {
    const cplx moved = inner_product(apply_exponential_isometry(f, l), apply_exponential_isometry(g, l));
    CHECK(std::abs(moved - base) < 1e-8);
  }
  // <S_l f, g> = <f, S_l^* g>
  for (double l : kCantorDual) {
    const auto adj = apply_exponential_adjoint(g, l);
    REQUIRE(adj.has_value());
    CHECK(std::abs(inner_product(apply_exponential_isometry(f, l), g) - inner_product(f, *adj)) < 1e-8);
  }
  // <S_{3/4} e_0, S_0 e_0> = 0
  const PiecewiseExp e0 = PiecewiseExp::exponential(ifs, 0.0);
  CHECK(std::abs(inner_product(apply_exponential_isometry(e0, 0.75), apply_exponential_isometry(e0, 0.0))) < 1e-8);
}

TEST_CASE("Cuntz relations for the Cantor exponential representation") {
  const AffineIFS ifs = cantor();
  const auto grid = verification_grid(ifs);
  const CuntzRep rep = CuntzRep::validated(ifs, exponential_basis(kCantorDual), grid);
  std::vector<Function> tests;
  for (double t : {0.0, 0.3, -2.0, 5.5}) tests.emplace_back(PiecewiseExp::exponential(ifs, t));
  tests.emplace_back(Evaluable([](double x) { return cplx(x * x, std::sin(x)); }));
  const CuntzReport report = verify_cuntz(rep, tests, grid, 1e-10);
  CHECK(report.pass);
  CHECK(report.functions == 5);
}

TEST_CASE("non-QMF filters are rejected") {
  const AffineIFS ifs = cantor();
  const auto grid = verification_grid(ifs);
  CHECK_THROWS_AS(CuntzRep::validated(ifs, exponential_basis(std::vector<double>{0.0, 0.5}), grid), Error);
  CHECK_THROWS_AS(CuntzRep(ifs, exponential_basis(std::vector<double>{0.0, 0.25, 0.5})), Error);
  const CuntzRep rep(ifs, exponential_basis(kCantorDual));
  CHECK_THROWS_AS(apply_S(rep, 2, PiecewiseExp::exponential(ifs, 0.0)), Error);
}

TEST_CASE("Cuntz relations for the 4x4 Walsh representation") {
  const UnitaryMatrix a = block_walsh_matrix();
  const AffineIFS ifs = AffineIFS::unit_interval(4);
  const auto grid = verification_grid(ifs);
  QmfBasis filters;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<cplx> v(4);
    for (std::size_t j = 0; j < 4; ++j) v[j] = 2.0 * a(i, j);
    filters.filters.push_back(FilterFunction::step(v));
  }
  const CuntzRep rep = CuntzRep::validated(ifs, filters, grid);
  std::vector<Function> tests;
  CounterRng rng(2, 2);
  for (int k = 0; k < 3; ++k) {
    std::vector<cplx> v(16);
    for (cplx& z : v) z = {rng.uniform(), rng.uniform()};
    tests.emplace_back(StepWalsh(4, 2, v));
  }
  tests.emplace_back(Evaluable([](double x) { return expi(2.7 * x); }));
  tests.emplace_back(Evaluable([](double x) { return cplx(std::cos(9.0 * x), x); }));
  CHECK(verify_cuntz(rep, tests, grid, 1e-10).pass);

  // symbolic step isometry equals m_i(x) s(r x)
  const StepWalsh s(4, 1, {1.0, 2.0, cplx(0, 1), -1.0});
  for (std::size_t i = 0; i < 4; ++i) {
    const Function sym = apply_S(rep, i, s);
    CHECK(std::holds_alternative<StepWalsh>(sym));
    const Evaluable ref = [&, i](double x) { return filters[i](x) * s(ifs.r_map(x)); };
    CHECK(max_gap(sym, ref, grid) < 1e-14);
  }
}

TEST_CASE("word operators apply right to left") {
  const AffineIFS ifs = cantor();
  const CuntzRep rep(ifs, exponential_basis(kCantorDual));
  const PiecewiseExp e = PiecewiseExp::exponential(ifs, 0.0);
  const Function w = apply_word(rep, {{1, 0}}, e);
  const Function manual = apply_S(rep, 1, apply_S(rep, 0, e));
  CHECK(max_gap(w, manual, verification_grid(ifs, 64)) == 0.0);
  CHECK(std::get<PiecewiseExp>(w).provenance().word == std::vector<double>{0.75, 0.0});
}
