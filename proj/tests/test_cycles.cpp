#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fonb/cycles.hpp"

using namespace fonb;

namespace {

// Brute force: every word of length <= p_max, its orbit, kept when extreme
// and primitive, reduced to its least rotation.
std::set<std::vector<double>> brute_force(const AffineIFS& ifs, std::vector<double> l, std::size_t p_max) {
  std::sort(l.begin(), l.end());
  std::set<std::vector<double>> out;
  for (std::size_t p = 1; p <= p_max; ++p) {
    std::vector<std::size_t> idx(p, 0);
    while (true) {
      std::vector<double> w(p);
      for (std::size_t i = 0; i < p; ++i) w[i] = l[idx[i]];
      bool primitive = true;
      for (std::size_t d = 1; d < p; ++d) {
        if (p % d == 0 && std::equal(w.begin() + d, w.end(), w.begin())) primitive = false;
      }
      if (primitive) {
        double c = cycle_fixed_point(w, ifs.scale());
        bool extreme = true;
        for (std::size_t i = 0; i < p; ++i) {
          extreme = extreme && std::abs(ifs.mask(c)) >= 1.0 - 1e-9;
          c = (c + w[i]) / ifs.scale();
        }
        if (extreme) {
          std::vector<double> best = w;
          for (std::size_t s = 1; s < p; ++s) {
            std::vector<double> rot(w.begin() + s, w.end());
            rot.insert(rot.end(), w.begin(), w.begin() + s);
            best = std::min(best, rot);
          }
          out.insert(best);
        }
      }
      std::size_t k = p;
      while (k > 0 && idx[k - 1] == l.size() - 1) idx[--k] = 0;
      if (k == 0) break;
      ++idx[k - 1];
    }
  }
  return out;
}

std::set<std::vector<double>> found(const CycleSearch& s) {
  std::set<std::vector<double>> out;
  for (const auto& c : s.cycles) out.insert(c.letters);
  return out;
}

}  // namespace

TEST_CASE("the Cantor pair has the single extreme cycle {0}") {
  const AffineIFS ifs(3.0, {0.0, 2.0});
  const CycleSearch s = find_extreme_cycles(ifs, std::vector<double>{0.0, 0.75});
  REQUIRE(s.cycles.size() == 1);
  CHECK(s.cycles[0].points == std::vector<double>{0.0});
  CHECK(s.p_max == 12);
}

TEST_CASE("cycles match a brute-force enumeration") {
  struct Case {
    AffineIFS ifs;
    std::vector<double> l;
  };
  const std::vector<Case> cases{
      {AffineIFS(3.0, {0.0, 2.0}), {0.0, 0.75}},
      {AffineIFS(2.0, {0.0, 1.0}), {0.0, 1.0}},
      {AffineIFS(2.0, {0.0, 1.0}), {0.0, 3.0}},
      {AffineIFS(4.0, {0.0, 2.0}), {0.0, 1.0}},
      {AffineIFS(4.0, {0.0, 2.0}), {3.0, 0.0}},
      {AffineIFS(3.0, {0.0, 1.0, 2.0}), {0.0, 4.0, -1.0}},
  };
  for (const Case& c : cases) {
    const CycleSearch s = find_extreme_cycles(c.ifs, c.l, 8);
    CHECK(found(s) == brute_force(c.ifs, c.l, 8));
    for (const auto& cyc : s.cycles) {
      const std::size_t p = cyc.period();
      for (std::size_t k = 0; k < p; ++k) {
        CHECK(cyc.points[(k + 1) % p] == doctest::Approx((cyc.points[k] + cyc.letters[k]) / c.ifs.scale()));
        CHECK(std::abs(c.ifs.mask(cyc.points[k])) == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("known cycle structure") {
  const AffineIFS ifs(2.0, {0.0, 1.0});
  auto s = found(find_extreme_cycles(ifs, std::vector<double>{0.0, 1.0}));
  CHECK(s == std::set<std::vector<double>>{{0.0}, {1.0}});
  s = found(find_extreme_cycles(ifs, std::vector<double>{0.0, 3.0}));
  CHECK(s == std::set<std::vector<double>>{{0.0}, {3.0}, {0.0, 3.0}});
}

TEST_CASE("fixed-point-only systems need no long words") {
  const AffineIFS ifs(2.0, {0.0, 1.0});
  const std::vector<double> l{0.0, 1.0};
  CHECK(found(find_extreme_cycles(ifs, l, 1)) == found(find_extreme_cycles(ifs, l, 12)));
}

TEST_CASE("cycle search preconditions") {
  const AffineIFS ifs(3.0, {0.0, 2.0});
  try {
    find_extreme_cycles(ifs, std::vector<double>{0.0, 0.5});
    FAIL("expected NotASpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_a_spectrum);
  }
  CHECK_THROWS_AS(find_extreme_cycles(ifs, std::vector<double>{0.0, 0.75}, 0), Error);
  const Interval i = candidate_interval(std::vector<double>{0.0, 0.75}, 3.0);
  CHECK(i.lo == 0.0);
  CHECK(i.hi == doctest::Approx(0.375));
  CHECK(cycle_fixed_point(std::vector<double>{1.0, 0.0}, 2.0) == doctest::Approx(1.0 / 3.0));
}
