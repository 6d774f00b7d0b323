#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fonb/ifs.hpp"

namespace fonb {

/// Periodic orbit c_0 -> c_1 -> ... of the maps g_l(t) = (t + l) / R with
/// c_{k+1} = g_{l_k}(c_k) (indices mod p) and |m_B(c_k)| = 1 at every point.
/// Stored from the rotation whose letter word is lexicographically least.
struct ExtremeCycle {
  std::vector<double> points;
  std::vector<double> letters;
  std::size_t period() const noexcept { return points.size(); }
};

struct CycleSearch {
  std::vector<ExtremeCycle> cycles;
  std::size_t p_max = 0;  // the result is complete up to this period
  double tol = 0.0;
  std::size_t words_examined = 0;
};

/// [min L / (R - 1), max L / (R - 1)]; every g_l maps it into itself.
Interval candidate_interval(std::span<const double> dual, double scale);

/// Fixed point of g_{l_{p-1}} o ... o g_{l_0}: (sum_j l_j R^j) / (R^p - 1).
double cycle_fixed_point(std::span<const double> letters, double scale);

/// Exhaustive search over primitive letter words of length <= p_max, one per
/// rotation class. Throws NotASpectrum unless L is a spectrum for R^{-1} B.
/// Keeps the orbits with |m_B(c_k)| >= 1 - tol at every point.
CycleSearch find_extreme_cycles(const AffineIFS& ifs, std::span<const double> dual,
                                std::size_t p_max = 12, double tol = 1e-9);

}  // namespace fonb
