#include "fonb/cycles.hpp"

#include <algorithm>
#include <cmath>

#include "fonb/filters.hpp"

namespace fonb {

Interval candidate_interval(std::span<const double> dual, double scale) {
  if (!(scale > 1.0)) throw Error(Errc::invalid_argument, "scale must exceed 1");
  if (dual.empty()) throw Error(Errc::invalid_argument, "empty letter set");
  const auto [lo, hi] = std::minmax_element(dual.begin(), dual.end());
  return {*lo / (scale - 1.0), *hi / (scale - 1.0)};
}

double cycle_fixed_point(std::span<const double> letters, double scale) {
  if (letters.empty()) throw Error(Errc::invalid_argument, "cycle word must be nonempty");
  double numerator = 0.0;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) numerator = numerator * scale + *it;
  return numerator / (std::pow(scale, static_cast<double>(letters.size())) - 1.0);
}

CycleSearch find_extreme_cycles(const AffineIFS& ifs, std::span<const double> dual, std::size_t p_max,
                                double tol) {
  if (p_max == 0) throw Error(Errc::invalid_argument, "p_max must be at least 1");
  if (!is_spectrum(ifs.digits(), ifs.scale(), dual).pass) {
    throw Error(Errc::not_a_spectrum, "L is not a spectrum for R^{-1} B");
  }
  std::vector<double> alphabet(dual.begin(), dual.end());
  std::sort(alphabet.begin(), alphabet.end());
  const std::size_t k = alphabet.size();

  CycleSearch search;
  search.p_max = p_max;
  search.tol = tol;

  // Duval's generation of Lyndon words of length <= p_max, i.e. one
  // representative per rotation class of primitive words, lexicographically least.
  std::vector<std::size_t> word{0};
  std::vector<double> letters;
  std::vector<double> points;
  while (!word.empty()) {
    ++search.words_examined;
    letters.resize(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) letters[i] = alphabet[word[i]];

    points.assign(1, cycle_fixed_point(letters, ifs.scale()));
    bool extreme = std::abs(ifs.mask(points[0])) >= 1.0 - tol;
    for (std::size_t i = 0; extreme && i + 1 < letters.size(); ++i) {
      points.push_back((points.back() + letters[i]) / ifs.scale());
      extreme = std::abs(ifs.mask(points.back())) >= 1.0 - tol;
    }
    if (extreme) search.cycles.push_back({points, letters});

    const std::size_t m = word.size();
    while (word.size() < p_max) word.push_back(word[word.size() - m]);
    while (!word.empty() && word.back() == k - 1) word.pop_back();
    if (!word.empty()) ++word.back();
  }
  return search;
}

}  // namespace fonb
