#include "fonb/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fonb {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) out *= base;
  return out;
}

bool is_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9; }

/// Elements bucketed by (depth, leading frequency) for tolerant lookups.
class DedupIndex {
 public:
  template <class Same>
  bool contains(std::size_t depth, double key, Same&& same) const {
    const double slack = 1e-10 * std::max(1.0, std::abs(key));
    auto it = index_.lower_bound({depth, key - slack});
    const auto end = index_.upper_bound({depth, key + slack});
    for (; it != end; ++it) {
      if (same(it->second)) return true;
    }
    return false;
  }
  void insert(std::size_t depth, double key, std::size_t position) { index_.insert({{depth, key}, position}); }

 private:
  std::multimap<std::pair<std::size_t, double>, std::size_t> index_;
};

}  // namespace

std::vector<PiecewiseExp> gen_fractal_onb(const AffineIFS& ifs, std::span<const double> dual,
                                          std::span<const ExtremeCycle> cycles, std::size_t max_len) {
  std::vector<PiecewiseExp> elements;
  DedupIndex index;
  auto admit = [&](PiecewiseExp candidate) -> bool {
    const std::size_t depth = candidate.depth();
    const double key = candidate.pieces()[0].freq;
    if (index.contains(depth, key, [&](std::size_t pos) { return elements[pos].same_as(candidate); })) {
      return false;
    }
    index.insert(depth, key, elements.size());
    elements.push_back(std::move(candidate));
    return true;
  };

  std::vector<std::size_t> frontier;
  for (const ExtremeCycle& cycle : cycles) {
    for (double c : cycle.points) {
      auto seed = PiecewiseExp::exponential(ifs, -c);
      seed.set_provenance({{}, c});
      if (admit(std::move(seed))) frontier.push_back(elements.size() - 1);
    }
  }
  for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
    std::vector<std::size_t> next;
    for (std::size_t pos : frontier) {
      for (double l : dual) {
        // `elements` may reallocate inside admit, so copy the parent first.
        const PiecewiseExp parent = elements[pos];
        if (admit(apply_exponential_isometry(parent, l).coarsened())) next.push_back(elements.size() - 1);
      }
    }
    frontier = std::move(next);
  }
  return elements;
}

double closed_form_alpha(std::span<const double> digit_word, std::span<const double> letter_word,
                         double cycle_point, double scale) {
  if (digit_word.size() != letter_word.size()) {
    throw Error(Errc::wrong_arity, "digit and letter words must have equal length");
  }
  // partial = R^{k-1} b_1 + ... + b_k
  double partial = 0.0;
  double alpha = 0.0;
  for (std::size_t k = 0; k < digit_word.size(); ++k) {
    if (k > 0) alpha -= partial * letter_word[k];
    partial = scale * partial + digit_word[k];
  }
  return alpha + partial * cycle_point;
}

double closed_form_frequency(std::span<const double> letter_word, double cycle_point, double scale) {
  double freq = -cycle_point;
  for (auto it = letter_word.rbegin(); it != letter_word.rend(); ++it) freq = *it + scale * freq;
  return freq;
}

PiecewiseExp closed_form_element(const AffineIFS& ifs, std::span<const double> letter_word, double cycle_point) {
  const std::size_t n = letter_word.size();
  const std::size_t count = ipow(ifs.size(), n);
  const double freq = closed_form_frequency(letter_word, cycle_point, ifs.scale());
  std::vector<ExpPiece> pieces(count);
  std::vector<double> digits(n);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t q = idx;
    for (std::size_t k = n; k-- > 0;) {
      digits[k] = ifs.digit(q % ifs.size());
      q /= ifs.size();
    }
    pieces[idx] = {expi(closed_form_alpha(digits, letter_word, cycle_point, ifs.scale())), freq};
  }
  return PiecewiseExp(ifs, n, std::move(pieces),
                      Provenance{std::vector<double>(letter_word.begin(), letter_word.end()), cycle_point});
}

std::vector<double> integer_spectrum(const AffineIFS& ifs, std::span<const double> dual,
                                     std::span<const ExtremeCycle> cycles, std::size_t max_len) {
  const bool integral = is_integer(ifs.scale()) &&
                        std::all_of(ifs.digits().begin(), ifs.digits().end(), is_integer) &&
                        std::all_of(dual.begin(), dual.end(), is_integer);
  if (!integral) throw Error(Errc::non_integer_input, "integer spectrum needs integer B, L and R");

  std::vector<double> spectrum;
  for (const PiecewiseExp& e : gen_fractal_onb(ifs, dual, cycles, max_len)) {
    const double f = e.pieces()[0].freq;
    for (const ExpPiece& p : e.pieces()) {
      if (std::abs(p.freq - f) > 1e-9 * std::max(1.0, std::abs(f))) {
        throw Error(Errc::invalid_argument, "element is not a single exponential");
      }
    }
    spectrum.push_back(f + 0.0);  // -0 -> 0
  }
  std::sort(spectrum.begin(), spectrum.end());
  spectrum.erase(std::unique(spectrum.begin(), spectrum.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }),
                 spectrum.end());
  return spectrum;
}

// ---------------------------------------------------------------------------

QmfBasis walsh_filters(const UnitaryMatrix& a) {
  if (!a.first_row_constant()) {
    throw Error(Errc::first_row_not_constant, "Walsh filters need a first row equal to 1/sqrt(N)");
  }
  const std::size_t n = a.size();
  const double root = std::sqrt(static_cast<double>(n));
  QmfBasis basis;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<cplx> values(n);
    for (std::size_t j = 0; j < n; ++j) values[j] = root * a(i, j);
    basis.filters.push_back(FilterFunction::step(std::move(values)));
  }
  return basis;
}

cplx walsh_value(const UnitaryMatrix& a, std::span<const std::size_t> word, std::size_t k) {
  const std::size_t n = a.size();
  const std::size_t cells = ipow(n, word.size());
  if (k >= cells) throw Error(Errc::index_out_of_range, "cell index beyond N^n");
  cplx value = std::pow(static_cast<double>(n), 0.5 * static_cast<double>(word.size()));
  std::size_t stride = cells;
  for (std::size_t t = 0; t < word.size(); ++t) {
    if (word[t] >= n) throw Error(Errc::index_out_of_range, "word letter beyond N - 1");
    stride /= n;
    value *= a(word[t], (k / stride) % n);
  }
  return value;
}

std::vector<StepWalsh> gen_walsh_basis(const UnitaryMatrix& a, std::size_t max_len) {
  const QmfBasis filters = walsh_filters(a);
  const std::size_t n = a.size();
  std::vector<StepWalsh> elements;
  DedupIndex index;
  auto admit = [&](StepWalsh candidate) -> bool {
    const std::size_t level = candidate.level();
    const double key = candidate.values()[0].real();
    if (index.contains(level, key, [&](std::size_t pos) { return elements[pos].same_as(candidate); })) {
      return false;
    }
    index.insert(level, key, elements.size());
    elements.push_back(std::move(candidate));
    return true;
  };

  admit(StepWalsh::constant(n));
  std::vector<std::size_t> frontier{0};
  for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
    std::vector<std::size_t> next;
    for (std::size_t pos : frontier) {
      for (std::size_t i = 0; i < n; ++i) {
        const StepWalsh parent = elements[pos];
        if (admit(apply_step_isometry(filters[i].as_step()->values, i, parent).coarsened())) {
          next.push_back(elements.size() - 1);
        }
      }
    }
    frontier = std::move(next);
  }
  return elements;
}

std::size_t walsh_level(std::size_t base, std::size_t length) {
  std::size_t level = 0;
  std::size_t cells = 1;
  while (cells < length) {
    cells *= base;
    ++level;
  }
  if (cells != length) {
    throw Error(Errc::length_mismatch, "signal length " + std::to_string(length) + " is not a power of " +
                                           std::to_string(base));
  }
  return level;
}

namespace {

/// Applies `m` along every base-N axis of `data` (length N^n).
std::vector<cplx> contract_axes(const Eigen::MatrixXcd& m, std::vector<cplx> data) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<cplx> gathered(n);
  for (std::size_t stride = data.size() / n; stride >= 1; stride /= n) {
    const std::size_t block = stride * n;
    for (std::size_t base = 0; base < data.size(); base += block) {
      for (std::size_t offset = 0; offset < stride; ++offset) {
        for (std::size_t j = 0; j < n; ++j) gathered[j] = data[base + j * stride + offset];
        for (std::size_t i = 0; i < n; ++i) {
          cplx sum = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            sum += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * gathered[j];
          }
          data[base + i * stride + offset] = sum;
        }
      }
    }
    if (stride == 1) break;
  }
  return data;
}

}  // namespace

std::vector<cplx> walsh_analyze(const UnitaryMatrix& a, std::span<const cplx> signal) {
  const std::size_t level = walsh_level(a.size(), signal.size());
  std::vector<cplx> out = contract_axes(a.entries().conjugate(), {signal.begin(), signal.end()});
  if (level == 0) return out;
  const double scale = std::pow(static_cast<double>(a.size()), -0.5 * static_cast<double>(level));
  for (cplx& v : out) v *= scale;
  return out;
}

std::vector<cplx> walsh_synthesize(const UnitaryMatrix& a, std::span<const cplx> coefficients) {
  const std::size_t level = walsh_level(a.size(), coefficients.size());
  std::vector<cplx> out = contract_axes(a.entries().transpose(), {coefficients.begin(), coefficients.end()});
  if (level == 0) return out;
  const double scale = std::pow(static_cast<double>(a.size()), 0.5 * static_cast<double>(level));
  for (cplx& v : out) v *= scale;
  return out;
}

}  // namespace fonb
