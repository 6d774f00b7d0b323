#include "fonb/step_walsh.hpp"

#include <algorithm>
#include <cmath>

namespace fonb {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) out *= base;
  return out;
}

}  // namespace

StepWalsh::StepWalsh(std::size_t base, std::size_t level, std::vector<cplx> values,
                     std::vector<std::size_t> word)
    : base_(base), level_(level), values_(std::move(values)), word_(std::move(word)) {
  if (base_ < 2) throw Error(Errc::invalid_argument, "step base must be >= 2");
  if (values_.size() != ipow(base_, level_)) {
    throw Error(Errc::wrong_arity, "step function needs N^n values");
  }
}

StepWalsh StepWalsh::constant(std::size_t base, cplx value) {
  return StepWalsh(base, 0, {value});
}

cplx StepWalsh::value_at(std::size_t index, std::size_t at_level) const {
  if (at_level < level_) throw Error(Errc::index_out_of_range, "level below element level");
  // The first digit j_0 is the most significant, so coarser intervals are
  // obtained by dropping trailing digits.
  return values_.at(index / ipow(base_, at_level - level_));
}

StepWalsh StepWalsh::refined(std::size_t level) const {
  if (level <= level_) return *this;
  const std::size_t count = ipow(base_, level);
  std::vector<cplx> values(count);
  for (std::size_t k = 0; k < count; ++k) values[k] = value_at(k, level);
  return StepWalsh(base_, level, std::move(values), word_);
}

StepWalsh StepWalsh::coarsened(double tol) const {
  std::vector<cplx> values = values_;
  std::size_t level = level_;
  while (level > 0) {
    const std::size_t parents = values.size() / base_;
    bool uniform = true;
    for (std::size_t p = 0; p < parents && uniform; ++p) {
      for (std::size_t c = 1; c < base_; ++c) {
        if (std::abs(values[p * base_ + c] - values[p * base_]) > tol) {
          uniform = false;
          break;
        }
      }
    }
    if (!uniform) break;
    std::vector<cplx> merged(parents);
    for (std::size_t p = 0; p < parents; ++p) merged[p] = values[p * base_];
    values = std::move(merged);
    --level;
  }
  return StepWalsh(base_, level, std::move(values), word_);
}

bool StepWalsh::same_as(const StepWalsh& other, double tol) const {
  if (base_ != other.base_) return false;
  const std::size_t level = std::max(level_, other.level_);
  const std::size_t count = ipow(base_, level);
  for (std::size_t k = 0; k < count; ++k) {
    if (std::abs(value_at(k, level) - other.value_at(k, level)) > tol) return false;
  }
  return true;
}

double StepWalsh::norm_squared() const {
  double sum = 0.0;
  for (const cplx& v : values_) sum += std::norm(v);
  return sum / static_cast<double>(values_.size());
}

cplx StepWalsh::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::outside_attractor, "step functions live on [0,1]");
  const double cells = static_cast<double>(values_.size());
  const auto k = std::min(static_cast<std::size_t>(std::floor(x * cells)), values_.size() - 1);
  return values_[k];
}

StepWalsh apply_step_isometry(std::span<const cplx> filter, std::size_t filter_index,
                              const StepWalsh& s) {
  const std::size_t n = s.base();
  if (filter.size() != n) throw Error(Errc::wrong_arity, "filter length must equal the base");
  const std::size_t tail = s.values().size();
  std::vector<cplx> values(tail * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < tail; ++k) values[j * tail + k] = filter[j] * s.values()[k];
  }
  std::vector<std::size_t> word = s.word();
  word.insert(word.begin(), filter_index);
  return StepWalsh(n, s.level() + 1, std::move(values), std::move(word));
}

StepWalsh apply_step_adjoint(std::span<const cplx> filter, const StepWalsh& s) {
  const std::size_t n = s.base();
  if (filter.size() != n) throw Error(Errc::wrong_arity, "filter length must equal the base");
  const StepWalsh base = s.level() == 0 ? s.refined(1) : s;
  const std::size_t tail = base.values().size() / n;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<cplx> values(tail);
  for (std::size_t k = 0; k < tail; ++k) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += std::conj(filter[j]) * base.values()[j * tail + k];
    values[k] = sum * inv_n;
  }
  return StepWalsh(n, base.level() - 1, std::move(values));
}

cplx step_inner_product(const StepWalsh& f, const StepWalsh& g) {
  if (f.base() != g.base()) throw Error(Errc::mixed_systems, "step functions on different scales");
  const std::size_t level = std::max(f.level(), g.level());
  const std::size_t count = ipow(f.base(), level);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) sum += f.value_at(k, level) * std::conj(g.value_at(k, level));
  return sum / static_cast<double>(count);
}

}  // namespace fonb
