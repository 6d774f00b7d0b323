#include "fonb/ifs.hpp"

#include <algorithm>
#include <cmath>

namespace fonb {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

AffineIFS::AffineIFS(double scale, std::vector<double> digits)
    : scale_(scale), digits_(std::move(digits)) {
  if (!(scale_ > 1.0) || !std::isfinite(scale_)) {
    throw Error(Errc::invalid_argument, "scale R must be a finite number > 1");
  }
  if (digits_.size() < 2) {
    throw Error(Errc::invalid_argument, "digit set B needs at least two elements");
  }
  by_value_.resize(digits_.size());
  for (std::size_t i = 0; i < by_value_.size(); ++i) by_value_[i] = i;
  std::stable_sort(by_value_.begin(), by_value_.end(),
                   [&](std::size_t a, std::size_t b) { return digits_[a] < digits_[b]; });
  bool has_zero = false;
  for (std::size_t k = 0; k < by_value_.size(); ++k) {
    const double d = digits_[by_value_[k]];
    if (!std::isfinite(d)) throw Error(Errc::invalid_argument, "digits must be finite");
    if (d == 0.0) has_zero = true;
    if (k > 0 && d == digits_[by_value_[k - 1]]) {
      throw Error(Errc::invalid_argument, "digits must be distinct");
    }
    max_abs_digit_ = std::max(max_abs_digit_, std::abs(d));
  }
  if (!has_zero) throw Error(Errc::invalid_argument, "digit set B must contain 0");

  hull_ = {digits_[by_value_.front()] / (scale_ - 1.0), digits_[by_value_.back()] / (scale_ - 1.0)};
  membership_depth_ = static_cast<std::size_t>(std::ceil(std::log(1e12) / std::log(scale_)));
  membership_tol_ = 1e-12 * std::max({1.0, std::abs(hull_.lo), std::abs(hull_.hi)});
}

AffineIFS AffineIFS::unit_interval(std::size_t n) {
  std::vector<double> digits(n);
  for (std::size_t j = 0; j < n; ++j) digits[j] = static_cast<double>(j);
  return AffineIFS(static_cast<double>(n), std::move(digits));
}

bool AffineIFS::is_unit_interval() const noexcept {
  if (scale_ != static_cast<double>(digits_.size())) return false;
  for (std::size_t j = 0; j < digits_.size(); ++j) {
    if (digits_[j] != static_cast<double>(j)) return false;
  }
  return true;
}

std::optional<std::size_t> AffineIFS::index_of(double digit_value, double tol) const {
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (std::abs(digits_[i] - digit_value) <= tol) return i;
  }
  return std::nullopt;
}

double AffineIFS::tau(std::size_t digit_index, double x) const {
  return (x + digits_.at(digit_index)) / scale_;
}

bool AffineIFS::descend(double x, std::size_t level, double translate, double contraction,
                        std::size_t depth, std::vector<std::size_t>& path) const {
  if (level == depth) return true;
  const double child_contraction = contraction / scale_;
  for (std::size_t idx : by_value_) {
    const double t = translate + child_contraction * digits_[idx];
    const Interval cell{t + child_contraction * hull_.lo, t + child_contraction * hull_.hi};
    if (!cell.contains(x, membership_tol_)) continue;
    path.push_back(idx);
    if (descend(x, level + 1, t, child_contraction, depth, path)) return true;
    path.pop_back();
  }
  return false;
}

std::optional<std::vector<std::size_t>> AffineIFS::address(double x, std::size_t depth) const {
  if (!std::isfinite(x) || !hull_.contains(x, membership_tol_)) return std::nullopt;
  std::vector<std::size_t> path;
  const std::size_t full = std::max(depth, membership_depth_);
  path.reserve(full);
  if (!descend(x, 0, 0.0, 1.0, full, path)) return std::nullopt;
  path.resize(depth);
  return path;
}

BranchInfo AffineIFS::resolve_branch(double x) const {
  if (!std::isfinite(x) || !hull_.contains(x, membership_tol_)) {
    throw Error(Errc::outside_attractor, "point lies outside the attractor hull");
  }
  BranchInfo info;
  std::size_t hits = 0;
  std::vector<std::size_t> path;
  const double c = 1.0 / scale_;
  for (std::size_t idx : by_value_) {
    const double t = c * digits_[idx];
    const Interval cell{t + c * hull_.lo, t + c * hull_.hi};
    if (!cell.contains(x, membership_tol_)) continue;
    path.assign(1, idx);
    if (!descend(x, 1, t, c, membership_depth_, path)) continue;
    if (hits == 0) info.digit = idx;
    ++hits;
  }
  if (hits == 0) throw Error(Errc::outside_attractor, "point lies in no cylinder");
  info.ambiguous = hits > 1;
  return info;
}

double AffineIFS::r_map(double x) const {
  const BranchInfo branch = resolve_branch(x);
  return scale_ * x - digits_[branch.digit];
}

double AffineIFS::attractor_point(std::span<const std::size_t> digit_indices) const {
  double y = 0.0;
  for (auto it = digit_indices.rbegin(); it != digit_indices.rend(); ++it) {
    y = (y + digits_.at(*it)) / scale_;
  }
  return y;
}

double attractor_point(const AffineIFS& ifs, std::span<const std::size_t> digit_indices) {
  return ifs.attractor_point(digit_indices);
}

CylinderData AffineIFS::cylinder(const CylinderWord& word) const {
  CylinderData out;
  double contraction = 1.0;
  const double inv_n = 1.0 / static_cast<double>(digits_.size());
  for (std::size_t letter : word.letters) {
    contraction /= scale_;
    out.translate += contraction * digits_.at(letter);
    out.measure *= inv_n;
  }
  return out;
}

cplx AffineIFS::mask(double x) const noexcept {
  cplx sum = 0.0;
  for (double b : digits_) sum += expi(b * x);
  return sum / static_cast<double>(digits_.size());
}

// ---------------------------------------------------------------------------

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(mix64(seed + kGolden) ^ mix64((stream + 1) * 0xd1b54a32d192ed03ULL)) {}

std::uint64_t CounterRng::next() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

std::size_t CounterRng::below(std::size_t n) noexcept {
  const unsigned __int128 wide = static_cast<unsigned __int128>(next()) * n;
  return static_cast<std::size_t>(wide >> 64);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t sampling_depth(const AffineIFS& ifs, double tail) {
  std::size_t depth = 0;
  double bound = ifs.max_abs_digit() / (ifs.scale() - 1.0);
  while (bound >= tail) {
    bound /= ifs.scale();
    ++depth;
  }
  return depth;
}

std::vector<AddressedSample> sample_with_addresses(const AffineIFS& ifs, std::size_t count,
                                                   std::uint64_t seed, std::size_t prefix_depth) {
  const std::size_t depth = std::max(sampling_depth(ifs), prefix_depth);
  std::vector<AddressedSample> out(count);
  std::vector<std::size_t> digits(depth);
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng(seed, i);
    for (auto& d : digits) d = rng.below(ifs.size());
    out[i].x = ifs.attractor_point(digits);
    out[i].prefix.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(prefix_depth));
  }
  return out;
}

std::vector<double> sample_measure(const AffineIFS& ifs, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(Errc::invalid_argument, "sample count must be positive");
  const std::size_t depth = sampling_depth(ifs);
  std::vector<double> out(count);
  std::vector<std::size_t> digits(depth);
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng(seed, i);
    for (auto& d : digits) d = rng.below(ifs.size());
    out[i] = ifs.attractor_point(digits);
  }
  return out;
}

// ---------------------------------------------------------------------------

MeasureFT::MeasureFT(AffineIFS system, double eps) : ifs(std::move(system)), truncation_eps(eps) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "truncation eps must be positive");
}

std::size_t MeasureFT::factors_for(double t) const {
  std::size_t k = 0;
  double s = std::abs(t);
  while (kTwoPi * s * ifs.max_abs_digit() >= truncation_eps) {
    s /= ifs.scale();
    ++k;
  }
  return k;
}

cplx MeasureFT::operator()(double t) const {
  const std::size_t factors = factors_for(t);
  cplx product = 1.0;
  double s = t;
  for (std::size_t k = 0; k < factors; ++k) {
    s /= ifs.scale();
    product *= ifs.mask(s);
  }
  return product;
}

McEstimate mc_integrate(const AffineIFS& ifs, const std::function<cplx(double)>& f,
                        std::size_t samples, std::uint64_t seed) {
  const auto points = sample_measure(ifs, samples, seed);
  cplx sum = 0.0;
  double sum_sq = 0.0;
  for (double x : points) {
    const cplx v = f(x);
    sum += v;
    sum_sq += std::norm(v);
  }
  const double n = static_cast<double>(samples);
  McEstimate est;
  est.mean = sum / n;
  est.samples = samples;
  const double var = std::max(0.0, sum_sq / n - std::norm(est.mean));
  est.std_error = std::sqrt(var / n);
  return est;
}

StrongInvarianceReport check_strong_invariance(const AffineIFS& ifs,
                                               std::span<const double> frequencies,
                                               std::size_t samples, std::uint64_t seed) {
  if (samples < 10000) {
    throw Error(Errc::invalid_argument, "strong-invariance check needs at least 10^4 samples");
  }
  StrongInvarianceReport report;
  report.samples = samples;
  const auto lhs_points = sample_measure(ifs, samples, seed);
  const auto rhs_points = sample_measure(ifs, samples, mix64(seed ^ 0x5bd1e9955bd1e995ULL));
  const double n = static_cast<double>(samples);
  const double inv_digits = 1.0 / static_cast<double>(ifs.size());

  for (double t : frequencies) {
    cplx lhs = 0.0, rhs = 0.0;
    double lhs_sq = 0.0, rhs_sq = 0.0;
    for (double x : lhs_points) {
      const cplx v = expi(t * x);
      lhs += v;
      lhs_sq += std::norm(v);
    }
    for (double z : rhs_points) {
      cplx v = 0.0;
      for (std::size_t b = 0; b < ifs.size(); ++b) v += expi(t * ifs.tau(b, z));
      v *= inv_digits;
      rhs += v;
      rhs_sq += std::norm(v);
    }
    StrongInvarianceRow row;
    row.frequency = t;
    row.lhs = lhs / n;
    row.rhs = rhs / n;
    row.gap = std::abs(row.lhs - row.rhs);
    const double var_l = std::max(0.0, lhs_sq / n - std::norm(row.lhs));
    const double var_r = std::max(0.0, rhs_sq / n - std::norm(row.rhs));
    row.sigma = std::sqrt((var_l + var_r) / n);
    row.within_3sigma = row.gap <= 3.0 * row.sigma;
    report.max_gap = std::max(report.max_gap, row.gap);
    report.pass = report.pass && row.within_3sigma;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace fonb
