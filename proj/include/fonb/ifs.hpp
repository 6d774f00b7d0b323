#pragma once

// One-dimensional affine iterated function systems tau_b(x) = (x + b) / R,
// their attractor X_B, the invariant (Hutchinson) measure mu_B and the
// N-to-1 map r that undoes the branches.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fonb/error.hpp"

namespace fonb {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x, double slack = 0.0) const noexcept {
    return x >= lo - slack && x <= hi + slack;
  }
};

/// A word b_1 ... b_n of digit indices. The cylinder it names is
/// tau_{b_1} o ... o tau_{b_n}(X_B); the empty word is the whole attractor.
struct CylinderWord {
  std::vector<std::size_t> letters;
  std::size_t size() const noexcept { return letters.size(); }
};

struct CylinderData {
  double translate = 0.0;  // t_w, so tau_w(x) = R^{-n} x + t_w
  double measure = 1.0;    // mu_B of the cylinder, N^{-n}
};

struct BranchInfo {
  std::size_t digit = 0;   // index into B
  bool ambiguous = false;  // x sat on the boundary of two first-level cylinders
};

class AffineIFS {
 public:
  /// Throws Error(invalid_argument) unless R > 1, N >= 2, 0 in B and the
  /// digits are distinct.
  AffineIFS(double scale, std::vector<double> digits);

  /// B = {0, ..., n-1}, R = n: Lebesgue measure on [0, 1].
  static AffineIFS unit_interval(std::size_t n);

  double scale() const noexcept { return scale_; }
  std::size_t size() const noexcept { return digits_.size(); }
  std::span<const double> digits() const noexcept { return digits_; }
  double digit(std::size_t index) const { return digits_.at(index); }
  double max_abs_digit() const noexcept { return max_abs_digit_; }
  std::optional<std::size_t> index_of(double digit_value, double tol = 1e-12) const;

  /// Convex hull of X_B: [min B / (R - 1), max B / (R - 1)].
  Interval hull() const noexcept { return hull_; }

  /// True when B = {0, ..., N-1} and R = N.
  bool is_unit_interval() const noexcept;

  double tau(std::size_t digit_index, double x) const;

  /// First `depth` letters of a digit expansion of x, checked down to the
  /// membership depth ceil(log_R 1e12). Boundary ties go to the smaller digit.
  /// Empty optional when x is not in the attractor.
  std::optional<std::vector<std::size_t>> address(double x, std::size_t depth) const;

  /// Throws OutsideAttractor.
  BranchInfo resolve_branch(double x) const;

  /// r(x) = R x - b for the branch b whose cylinder holds x.
  double r_map(double x) const;

  bool contains(double x) const { return address(x, 0).has_value(); }

  /// sum_k R^{-k} b_k over the given digit indices.
  double attractor_point(std::span<const std::size_t> digit_indices) const;

  CylinderData cylinder(const CylinderWord& word) const;

  /// m_B(x) = (1/N) sum_b e^{2 pi i b x}.
  cplx mask(double x) const noexcept;

  std::size_t membership_depth() const noexcept { return membership_depth_; }
  double membership_tol() const noexcept { return membership_tol_; }

  bool operator==(const AffineIFS& other) const noexcept {
    return scale_ == other.scale_ && digits_ == other.digits_;
  }

 private:
  bool descend(double x, std::size_t level, double translate, double contraction,
               std::size_t depth, std::vector<std::size_t>& path) const;

  double scale_;
  std::vector<double> digits_;
  std::vector<std::size_t> by_value_;  // digit indices in increasing digit order
  double max_abs_digit_ = 0.0;
  Interval hull_;
  std::size_t membership_depth_ = 0;
  double membership_tol_ = 1e-12;
};

inline double tau(const AffineIFS& ifs, std::size_t digit_index, double x) {
  return ifs.tau(digit_index, x);
}
inline double r_map(const AffineIFS& ifs, double x) { return ifs.r_map(x); }
inline cplx m_B(const AffineIFS& ifs, double x) noexcept { return ifs.mask(x); }
inline CylinderData cylinder_data(const AffineIFS& ifs, const CylinderWord& w) {
  return ifs.cylinder(w);
}
double attractor_point(const AffineIFS& ifs, std::span<const std::size_t> digit_indices);

// ---------------------------------------------------------------------------
// Seeded sampling

/// SplitMix64 keyed by (seed, stream). Each sample owns its own stream, so a
/// run split over any number of workers draws the same numbers.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;
  std::uint64_t next() noexcept;
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) noexcept;
  /// Uniform double in [0, 1).
  double uniform() noexcept;

 private:
  std::uint64_t state_;
};

/// Number of random digits needed so that the dropped tail is below `tail`.
std::size_t sampling_depth(const AffineIFS& ifs, double tail = 1e-12);

/// `count` draws from mu_B. Deterministic in (ifs, count, seed).
std::vector<double> sample_measure(const AffineIFS& ifs, std::size_t count, std::uint64_t seed);

struct AddressedSample {
  double x = 0.0;
  std::vector<std::size_t> prefix;  // first digits of the expansion that produced x
};

/// Like sample_measure, additionally keeping the first `prefix_depth` digits,
/// so cylinder lookups need no branch resolution.
std::vector<AddressedSample> sample_with_addresses(const AffineIFS& ifs, std::size_t count,
                                                   std::uint64_t seed, std::size_t prefix_depth);

// ---------------------------------------------------------------------------
// Fourier transform of mu_B and Monte-Carlo integration

struct MeasureFT {
  MeasureFT(AffineIFS system, double eps = 1e-10);

  /// prod_{k=1..K} m_B(R^{-k} t), K the least index with
  /// 2 pi R^{-K} |t| max|B| < eps.
  cplx operator()(double t) const;
  std::size_t factors_for(double t) const;

  AffineIFS ifs;
  double truncation_eps;
};

inline cplx mu_hat(const MeasureFT& mft, double t) { return mft(t); }

struct McEstimate {
  cplx mean;
  double std_error = 0.0;  // sqrt(E|f - mean|^2 / n)
  std::size_t samples = 0;
};

McEstimate mc_integrate(const AffineIFS& ifs, const std::function<cplx(double)>& f,
                        std::size_t samples, std::uint64_t seed);

struct StrongInvarianceRow {
  double frequency = 0.0;
  cplx lhs;         // integral of e_t
  cplx rhs;         // integral of (1/N) sum_{r(w)=z} e_t(w)
  double gap = 0.0;
  double sigma = 0.0;  // combined standard error of lhs - rhs
  bool within_3sigma = true;
};

struct StrongInvarianceReport {
  std::vector<StrongInvarianceRow> rows;
  std::size_t samples = 0;
  double max_gap = 0.0;
  bool pass = true;  // every gap within its 3 sigma band
};

/// Monte-Carlo check of int f dmu = (1/N) int sum_{r(w)=z} f(w) dmu(z) for
/// f = e_t. The two sides use independent sample streams. samples >= 10^4.
StrongInvarianceReport check_strong_invariance(const AffineIFS& ifs,
                                               std::span<const double> frequencies,
                                               std::size_t samples, std::uint64_t seed);

}  // namespace fonb
