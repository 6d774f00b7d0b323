#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace fonb {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

enum class Errc {
  outside_attractor,
  wrong_arity,
  not_unitary,
  not_qmf_basis,
  non_integer_input,
  not_a_spectrum,
  first_row_not_constant,
  index_out_of_range,
  grid_too_coarse,
  mixed_systems,
  length_mismatch,
  invalid_argument,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// e^{2 pi i turns}. The integer part of `turns` is removed before scaling,
/// so large arguments keep their fractional accuracy and expi(-x) == conj(expi(x)).
inline cplx expi(double turns) noexcept {
  const double frac = turns - std::nearbyint(turns);
  const double theta = kTwoPi * frac;
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace fonb
