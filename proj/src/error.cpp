#include "fonb/error.hpp"

namespace fonb {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::outside_attractor: return "OutsideAttractor";
    case Errc::wrong_arity: return "WrongArity";
    case Errc::not_unitary: return "NotUnitary";
    case Errc::not_qmf_basis: return "NotQmfBasis";
    case Errc::non_integer_input: return "NonIntegerInput";
    case Errc::not_a_spectrum: return "NotASpectrum";
    case Errc::first_row_not_constant: return "FirstRowNotConstant";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::grid_too_coarse: return "GridTooCoarse";
    case Errc::mixed_systems: return "MixedSystems";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fonb
