#pragma once

// Orthonormal families generated by the Cuntz isometries:
//  * E(L) = { S_w e_{-c} } on a fractal measure, as piecewise exponentials;
//  * the pure-exponential spectrum it collapses to when B, L, R are integers;
//  * generalized Walsh bases S_w 1 on [0, 1] from a unitary matrix with
//    constant first row.

#include <cstddef>
#include <span>
#include <vector>

#include "fonb/cycles.hpp"
#include "fonb/filters.hpp"
#include "fonb/ifs.hpp"
#include "fonb/piecewise_exp.hpp"
#include "fonb/step_walsh.hpp"

namespace fonb {

/// Breadth-first closure of { e_{-c} : c on an extreme cycle } under S_l,
/// l in L, up to operator words of length max_len. Elements are kept in
/// coarsened form and an element equal to an earlier one is dropped (and
/// not expanded), which absorbs the identifications S_l e_{-c} = e_{-d}.
std::vector<PiecewiseExp> gen_fractal_onb(const AffineIFS& ifs, std::span<const double> dual,
                                          std::span<const ExtremeCycle> cycles, std::size_t max_len);

/// alpha(b, l, c) = -[b_1 l_2 + (R b_1 + b_2) l_3 + ... + (R^{n-2} b_1 + ... + b_{n-1}) l_n]
///                  + (R^{n-1} b_1 + ... + b_n) c,
/// with digit values b and letters l. The piece on tau_{b_1..b_n} X_B carries
/// the coefficient e^{2 pi i alpha}.
double closed_form_alpha(std::span<const double> digit_word, std::span<const double> letter_word,
                         double cycle_point, double scale);

/// Frequency of S_{l_1..l_n} e_{-c}: l_1 + R l_2 + ... + R^{n-1} l_n - R^n c.
double closed_form_frequency(std::span<const double> letter_word, double cycle_point, double scale);

/// S_{l_1} ... S_{l_n} e_{-c} assembled piece by piece from the closed form,
/// at depth n (not coarsened).
PiecewiseExp closed_form_element(const AffineIFS& ifs, std::span<const double> letter_word,
                                 double cycle_point);

/// Frequencies of E(L) when B, L and R are integers; every element is then a
/// single exponential. Sorted, duplicates removed. Throws NonIntegerInput.
std::vector<double> integer_spectrum(const AffineIFS& ifs, std::span<const double> dual,
                                     std::span<const ExtremeCycle> cycles, std::size_t max_len);

// ---------------------------------------------------------------------------
// Walsh bases

/// m_i = sqrt(N) sum_j a_ij chi_[j/N, (j+1)/N). Throws FirstRowNotConstant.
QmfBasis walsh_filters(const UnitaryMatrix& a);

/// S_{i_0 .. i_{n-1}} 1 on [k / N^n, (k+1) / N^n), k = N^{n-1} j_0 + ... + j_{n-1}:
/// sqrt(N^n) a_{i_0 j_0} ... a_{i_{n-1} j_{n-1}}. Throws IndexOutOfRange.
cplx walsh_value(const UnitaryMatrix& a, std::span<const std::size_t> word, std::size_t k);

/// All S_w 1 with |w| <= max_len, duplicates dropped (S_0 1 = 1 makes a
/// trailing 0 redundant), giving N^max_len functions.
std::vector<StepWalsh> gen_walsh_basis(const UnitaryMatrix& a, std::size_t max_len);

/// Coefficients <s, S_w 1> of a signal sampled on the N^n cells, for all
/// words of length n. Coefficient index sum_t i_t N^{n-1-t} holds word i_0 .. i_{n-1}.
/// O(n N^{n+1}) by contracting one tensor axis at a time. Throws LengthMismatch.
std::vector<cplx> walsh_analyze(const UnitaryMatrix& a, std::span<const cplx> signal);

/// Inverse of walsh_analyze: sum_w c_w S_w 1 on the N^n cells.
std::vector<cplx> walsh_synthesize(const UnitaryMatrix& a, std::span<const cplx> coefficients);

/// n with N^n == length; throws LengthMismatch otherwise.
std::size_t walsh_level(std::size_t base, std::size_t length);

}  // namespace fonb
