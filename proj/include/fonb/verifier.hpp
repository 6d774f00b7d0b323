#pragma once

// Inner products on L^2(mu_B), Gram checks, Parseval sums and the transfer
// operator h -> sum_l |m_B(g_l t)|^2 h(g_l t).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fonb/ifs.hpp"
#include "fonb/piecewise_exp.hpp"
#include "fonb/step_walsh.hpp"

namespace fonb {

/// <p, q> = int p conj(q) dmu_B, summed over cylinders of the common depth n:
/// gamma conj(gamma') N^{-n} e^{2 pi i (f - f') t_w} mu_hat(R^{-n} (f - f')).
/// Throws MixedSystems.
cplx inner_product(const PiecewiseExp& p, const PiecewiseExp& q, double eps = 1e-10);

/// Monte-Carlo estimate of the same integral.
McEstimate inner_product_mc(const PiecewiseExp& p, const PiecewiseExp& q, std::size_t samples,
                            std::uint64_t seed);

struct GramReport {
  std::size_t size = 0;
  double max_off_diagonal = 0.0;
  double max_diag_deviation = 0.0;
  double tol = 0.0;
  std::string method;
  bool pass = false;
  Eigen::MatrixXcd matrix;
};

GramReport gram_matrix(std::span<const PiecewiseExp> elements, double eps = 1e-10, double tol = 1e-6);

/// Gram matrix of step functions on [0, 1], computed exactly.
GramReport walsh_gram(std::span<const StepWalsh> elements, double tol = 1e-12);

/// sum_e |<e_{-t}, e>|^2 over the given elements.
double parseval_h(const AffineIFS& ifs, std::span<const PiecewiseExp> elements, double t, double eps = 1e-10);

/// parseval_h restricted to elements whose generating word has length <= K,
/// for K = 0 .. max_len.
std::vector<double> parseval_curve(const AffineIFS& ifs, std::span<const PiecewiseExp> elements, double t,
                                   std::size_t max_len, double eps = 1e-10);

struct TransferGrid {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> t;
  std::vector<double> h;
};

/// Uniform grid over candidate_interval(L, R) widened by `widen` of its
/// width (half on each side), all values set to `value`.
TransferGrid make_transfer_grid(std::span<const double> dual, double scale, std::size_t points = 2048,
                                double widen = 0.1, double value = 1.0);

/// `iters` applications of the transfer operator, with linear interpolation
/// at the off-grid points g_l(t) = (t + l) / R. Throws GridTooCoarse.
TransferGrid transfer_iterate(const AffineIFS& ifs, std::span<const double> dual, const TransferGrid& h0,
                              std::size_t iters);

}  // namespace fonb
