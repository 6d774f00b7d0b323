#pragma once

// Filters on the attractor, the conditional expectation onto r-pullbacks,
// QMF and QMF-basis checks, spectrum / Hadamard-pair tests, and the
// correspondence between QMF bases and unitary-matrix-valued maps.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fonb/error.hpp"
#include "fonb/ifs.hpp"
#include "fonb/piecewise_exp.hpp"

namespace fonb {

using Evaluable = std::function<cplx(double)>;

struct Exponential {
  double frequency = 0.0;
};

/// values[j] on [j/N, (j+1)/N); callers pass the already scaled sqrt(N) a_ij.
struct StepFilter {
  std::vector<cplx> values;
};

class FilterFunction {
 public:
  using Rep = std::variant<Exponential, StepFilter, std::shared_ptr<const PiecewiseExp>, Evaluable>;

  static FilterFunction exponential(double frequency) { return FilterFunction(Exponential{frequency}); }
  static FilterFunction step(std::vector<cplx> values) { return FilterFunction(StepFilter{std::move(values)}); }
  static FilterFunction piecewise(PiecewiseExp pe) {
    return FilterFunction(std::make_shared<const PiecewiseExp>(std::move(pe)));
  }
  static FilterFunction general(Evaluable f) { return FilterFunction(std::move(f)); }

  cplx operator()(double x) const;
  const Rep& rep() const noexcept { return rep_; }

  const Exponential* as_exponential() const noexcept { return std::get_if<Exponential>(&rep_); }
  const StepFilter* as_step() const noexcept { return std::get_if<StepFilter>(&rep_); }

 private:
  explicit FilterFunction(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

struct QmfBasis {
  std::vector<FilterFunction> filters;
  std::size_t size() const noexcept { return filters.size(); }
  const FilterFunction& operator[](std::size_t i) const { return filters.at(i); }
};

QmfBasis exponential_basis(std::span<const double> frequencies);

// ---------------------------------------------------------------------------

/// max |M M^* - I| over all entries.
double unitarity_defect(const Eigen::MatrixXcd& m);

class UnitaryMatrix {
 public:
  /// Throws NotUnitary when the defect exceeds `tol`.
  static UnitaryMatrix from_matrix(Eigen::MatrixXcd entries, double tol = 1e-10);

  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  cplx operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double defect() const noexcept { return defect_; }
  /// Every first-row entry equals 1/sqrt(N) within 1e-12.
  bool first_row_constant() const noexcept { return first_row_constant_; }

 private:
  UnitaryMatrix(Eigen::MatrixXcd entries, double defect, bool first_row_constant)
      : entries_(std::move(entries)), defect_(defect), first_row_constant_(first_row_constant) {}

  Eigen::MatrixXcd entries_;
  double defect_;
  bool first_row_constant_;
};

/// Haar-style random unitary from the QR factorisation of a seeded complex
/// Gaussian matrix. With `constant_first_row` the first row is replaced by
/// 1/sqrt(N) and the rest re-orthonormalised.
UnitaryMatrix random_unitary(std::size_t n, std::uint64_t seed, bool constant_first_row = false);

/// Matrix-valued map z -> A(z): a constant, a step function of z, or a callable.
class MatrixField {
 public:
  static MatrixField constant(UnitaryMatrix m);
  /// matrices[k] applies on [cuts[k-1], cuts[k]), open-ended at both ends.
  static MatrixField piecewise(std::vector<double> cuts, std::vector<UnitaryMatrix> matrices);
  static MatrixField from_function(std::size_t n, std::function<Eigen::MatrixXcd(double)> f);

  Eigen::MatrixXcd operator()(double z) const;
  std::size_t size() const noexcept { return n_; }
  const UnitaryMatrix* constant_value() const noexcept {
    return cuts_.empty() && !fn_ && matrices_.size() == 1 ? &matrices_.front() : nullptr;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> cuts_;
  std::vector<UnitaryMatrix> matrices_;
  std::function<Eigen::MatrixXcd(double)> fn_;
};

// ---------------------------------------------------------------------------

/// E(f)(z) = (1/N) sum_{r(w)=z} f(w) = (1/N) sum_b f(tau_b z).
template <class F>
cplx cond_expectation(const AffineIFS& ifs, const F& f, double z) {
  cplx sum = 0.0;
  for (std::size_t b = 0; b < ifs.size(); ++b) sum += f(ifs.tau(b, z));
  return sum / static_cast<double>(ifs.size());
}

/// `size` attractor points spread uniformly in mu_B: one per depth-D word
/// (N^D >= size), each placed at an interior point of its cylinder so that no
/// grid point sits on a cylinder boundary.
std::vector<double> verification_grid(const AffineIFS& ifs, std::size_t size = 512);

struct QmfReport {
  bool pass = false;
  double max_deviation = 0.0;
  std::size_t grid_size = 0;
  double tol = 0.0;
};

QmfReport is_qmf(const AffineIFS& ifs, const FilterFunction& m, std::span<const double> grid,
                 double tol = 1e-10);

/// Throws WrongArity when the filter count differs from N.
QmfReport is_qmf_basis(const AffineIFS& ifs, const QmfBasis& basis, std::span<const double> grid,
                       double tol = 1e-10);

struct SpectrumReport {
  bool pass = false;
  double defect = 0.0;
  Eigen::MatrixXcd matrix;  // (1/sqrt N) [e^{2 pi i (R^{-1} b) lambda}], rows b, columns lambda
};

/// Is `candidates` a spectrum for R^{-1} B? Throws WrongArity when |Lambda| != |B|.
SpectrumReport is_spectrum(std::span<const double> digits, double scale,
                           std::span<const double> candidates, double tol = 1e-10);

/// d-dimensional form: points are columns' worth of coordinates, R a d x d matrix.
SpectrumReport is_spectrum(const std::vector<Eigen::VectorXd>& digits, const Eigen::MatrixXd& scale,
                           const std::vector<Eigen::VectorXd>& candidates, double tol = 1e-10);

/// (B, L) with scaling R, all integer. Throws NonIntegerInput otherwise.
SpectrumReport is_hadamard_pair(std::span<const double> digits, std::span<const double> dual,
                                double scale, double tol = 1e-10);
SpectrumReport is_hadamard_pair(const std::vector<Eigen::VectorXi>& digits,
                                const std::vector<Eigen::VectorXi>& dual, const Eigen::MatrixXi& scale,
                                double tol = 1e-10);

/// A_ij(z) = (1/N) sum_{r(w)=z} m'_i(w) conj(m_j(w)). Throws NotUnitary.
UnitaryMatrix basis_to_matrix(const AffineIFS& ifs, const QmfBasis& new_basis,
                              const QmfBasis& ref_basis, double z, double tol = 1e-10);

/// The whole map z -> A(z), evaluated lazily.
MatrixField basis_to_matrix_field(const AffineIFS& ifs, const QmfBasis& new_basis,
                                  const QmfBasis& ref_basis);

/// m'_i(z) = sum_j A_ij(r z) m_j(z). The field is checked for unitarity on
/// r(grid) (NotUnitary). Step reference filters with a constant field give
/// step filters back; everything else is evaluated lazily.
QmfBasis matrix_to_basis(const AffineIFS& ifs, const QmfBasis& ref_basis, const MatrixField& field,
                         std::span<const double> grid, double tol = 1e-10);

/// sum_i E(f conj m_i)(r z) m_i(z). The conditional expectation is read on
/// the fibre r^{-1}(r z) that contains z.
cplx decompose(const AffineIFS& ifs, const Evaluable& f, const QmfBasis& basis, double z);

/// The coefficients E(f conj m_i)(r z) of the expansion above.
std::vector<cplx> qmf_coefficients(const AffineIFS& ifs, const Evaluable& f, const QmfBasis& basis,
                                   double z);

/// (1/sqrt N) [m_i(tau_b z)]_{i, b}; unitary for a QMF basis.
Eigen::MatrixXcd fibre_matrix(const AffineIFS& ifs, const QmfBasis& basis, double z);

}  // namespace fonb
