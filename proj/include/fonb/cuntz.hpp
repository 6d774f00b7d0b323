#pragma once

// Cuntz isometries S_i f = m_i (f o r) on L^2(X, mu) built from a QMF basis,
// their adjoints, word operators, and a grid check of the Cuntz relations.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "fonb/filters.hpp"
#include "fonb/ifs.hpp"
#include "fonb/piecewise_exp.hpp"
#include "fonb/step_walsh.hpp"

namespace fonb {

/// A vector of L^2(mu): symbolic when possible, a lazy callable otherwise.
using Function = std::variant<PiecewiseExp, StepWalsh, Evaluable>;

cplx evaluate(const Function& f, double x);
Evaluable as_evaluable(Function f);

class CuntzRep {
 public:
  /// No validation; use `validated` when the basis must be a QMF basis.
  CuntzRep(AffineIFS ifs, QmfBasis basis);

  /// Throws NotQmfBasis when is_qmf_basis fails on `grid`.
  static CuntzRep validated(AffineIFS ifs, QmfBasis basis, std::span<const double> grid,
                            double tol = 1e-10);

  const AffineIFS& ifs() const noexcept { return ifs_; }
  const QmfBasis& basis() const noexcept { return basis_; }
  std::size_t size() const noexcept { return basis_.size(); }

 private:
  AffineIFS ifs_;
  QmfBasis basis_;
};

/// Letters are filter indices; S_w = S_{w_1} ... S_{w_n}.
struct OperatorWord {
  std::vector<std::size_t> letters;
};

Function apply_S(const CuntzRep& rep, std::size_t i, const Function& f);
Function apply_S_star(const CuntzRep& rep, std::size_t i, const Function& f);
Function apply_word(const CuntzRep& rep, const OperatorWord& w, const Function& f);

struct CuntzReport {
  bool pass = false;
  double max_orthogonality_defect = 0.0;  // |S_i^* S_j f - delta_ij f|
  double max_completeness_defect = 0.0;   // |sum_i S_i S_i^* f - f|
  std::size_t grid_size = 0;
  std::size_t functions = 0;
  double tol = 0.0;
};

CuntzReport verify_cuntz(const CuntzRep& rep, std::span<const Function> test_functions,
                         std::span<const double> grid, double tol = 1e-10);

}  // namespace fonb
