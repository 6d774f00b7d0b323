#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fonb/error.hpp"
#include "fonb/ifs.hpp"

namespace fonb {

/// gamma * e^{2 pi i freq x} on one cylinder, in the global coordinate x.
struct ExpPiece {
  cplx coef{1.0, 0.0};
  double freq = 0.0;
};

/// Operator word and cycle point an element of E(L) was generated from:
/// the function S_{l_1} ... S_{l_n} e_{-c}.
struct Provenance {
  std::vector<double> word;
  double cycle_point = 0.0;
};

/// A function on X_B that is gamma_w e^{2 pi i f_w x} on every depth-n
/// cylinder tau_w(X_B). Pieces are stored for all N^n words, the first
/// letter b_1 being the most significant base-N digit of the index.
///
/// Generated basis elements have unimodular coefficients; adjoints and
/// linear combinations are allowed to leave that set.
class PiecewiseExp {
 public:
  PiecewiseExp(AffineIFS ifs, std::size_t depth, std::vector<ExpPiece> pieces,
               Provenance provenance = {});

  static PiecewiseExp exponential(AffineIFS ifs, double freq, cplx coef = 1.0);

  const AffineIFS& ifs() const noexcept { return ifs_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t cylinder_count() const noexcept { return pieces_.size(); }
  std::span<const ExpPiece> pieces() const noexcept { return pieces_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

  /// Piece covering the depth-`at_depth` cylinder `index` (at_depth >= depth()).
  const ExpPiece& piece_at(std::size_t index, std::size_t at_depth) const;

  /// Same function described at a finer uniform depth.
  PiecewiseExp refined(std::size_t depth) const;

  /// Smallest uniform depth that still describes the function: sibling
  /// cylinders with matching (coef, freq) are merged while possible.
  PiecewiseExp coarsened(double tol = 1e-12) const;

  /// Structural equality of the piece tables after refinement to a common depth.
  bool same_as(const PiecewiseExp& other, double tol = 1e-12) const;

  bool unimodular(double tol = 1e-12) const;

  /// Throws OutsideAttractor.
  cplx operator()(double x) const;

  /// Evaluation when the first depth() address letters of x are already known.
  cplx evaluate_with_address(std::span<const std::size_t> address, double x) const;

 private:
  AffineIFS ifs_;
  std::size_t depth_;
  std::vector<ExpPiece> pieces_;
  Provenance provenance_;
};

inline cplx eval_piecewise_exp(const PiecewiseExp& pe, double x) { return pe(x); }

/// (coef, freq) equality with tolerance scaled by the frequency magnitude,
/// since phases e^{-2 pi i f b} inherit the rounding of f * b.
bool pieces_match(const ExpPiece& a, const ExpPiece& b, double max_abs_digit, double tol);

/// Translates t_w of all depth-n cylinders, in cylinder-index order.
std::vector<double> cylinder_translates(const AffineIFS& ifs, std::size_t depth);

/// S_l for the exponential filter e_l: x -> e_l(x) p(r x). Depth grows by one.
PiecewiseExp apply_exponential_isometry(const PiecewiseExp& p, double l);

/// S_l^* for the exponential filter e_l in closed form. Available when, for
/// every tail word w', the pieces on the cylinders b w' share one frequency
/// (always true for elements of the form S_w e_t); nullopt otherwise.
std::optional<PiecewiseExp> apply_exponential_adjoint(const PiecewiseExp& p, double l);

}  // namespace fonb
