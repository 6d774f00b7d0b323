#include "fonb/piecewise_exp.hpp"

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

PiecewiseExp::PiecewiseExp(AffineIFS ifs, std::size_t depth, std::vector<ExpPiece> pieces,
                           Provenance provenance)
    : ifs_(std::move(ifs)), depth_(depth), pieces_(std::move(pieces)),
      provenance_(std::move(provenance)) {
  if (pieces_.size() != ipow(ifs_.size(), depth_)) {
    throw Error(Errc::wrong_arity, "piecewise exponential needs N^depth pieces");
  }
}

PiecewiseExp PiecewiseExp::exponential(AffineIFS ifs, double freq, cplx coef) {
  return PiecewiseExp(std::move(ifs), 0, {ExpPiece{coef, freq}}, Provenance{{}, -freq});
}

const ExpPiece& PiecewiseExp::piece_at(std::size_t index, std::size_t at_depth) const {
  if (at_depth < depth_) throw Error(Errc::index_out_of_range, "depth below element depth");
  return pieces_[index / ipow(ifs_.size(), at_depth - depth_)];
}

PiecewiseExp PiecewiseExp::refined(std::size_t depth) const {
  if (depth <= depth_) return *this;
  const std::size_t count = ipow(ifs_.size(), depth);
  std::vector<ExpPiece> pieces(count);
  for (std::size_t i = 0; i < count; ++i) pieces[i] = piece_at(i, depth);
  return PiecewiseExp(ifs_, depth, std::move(pieces), provenance_);
}

bool pieces_match(const ExpPiece& a, const ExpPiece& b, double max_abs_digit, double tol) {
  const double scale = std::max(1.0, std::abs(a.freq));
  if (std::abs(a.freq - b.freq) > tol * scale) return false;
  return std::abs(a.coef - b.coef) <= tol * std::max(1.0, scale * max_abs_digit);
}

PiecewiseExp PiecewiseExp::coarsened(double tol) const {
  const std::size_t n = ifs_.size();
  std::size_t depth = depth_;
  std::vector<ExpPiece> pieces = pieces_;
  while (depth > 0) {
    const std::size_t parents = pieces.size() / n;
    bool uniform = true;
    for (std::size_t p = 0; p < parents && uniform; ++p) {
      for (std::size_t c = 1; c < n; ++c) {
        if (!pieces_match(pieces[p * n], pieces[p * n + c], ifs_.max_abs_digit(), tol)) {
          uniform = false;
          break;
        }
      }
    }
    if (!uniform) break;
    std::vector<ExpPiece> merged(parents);
    for (std::size_t p = 0; p < parents; ++p) merged[p] = pieces[p * n];
    pieces = std::move(merged);
    --depth;
  }
  return PiecewiseExp(ifs_, depth, std::move(pieces), provenance_);
}

bool PiecewiseExp::same_as(const PiecewiseExp& other, double tol) const {
  if (!(ifs_ == other.ifs_)) return false;
  const std::size_t depth = std::max(depth_, other.depth_);
  const std::size_t count = ipow(ifs_.size(), depth);
  for (std::size_t i = 0; i < count; ++i) {
    if (!pieces_match(piece_at(i, depth), other.piece_at(i, depth), ifs_.max_abs_digit(), tol)) {
      return false;
    }
  }
  return true;
}

bool PiecewiseExp::unimodular(double tol) const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [&](const ExpPiece& p) { return std::abs(std::abs(p.coef) - 1.0) <= tol; });
}

cplx PiecewiseExp::evaluate_with_address(std::span<const std::size_t> address, double x) const {
  if (address.size() < depth_) throw Error(Errc::index_out_of_range, "address too short");
  std::size_t index = 0;
  for (std::size_t k = 0; k < depth_; ++k) index = index * ifs_.size() + address[k];
  const ExpPiece& p = pieces_[index];
  return p.coef * expi(p.freq * x);
}

cplx PiecewiseExp::operator()(double x) const {
  const auto address = ifs_.address(x, depth_);
  if (!address) throw Error(Errc::outside_attractor, "cannot evaluate outside the attractor");
  return evaluate_with_address(*address, x);
}

std::vector<double> cylinder_translates(const AffineIFS& ifs, std::size_t depth) {
  std::vector<double> current{0.0};
  double contraction = 1.0;
  for (std::size_t level = 0; level < depth; ++level) {
    contraction /= ifs.scale();
    std::vector<double> next;
    next.reserve(current.size() * ifs.size());
    for (double t : current) {
      for (std::size_t b = 0; b < ifs.size(); ++b) next.push_back(t + contraction * ifs.digit(b));
    }
    current = std::move(next);
  }
  return current;
}

PiecewiseExp apply_exponential_isometry(const PiecewiseExp& p, double l) {
  const AffineIFS& ifs = p.ifs();
  const std::size_t tail = p.cylinder_count();
  std::vector<ExpPiece> pieces(tail * ifs.size());
  for (std::size_t b = 0; b < ifs.size(); ++b) {
    const double digit = ifs.digit(b);
    for (std::size_t w = 0; w < tail; ++w) {
      const ExpPiece& q = p.pieces()[w];
      // e_l(x) * gamma * e^{2 pi i f (R x - b)} on the cylinder b w.
      pieces[b * tail + w] = {q.coef * expi(-q.freq * digit), l + ifs.scale() * q.freq};
    }
  }
  Provenance prov = p.provenance();
  prov.word.insert(prov.word.begin(), l);
  return PiecewiseExp(ifs, p.depth() + 1, std::move(pieces), std::move(prov));
}

std::optional<PiecewiseExp> apply_exponential_adjoint(const PiecewiseExp& p, double l) {
  const AffineIFS& ifs = p.ifs();
  const PiecewiseExp base = p.depth() == 0 ? p.refined(1) : p;
  const std::size_t tail = base.cylinder_count() / ifs.size();
  const double inv_n = 1.0 / static_cast<double>(ifs.size());
  std::vector<ExpPiece> pieces(tail);
  for (std::size_t w = 0; w < tail; ++w) {
    const double f = base.pieces()[w].freq;
    const double shifted = (f - l) / ifs.scale();
    cplx sum = 0.0;
    for (std::size_t b = 0; b < ifs.size(); ++b) {
      const ExpPiece& q = base.pieces()[b * tail + w];
      if (std::abs(q.freq - f) > 1e-12 * std::max(1.0, std::abs(f))) return std::nullopt;
      sum += q.coef * expi(shifted * ifs.digit(b));
    }
    pieces[w] = {sum * inv_n, shifted};
  }
  return PiecewiseExp(ifs, base.depth() - 1, std::move(pieces));
}

}  // namespace fonb
