#include "fonb/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "fonb/cycles.hpp"

namespace fonb {

cplx inner_product(const PiecewiseExp& p, const PiecewiseExp& q, double eps) {
  if (!(p.ifs() == q.ifs())) throw Error(Errc::mixed_systems, "inner product across different systems");
  const AffineIFS& ifs = p.ifs();
  const std::size_t depth = std::max(p.depth(), q.depth());
  const std::vector<double> translates = cylinder_translates(ifs, depth);
  const double contraction = std::pow(ifs.scale(), -static_cast<double>(depth));
  const double weight = std::pow(static_cast<double>(ifs.size()), -static_cast<double>(depth));
  const MeasureFT ft(ifs, eps);

  // Siblings usually share a frequency, so mu_hat is cached per difference.
  double cached_delta = 0.0;
  cplx cached_ft = 1.0;
  bool have_cache = false;
  cplx sum = 0.0;
  for (std::size_t w = 0; w < translates.size(); ++w) {
    const ExpPiece& a = p.piece_at(w, depth);
    const ExpPiece& b = q.piece_at(w, depth);
    const double delta = a.freq - b.freq;
    if (!have_cache || delta != cached_delta) {
      cached_delta = delta;
      cached_ft = ft(contraction * delta);
      have_cache = true;
    }
    sum += a.coef * std::conj(b.coef) * expi(delta * translates[w]) * cached_ft;
  }
  return sum * weight;
}

McEstimate inner_product_mc(const PiecewiseExp& p, const PiecewiseExp& q, std::size_t samples,
                            std::uint64_t seed) {
  if (!(p.ifs() == q.ifs())) throw Error(Errc::mixed_systems, "inner product across different systems");
  if (samples < 2) throw Error(Errc::invalid_argument, "need at least two samples");
  const std::size_t depth = std::max(p.depth(), q.depth());
  const auto draws = sample_with_addresses(p.ifs(), samples, seed, depth);
  std::vector<cplx> values(draws.size());
  cplx mean = 0.0;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const auto& s = draws[k];
    values[k] = p.evaluate_with_address(s.prefix, s.x) * std::conj(q.evaluate_with_address(s.prefix, s.x));
    mean += values[k];
  }
  const auto n = static_cast<double>(samples);
  mean /= n;
  double var = 0.0;
  for (const cplx& v : values) var += std::norm(v - mean);
  var /= n - 1.0;
  return {mean, std::sqrt(var / n), samples};
}

namespace {

GramReport summarize(Eigen::MatrixXcd m, double tol, std::string method) {
  GramReport report;
  report.size = static_cast<std::size_t>(m.rows());
  report.tol = tol;
  report.method = std::move(method);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i == j) {
        report.max_diag_deviation = std::max(report.max_diag_deviation, std::abs(m(i, j) - 1.0));
      } else {
        report.max_off_diagonal = std::max(report.max_off_diagonal, std::abs(m(i, j)));
      }
    }
  }
  report.pass = report.max_diag_deviation <= tol && report.max_off_diagonal <= tol;
  report.matrix = std::move(m);
  return report;
}

}  // namespace

GramReport gram_matrix(std::span<const PiecewiseExp> elements, double eps, double tol) {
  if (elements.empty()) throw Error(Errc::invalid_argument, "Gram matrix of an empty family");
  const auto k = static_cast<Eigen::Index>(elements.size());
  Eigen::MatrixXcd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      m(i, j) = inner_product(elements[i], elements[j], eps);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return summarize(std::move(m), tol, "product-formula");
}

GramReport walsh_gram(std::span<const StepWalsh> elements, double tol) {
  if (elements.empty()) throw Error(Errc::invalid_argument, "Gram matrix of an empty family");
  const auto k = static_cast<Eigen::Index>(elements.size());
  Eigen::MatrixXcd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = step_inner_product(elements[i], elements[j]);
  }
  return summarize(std::move(m), tol, "exact-step");
}

double parseval_h(const AffineIFS& ifs, std::span<const PiecewiseExp> elements, double t, double eps) {
  const PiecewiseExp probe = PiecewiseExp::exponential(ifs, -t);
  double sum = 0.0;
  for (const PiecewiseExp& e : elements) sum += std::norm(inner_product(probe, e, eps));
  return sum;
}

std::vector<double> parseval_curve(const AffineIFS& ifs, std::span<const PiecewiseExp> elements, double t,
                                   std::size_t max_len, double eps) {
  const PiecewiseExp probe = PiecewiseExp::exponential(ifs, -t);
  std::vector<double> by_length(max_len + 1, 0.0);
  for (const PiecewiseExp& e : elements) {
    const std::size_t len = e.provenance().word.size();
    if (len <= max_len) by_length[len] += std::norm(inner_product(probe, e, eps));
  }
  std::vector<double> curve(max_len + 1);
  double running = 0.0;
  for (std::size_t k = 0; k <= max_len; ++k) {
    running += by_length[k];
    curve[k] = running;
  }
  return curve;
}

TransferGrid make_transfer_grid(std::span<const double> dual, double scale, std::size_t points, double widen,
                                double value) {
  if (points < 2) throw Error(Errc::invalid_argument, "transfer grid needs at least two points");
  if (!(widen >= 0.0)) throw Error(Errc::invalid_argument, "widening must be nonnegative");
  const Interval hull = candidate_interval(dual, scale);
  const double margin = 0.5 * widen * std::max(hull.width(), 1e-12);
  TransferGrid grid;
  grid.a = hull.lo - margin;
  grid.b = hull.hi + margin;
  grid.t.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid.t[i] = grid.a + (grid.b - grid.a) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  grid.h.assign(points, value);
  return grid;
}

TransferGrid transfer_iterate(const AffineIFS& ifs, std::span<const double> dual, const TransferGrid& h0,
                              std::size_t iters) {
  const std::size_t m = h0.t.size();
  if (m < 2 || h0.h.size() != m) throw Error(Errc::invalid_argument, "malformed transfer grid");
  if (iters == 0) throw Error(Errc::invalid_argument, "iters must be at least 1");
  const double span = h0.b - h0.a;
  const double slack = 1e-12 * std::max(1.0, span);

  struct Tap {
    std::size_t left;
    double frac;
    double weight;
  };
  std::vector<Tap> taps;
  taps.reserve(m * dual.size());
  for (double t : h0.t) {
    for (double l : dual) {
      const double g = (t + l) / ifs.scale();
      if (g < h0.a - slack || g > h0.b + slack) {
        throw Error(Errc::grid_too_coarse, "g_l maps the grid outside its interval");
      }
      const double pos = std::clamp((g - h0.a) / span, 0.0, 1.0) * static_cast<double>(m - 1);
      const auto left = std::min(static_cast<std::size_t>(pos), m - 2);
      taps.push_back({left, pos - static_cast<double>(left), std::norm(ifs.mask(g))});
    }
  }

  TransferGrid cur = h0;
  std::vector<double> next(m);
  for (std::size_t it = 0; it < iters; ++it) {
    const Tap* tap = taps.data();
    for (std::size_t i = 0; i < m; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < dual.size(); ++k, ++tap) {
        const double v = (1.0 - tap->frac) * cur.h[tap->left] + tap->frac * cur.h[tap->left + 1];
        sum += tap->weight * v;
      }
      next[i] = sum;
    }
    cur.h.swap(next);
  }
  return cur;
}

}  // namespace fonb
