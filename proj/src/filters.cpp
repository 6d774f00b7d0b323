#include "fonb/filters.hpp"

#include <algorithm>
#include <cmath>

namespace fonb {

namespace {

std::size_t check_square(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(Errc::wrong_arity, "matrix must be square");
  return static_cast<std::size_t>(m.rows());
}

void check_arity(const AffineIFS& ifs, const QmfBasis& basis) {
  if (basis.size() != ifs.size()) {
    throw Error(Errc::wrong_arity, "a QMF basis needs exactly N = |B| filters, got " +
                                       std::to_string(basis.size()));
  }
}

bool is_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9; }

cplx gaussian(CounterRng& rng) {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u = 1.0 - rng.uniform();
  const double v = rng.uniform();
  const double radius = std::sqrt(-2.0 * std::log(u));
  return {radius * std::cos(kTwoPi * v), radius * std::sin(kTwoPi * v)};
}

}  // namespace

cplx FilterFunction::operator()(double x) const {
  return std::visit(
      [x](const auto& rep) -> cplx {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return expi(rep.frequency * x);
        } else if constexpr (std::is_same_v<T, StepFilter>) {
          if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
            throw Error(Errc::outside_attractor, "step filters live on [0,1]");
          }
          const std::size_t n = rep.values.size();
          const double cell = std::floor(std::clamp(x, 0.0, 1.0) * static_cast<double>(n));
          return rep.values[std::min(static_cast<std::size_t>(cell), n - 1)];
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const PiecewiseExp>>) {
          return (*rep)(x);
        } else {
          return rep(x);
        }
      },
      rep_);
}

QmfBasis exponential_basis(std::span<const double> frequencies) {
  QmfBasis basis;
  for (double f : frequencies) basis.filters.push_back(FilterFunction::exponential(f));
  return basis;
}

// ---------------------------------------------------------------------------

double unitarity_defect(const Eigen::MatrixXcd& m) {
  const std::size_t n = check_square(m);
  const Eigen::MatrixXcd gram = m * m.adjoint();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n),
                                                         static_cast<Eigen::Index>(n));
  return (gram - id).cwiseAbs().maxCoeff();
}

UnitaryMatrix UnitaryMatrix::from_matrix(Eigen::MatrixXcd entries, double tol) {
  const std::size_t n = check_square(entries);
  const double defect = unitarity_defect(entries);
  if (!(defect <= tol)) {
    throw Error(Errc::not_unitary, "unitarity defect " + std::to_string(defect) + " exceeds tolerance");
  }
  const double target = 1.0 / std::sqrt(static_cast<double>(n));
  bool constant = true;
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    if (std::abs(entries(0, j) - target) > 1e-12) constant = false;
  }
  return UnitaryMatrix(std::move(entries), defect, constant);
}

UnitaryMatrix random_unitary(std::size_t n, std::uint64_t seed, bool constant_first_row) {
  if (n == 0) throw Error(Errc::invalid_argument, "matrix size must be positive");
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd v(dim, dim);
  CounterRng rng(seed, 0x756e6974ULL);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) v(i, j) = gaussian(rng);
  }
  const double root = 1.0 / std::sqrt(static_cast<double>(n));
  if (constant_first_row) v.col(0).setConstant(cplx(root, 0.0));

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const cplx d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  Eigen::MatrixXcd a = constant_first_row ? Eigen::MatrixXcd(q.adjoint()) : q;
  if (constant_first_row) a.row(0).setConstant(cplx(root, 0.0));
  return UnitaryMatrix::from_matrix(std::move(a), 1e-10);
}

MatrixField MatrixField::constant(UnitaryMatrix m) {
  MatrixField f;
  f.n_ = m.size();
  f.matrices_.push_back(std::move(m));
  return f;
}

MatrixField MatrixField::piecewise(std::vector<double> cuts, std::vector<UnitaryMatrix> matrices) {
  if (matrices.empty() || matrices.size() != cuts.size() + 1) {
    throw Error(Errc::wrong_arity, "piecewise field needs one more matrix than cut points");
  }
  if (!std::is_sorted(cuts.begin(), cuts.end())) {
    throw Error(Errc::invalid_argument, "cut points must be increasing");
  }
  MatrixField f;
  f.n_ = matrices.front().size();
  for (const auto& m : matrices) {
    if (m.size() != f.n_) throw Error(Errc::wrong_arity, "matrices differ in size");
  }
  f.cuts_ = std::move(cuts);
  f.matrices_ = std::move(matrices);
  return f;
}

MatrixField MatrixField::from_function(std::size_t n, std::function<Eigen::MatrixXcd(double)> fn) {
  MatrixField f;
  f.n_ = n;
  f.fn_ = std::move(fn);
  return f;
}

Eigen::MatrixXcd MatrixField::operator()(double z) const {
  if (fn_) return fn_(z);
  const auto k = static_cast<std::size_t>(std::upper_bound(cuts_.begin(), cuts_.end(), z) - cuts_.begin());
  return matrices_[k].entries();
}

// ---------------------------------------------------------------------------

std::vector<double> verification_grid(const AffineIFS& ifs, std::size_t size) {
  if (size == 0) throw Error(Errc::invalid_argument, "grid size must be positive");
  const std::size_t n = ifs.size();
  std::size_t depth = 0;
  unsigned __int128 words = 1;
  while (words < size) {
    words *= n;
    ++depth;
  }
  // Tail alternating between the smallest and largest digit: a point of X_B
  // whose expansion is not eventually constant, hence not a cylinder endpoint.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ifs.digit(a) < ifs.digit(b); });
  const std::size_t tail = sampling_depth(ifs, 1e-17) + 1;

  std::vector<double> grid(size);
  std::vector<std::size_t> digits(depth + tail);
  for (std::size_t t = 0; t < tail; ++t) digits[depth + t] = t % 2 == 0 ? order.front() : order.back();
  for (std::size_t k = 0; k < size; ++k) {
    auto q = static_cast<std::size_t>(static_cast<unsigned __int128>(k) * words / size);
    for (std::size_t level = depth; level-- > 0;) {
      digits[level] = q % n;
      q /= n;
    }
    grid[k] = ifs.attractor_point(digits);
  }
  return grid;
}

QmfReport is_qmf(const AffineIFS& ifs, const FilterFunction& m, std::span<const double> grid, double tol) {
  if (grid.empty()) throw Error(Errc::invalid_argument, "empty verification grid");
  QmfReport report;
  report.grid_size = grid.size();
  report.tol = tol;
  for (double z : grid) {
    const double avg = cond_expectation(ifs, [&](double w) { return cplx(std::norm(m(w)), 0.0); }, z).real();
    report.max_deviation = std::max(report.max_deviation, std::abs(avg - 1.0));
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

QmfReport is_qmf_basis(const AffineIFS& ifs, const QmfBasis& basis, std::span<const double> grid, double tol) {
  check_arity(ifs, basis);
  if (grid.empty()) throw Error(Errc::invalid_argument, "empty verification grid");
  const std::size_t n = ifs.size();
  QmfReport report;
  report.grid_size = grid.size();
  report.tol = tol;
  std::vector<cplx> values(n * n);
  for (double z : grid) {
    for (std::size_t b = 0; b < n; ++b) {
      const double w = ifs.tau(b, z);
      for (std::size_t i = 0; i < n; ++i) values[i * n + b] = basis[i](w);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        cplx sum = 0.0;
        for (std::size_t b = 0; b < n; ++b) sum += values[i * n + b] * std::conj(values[j * n + b]);
        sum /= static_cast<double>(n);
        const double target = i == j ? 1.0 : 0.0;
        report.max_deviation = std::max(report.max_deviation, std::abs(sum - target));
      }
    }
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

SpectrumReport is_spectrum(std::span<const double> digits, double scale,
                           std::span<const double> candidates, double tol) {
  if (digits.size() != candidates.size() || digits.empty()) {
    throw Error(Errc::wrong_arity, "spectrum candidate must have |B| elements");
  }
  if (scale == 0.0) throw Error(Errc::invalid_argument, "scale must be nonzero");
  const auto n = static_cast<Eigen::Index>(digits.size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  SpectrumReport report;
  report.matrix.resize(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index l = 0; l < n; ++l) {
      report.matrix(b, l) = norm * expi(digits[static_cast<std::size_t>(b)] / scale *
                                        candidates[static_cast<std::size_t>(l)]);
    }
  }
  report.defect = unitarity_defect(report.matrix);
  report.pass = report.defect <= tol;
  return report;
}

SpectrumReport is_spectrum(const std::vector<Eigen::VectorXd>& digits, const Eigen::MatrixXd& scale,
                           const std::vector<Eigen::VectorXd>& candidates, double tol) {
  if (digits.size() != candidates.size() || digits.empty()) {
    throw Error(Errc::wrong_arity, "spectrum candidate must have |B| elements");
  }
  const Eigen::Index d = scale.rows();
  if (scale.cols() != d) throw Error(Errc::wrong_arity, "scale matrix must be square");
  for (const auto& v : digits) {
    if (v.size() != d) throw Error(Errc::wrong_arity, "digit dimension mismatch");
  }
  for (const auto& v : candidates) {
    if (v.size() != d) throw Error(Errc::wrong_arity, "candidate dimension mismatch");
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(scale);
  const auto n = static_cast<Eigen::Index>(digits.size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  SpectrumReport report;
  report.matrix.resize(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const Eigen::VectorXd scaled = lu.solve(digits[static_cast<std::size_t>(b)]);
    for (Eigen::Index l = 0; l < n; ++l) {
      report.matrix(b, l) = norm * expi(scaled.dot(candidates[static_cast<std::size_t>(l)]));
    }
  }
  report.defect = unitarity_defect(report.matrix);
  report.pass = report.defect <= tol;
  return report;
}

SpectrumReport is_hadamard_pair(std::span<const double> digits, std::span<const double> dual,
                                double scale, double tol) {
  const bool integral = is_integer(scale) && std::all_of(digits.begin(), digits.end(), is_integer) &&
                        std::all_of(dual.begin(), dual.end(), is_integer);
  if (!integral) throw Error(Errc::non_integer_input, "Hadamard pairs need integer B, L and R");
  return is_spectrum(digits, scale, dual, tol);
}

SpectrumReport is_hadamard_pair(const std::vector<Eigen::VectorXi>& digits,
                                const std::vector<Eigen::VectorXi>& dual, const Eigen::MatrixXi& scale,
                                double tol) {
  std::vector<Eigen::VectorXd> b, l;
  for (const auto& v : digits) b.push_back(v.cast<double>());
  for (const auto& v : dual) l.push_back(v.cast<double>());
  return is_spectrum(b, scale.cast<double>(), l, tol);
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXcd raw_change_of_basis(const AffineIFS& ifs, const QmfBasis& new_basis,
                                     const QmfBasis& ref_basis, double z) {
  const std::size_t n = ifs.size();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t b = 0; b < n; ++b) {
    const double w = ifs.tau(b, z);
    std::vector<cplx> fresh(n), ref(n);
    for (std::size_t i = 0; i < n; ++i) {
      fresh[i] = new_basis[i](w);
      ref[i] = std::conj(ref_basis[i](w));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += fresh[i] * ref[j];
      }
    }
  }
  return a / static_cast<double>(n);
}

}  // namespace

UnitaryMatrix basis_to_matrix(const AffineIFS& ifs, const QmfBasis& new_basis, const QmfBasis& ref_basis,
                              double z, double tol) {
  check_arity(ifs, new_basis);
  check_arity(ifs, ref_basis);
  return UnitaryMatrix::from_matrix(raw_change_of_basis(ifs, new_basis, ref_basis, z), tol);
}

MatrixField basis_to_matrix_field(const AffineIFS& ifs, const QmfBasis& new_basis, const QmfBasis& ref_basis) {
  check_arity(ifs, new_basis);
  check_arity(ifs, ref_basis);
  return MatrixField::from_function(ifs.size(), [ifs, new_basis, ref_basis](double z) {
    return raw_change_of_basis(ifs, new_basis, ref_basis, z);
  });
}

QmfBasis matrix_to_basis(const AffineIFS& ifs, const QmfBasis& ref_basis, const MatrixField& field,
                         std::span<const double> grid, double tol) {
  check_arity(ifs, ref_basis);
  const std::size_t n = ifs.size();
  if (field.size() != n) throw Error(Errc::wrong_arity, "matrix field size must equal N");

  if (const UnitaryMatrix* a = field.constant_value()) {
    if (a->defect() > tol) throw Error(Errc::not_unitary, "constant matrix is not unitary");
    const bool all_steps = std::all_of(ref_basis.filters.begin(), ref_basis.filters.end(),
                                       [](const FilterFunction& f) { return f.as_step() != nullptr; });
    QmfBasis out;
    for (std::size_t i = 0; i < n; ++i) {
      if (all_steps) {
        const std::size_t cells = ref_basis[0].as_step()->values.size();
        std::vector<cplx> values(cells, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          const auto& ref = ref_basis[j].as_step()->values;
          if (ref.size() != cells) throw Error(Errc::wrong_arity, "step filters differ in length");
          for (std::size_t c = 0; c < cells; ++c) values[c] += (*a)(i, j) * ref[c];
        }
        out.filters.push_back(FilterFunction::step(std::move(values)));
      } else {
        std::vector<cplx> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = (*a)(i, j);
        out.filters.push_back(FilterFunction::general([row, ref_basis](double z) {
          cplx sum = 0.0;
          for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * ref_basis[j](z);
          return sum;
        }));
      }
    }
    return out;
  }

  for (double z : grid) {
    const double defect = unitarity_defect(field(ifs.r_map(z)));
    if (!(defect <= tol)) {
      throw Error(Errc::not_unitary, "matrix field is not unitary at z = " + std::to_string(z));
    }
  }
  QmfBasis out;
  for (std::size_t i = 0; i < n; ++i) {
    out.filters.push_back(FilterFunction::general([i, ifs, ref_basis, field](double z) {
      const Eigen::MatrixXcd a = field(ifs.r_map(z));
      cplx sum = 0.0;
      for (std::size_t j = 0; j < ref_basis.size(); ++j) {
        sum += a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * ref_basis[j](z);
      }
      return sum;
    }));
  }
  return out;
}

std::vector<cplx> qmf_coefficients(const AffineIFS& ifs, const Evaluable& f, const QmfBasis& basis, double z) {
  check_arity(ifs, basis);
  const double base = ifs.r_map(z);
  std::vector<cplx> coeffs(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    coeffs[i] = cond_expectation(ifs, [&](double w) { return f(w) * std::conj(basis[i](w)); }, base);
  }
  return coeffs;
}

cplx decompose(const AffineIFS& ifs, const Evaluable& f, const QmfBasis& basis, double z) {
  const auto coeffs = qmf_coefficients(ifs, f, basis, z);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) sum += coeffs[i] * basis[i](z);
  return sum;
}

Eigen::MatrixXcd fibre_matrix(const AffineIFS& ifs, const QmfBasis& basis, double z) {
  check_arity(ifs, basis);
  const auto n = static_cast<Eigen::Index>(ifs.size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const double w = ifs.tau(static_cast<std::size_t>(b), z);
    for (Eigen::Index i = 0; i < n; ++i) m(i, b) = norm * basis[static_cast<std::size_t>(i)](w);
  }
  return m;
}

}  // namespace fonb
