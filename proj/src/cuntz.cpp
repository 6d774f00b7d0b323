#include "fonb/cuntz.hpp"

#include <algorithm>
#include <cmath>

namespace fonb {

cplx evaluate(const Function& f, double x) {
  return std::visit([x](const auto& g) -> cplx { return g(x); }, f);
}

Evaluable as_evaluable(Function f) {
  if (auto* g = std::get_if<Evaluable>(&f)) return std::move(*g);
  return [f = std::move(f)](double x) { return evaluate(f, x); };
}

CuntzRep::CuntzRep(AffineIFS ifs, QmfBasis basis) : ifs_(std::move(ifs)), basis_(std::move(basis)) {
  if (basis_.size() != ifs_.size()) {
    throw Error(Errc::wrong_arity, "a Cuntz representation needs N = |B| filters");
  }
}

CuntzRep CuntzRep::validated(AffineIFS ifs, QmfBasis basis, std::span<const double> grid, double tol) {
  const QmfReport report = is_qmf_basis(ifs, basis, grid, tol);
  if (!report.pass) {
    throw Error(Errc::not_qmf_basis, "filters fail the QMF basis check, max deviation " +
                                         std::to_string(report.max_deviation));
  }
  return CuntzRep(std::move(ifs), std::move(basis));
}

namespace {

bool step_ready(const CuntzRep& rep, const FilterFunction& m, const StepWalsh& s) {
  const StepFilter* step = m.as_step();
  return step != nullptr && rep.ifs().is_unit_interval() && step->values.size() == rep.size() &&
         s.base() == rep.size();
}

void check_index(const CuntzRep& rep, std::size_t i) {
  if (i >= rep.size()) throw Error(Errc::index_out_of_range, "isometry index out of range");
}

}  // namespace

Function apply_S(const CuntzRep& rep, std::size_t i, const Function& f) {
  check_index(rep, i);
  const FilterFunction& m = rep.basis()[i];
  if (const auto* pe = std::get_if<PiecewiseExp>(&f)) {
    if (const Exponential* e = m.as_exponential(); e && pe->ifs() == rep.ifs()) {
      return apply_exponential_isometry(*pe, e->frequency);
    }
  }
  if (const auto* s = std::get_if<StepWalsh>(&f); s && step_ready(rep, m, *s)) {
    return apply_step_isometry(m.as_step()->values, i, *s);
  }
  Evaluable g = as_evaluable(f);
  return Evaluable([m, g = std::move(g), ifs = rep.ifs()](double x) { return m(x) * g(ifs.r_map(x)); });
}

Function apply_S_star(const CuntzRep& rep, std::size_t i, const Function& f) {
  check_index(rep, i);
  const FilterFunction& m = rep.basis()[i];
  if (const auto* pe = std::get_if<PiecewiseExp>(&f)) {
    if (const Exponential* e = m.as_exponential(); e && pe->ifs() == rep.ifs()) {
      if (auto closed = apply_exponential_adjoint(*pe, e->frequency)) return std::move(*closed);
    }
  }
  if (const auto* s = std::get_if<StepWalsh>(&f); s && step_ready(rep, m, *s)) {
    return apply_step_adjoint(m.as_step()->values, *s);
  }
  Evaluable g = as_evaluable(f);
  return Evaluable([m, g = std::move(g), ifs = rep.ifs()](double z) {
    cplx sum = 0.0;
    for (std::size_t b = 0; b < ifs.size(); ++b) {
      const double w = ifs.tau(b, z);
      sum += std::conj(m(w)) * g(w);
    }
    return sum / static_cast<double>(ifs.size());
  });
}

Function apply_word(const CuntzRep& rep, const OperatorWord& w, const Function& f) {
  Function out = f;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out = apply_S(rep, *it, out);
  return out;
}

CuntzReport verify_cuntz(const CuntzRep& rep, std::span<const Function> test_functions,
                         std::span<const double> grid, double tol) {
  if (test_functions.empty()) throw Error(Errc::invalid_argument, "verify_cuntz needs test functions");
  if (grid.empty()) throw Error(Errc::invalid_argument, "empty verification grid");
  const std::size_t n = rep.size();
  CuntzReport report;
  report.grid_size = grid.size();
  report.functions = test_functions.size();
  report.tol = tol;

  for (const Function& f : test_functions) {
    std::vector<cplx> reference(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) reference[k] = evaluate(f, grid[k]);

    std::vector<Function> images;
    images.reserve(n);
    for (std::size_t j = 0; j < n; ++j) images.push_back(apply_S(rep, j, f));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Function back = apply_S_star(rep, i, images[j]);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const cplx expected = i == j ? reference[k] : cplx(0.0);
          report.max_orthogonality_defect =
              std::max(report.max_orthogonality_defect, std::abs(evaluate(back, grid[k]) - expected));
        }
      }
    }

    std::vector<cplx> total(grid.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Function projected = apply_S(rep, i, apply_S_star(rep, i, f));
      for (std::size_t k = 0; k < grid.size(); ++k) total[k] += evaluate(projected, grid[k]);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      report.max_completeness_defect = std::max(report.max_completeness_defect, std::abs(total[k] - reference[k]));
    }
  }
  report.pass = report.max_orthogonality_defect <= tol && report.max_completeness_defect <= tol;
  return report;
}

}  // namespace fonb
