#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fonb/error.hpp"

namespace fonb {

/// A step function on [0, 1] that is constant on the N^n intervals
/// [k / N^n, (k + 1) / N^n). `word` records the generating S_w 1.
class StepWalsh {
 public:
  StepWalsh(std::size_t base, std::size_t level, std::vector<cplx> values,
            std::vector<std::size_t> word = {});

  static StepWalsh constant(std::size_t base, cplx value = 1.0);

  std::size_t base() const noexcept { return base_; }
  std::size_t level() const noexcept { return level_; }
  std::span<const cplx> values() const noexcept { return values_; }
  const std::vector<std::size_t>& word() const noexcept { return word_; }

  cplx value_at(std::size_t index, std::size_t at_level) const;
  StepWalsh refined(std::size_t level) const;
  StepWalsh coarsened(double tol = 1e-12) const;
  bool same_as(const StepWalsh& other, double tol = 1e-12) const;

  /// L^2[0,1] norm squared: sum |v_k|^2 / N^n.
  double norm_squared() const;

  /// Value on the interval holding x; x = 1 belongs to the last interval.
  cplx operator()(double x) const;

 private:
  std::size_t base_;
  std::size_t level_;
  std::vector<cplx> values_;
  std::vector<std::size_t> word_;
};

/// S for the step filter with values `filter` (length N) on [j/N, (j+1)/N):
/// x -> filter[j_0] s(N x mod 1). Level grows by one.
StepWalsh apply_step_isometry(std::span<const cplx> filter, std::size_t filter_index,
                              const StepWalsh& s);

/// Adjoint of the above: z -> (1/N) sum_j conj(filter[j]) s((z + j) / N).
StepWalsh apply_step_adjoint(std::span<const cplx> filter, const StepWalsh& s);

/// <f, g> on L^2[0,1].
cplx step_inner_product(const StepWalsh& f, const StepWalsh& g);

}  // namespace fonb
