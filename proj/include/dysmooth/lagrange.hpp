#pragma once

#include <span>
#include <vector>

namespace dysmooth {

/// Values l_0(s), ..., l_{r-1}(s) of the Lagrange basis on the uniform nodes
/// 0, 1, ..., r-1. At a node s = w the result is exactly the unit vector e_w.
void uniform_lagrange_basis(int r, double s, std::span<double> out);

/// Lebesgue function sum_i |l_i(s)| for the uniform nodes 0..r-1.
double uniform_lebesgue_function(int r, double s);

/// Tensor-product Lagrange interpolant on the r^d uniform grid {0..r-1}^d.
/// `node_values` is in lexicographic order (last axis fastest); `s` holds
/// local coordinates in [0, r-1]^d. Holds scratch space: use one instance
/// per thread.
class TensorLagrange {
 public:
  TensorLagrange(int r, int d);

  int order() const noexcept { return r_; }
  int dimension() const noexcept { return d_; }
  std::size_t node_count() const noexcept { return nodes_; }

  double evaluate(std::span<const double> node_values, std::span<const double> s) const;

 private:
  int r_;
  int d_;
  std::size_t nodes_;
  mutable std::vector<double> basis_;  // d * r scratch
  mutable std::vector<double> fold_;   // r^(d-1) partial sums
};

}  // namespace dysmooth
