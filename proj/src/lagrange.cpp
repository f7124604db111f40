#include "dysmooth/lagrange.hpp"

#include <cmath>

namespace dysmooth {

void uniform_lagrange_basis(int r, double s, std::span<double> out) {
  for (int i = 0; i < r; ++i) {
    double value = 1.0;
    for (int m = 0; m < r; ++m) {
      if (m == i) continue;
      value *= (s - m) / static_cast<double>(i - m);
    }
    out[static_cast<std::size_t>(i)] = value;
  }
}

double uniform_lebesgue_function(int r, double s) {
  std::vector<double> basis(static_cast<std::size_t>(r));
  uniform_lagrange_basis(r, s, basis);
  double sum = 0.0;
  for (double b : basis) sum += std::abs(b);
  return sum;
}

TensorLagrange::TensorLagrange(int r, int d)
    : r_(r), d_(d), nodes_(1), basis_(static_cast<std::size_t>(r * d)) {
  for (int j = 0; j < d; ++j) nodes_ *= static_cast<std::size_t>(r);
  fold_.resize(nodes_ / static_cast<std::size_t>(r));
}

// Contracts the last axis first, then folds the remaining axes in place.
double TensorLagrange::evaluate(std::span<const double> node_values, std::span<const double> s) const {
  const auto r = static_cast<std::size_t>(r_);
  for (int j = 0; j < d_; ++j)
    uniform_lagrange_basis(r_, s[static_cast<std::size_t>(j)],
                           std::span<double>(basis_).subspan(static_cast<std::size_t>(j) * r, r));
  auto dot = [r](const double* w, const double* v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r; ++i)
      if (w[i] != 0.0) acc += w[i] * v[i];
    return acc;
  };
  if (d_ == 1) return dot(basis_.data(), node_values.data());
  std::size_t width = nodes_ / r;
  const double* last = basis_.data() + static_cast<std::size_t>(d_ - 1) * r;
  for (std::size_t q = 0; q < width; ++q) fold_[q] = dot(last, node_values.data() + q * r);
  for (int j = d_ - 2; j >= 1; --j) {
    width /= r;
    const double* w = basis_.data() + static_cast<std::size_t>(j) * r;
    for (std::size_t q = 0; q < width; ++q) fold_[q] = dot(w, fold_.data() + q * r);
  }
  return dot(basis_.data(), fold_.data());
}

}  // namespace dysmooth
