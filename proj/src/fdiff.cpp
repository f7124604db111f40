#include "dysmooth/fdiff.hpp"

#include "dysmooth/catalog.hpp"
#include "dysmooth/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace dysmooth {

namespace {

using BinomialTable = std::array<std::array<std::int64_t, kMaxOrder + 1>, kMaxOrder + 1>;

constexpr BinomialTable make_binomials() {
  BinomialTable table{};
  for (int r = 0; r <= kMaxOrder; ++r) {
    table[r][0] = 1;
    for (int k = 1; k <= r; ++k) table[r][k] = table[r - 1][k - 1] + (k <= r - 1 ? table[r - 1][k] : 0);
  }
  return table;
}

constexpr BinomialTable kBinomials = make_binomials();

// Signed weights (-1)^{r-k} C(r,k) as doubles; exact since C(30,15) < 2^53.
const std::array<double, kMaxOrder + 1>& signed_weights(int r) {
  static const auto table = [] {
    std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> t{};
    for (int order = 0; order <= kMaxOrder; ++order)
      for (int k = 0; k <= order; ++k)
        t[order][k] = ((order - k) % 2 ? -1.0 : 1.0) * static_cast<double>(kBinomials[order][k]);
    return t;
  }();
  return table[static_cast<std::size_t>(r)];
}

template <typename ValueAt>
double weighted_sum(int r, ValueAt&& value_at) {
  const auto& w = signed_weights(r);
  if (r < kCompensatedFromOrder) {
    double sum = 0.0;
    for (int k = 0; k <= r; ++k) sum += w[k] * value_at(k);
    return sum;
  }
  // Neumaier variant of Kahan summation.
  double sum = 0.0;
  double carry = 0.0;
  for (int k = 0; k <= r; ++k) {
    const double term = w[k] * value_at(k);
    const double next = sum + term;
    if (std::abs(sum) >= std::abs(term))
      carry += (sum - next) + term;
    else
      carry += (term - next) + sum;
    sum = next;
  }
  return sum + carry;
}

}  // namespace

std::int64_t binomial(int r, int k) {
  if (r < 0 || r > kMaxOrder) throw capacity_error(fmt::format("binomial order {} outside 0..{}", r, kMaxOrder));
  if (k < 0 || k > r) return 0;
  return kBinomials[r][k];
}

void check_order(int r) {
  if (r < 1 || r > kMaxOrder) throw capacity_error(fmt::format("difference order {} outside 1..{}", r, kMaxOrder));
}

double forward_diff(std::span<const double> values, int r) {
  check_order(r);
  if (values.size() != static_cast<std::size_t>(r) + 1)
    throw validation_error("arity", fmt::format("order-{} difference needs {} values, got {}", r, r + 1, values.size()));
  return weighted_sum(r, [&](int k) { return values[static_cast<std::size_t>(k)]; });
}

double grid_diff(const SampleField& field, std::span<const std::int64_t> k, int axis, int r, int stride) {
  check_order(r);
  const auto& grid = field.grid();
  if (axis < 0 || axis >= grid.dimension())
    throw validation_error("bounds", fmt::format("axis {} outside 1..{}", axis + 1, grid.dimension()));
  if (stride < 1) throw validation_error("bounds", fmt::format("stride {} must be positive", stride));
  if (!grid.contains(k)) {
    (void)grid.flat(k);  // throws with the offending axis
  }
  const auto reach = k[static_cast<std::size_t>(axis)] + static_cast<std::int64_t>(r) * stride;
  if (reach > grid.cells_per_axis())
    throw validation_error("bounds", fmt::format("difference on axis {} reaches offset {} beyond {}", axis + 1,
                                                 reach, grid.cells_per_axis()));
  const std::size_t base = grid.flat(k);
  const std::size_t step = grid.axis_stride(axis) * static_cast<std::size_t>(stride);
  return weighted_sum(r, [&](int j) { return field[base + static_cast<std::size_t>(j) * step]; });
}

std::vector<double> direction_vector(const Direction& direction, int d) {
  if (const int* axis = std::get_if<int>(&direction)) {
    if (*axis < 0 || *axis >= d) throw validation_error("domain", fmt::format("axis {} outside 1..{}", *axis + 1, d));
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(*axis)] = 1.0;
    return e;
  }
  const auto& e = std::get<std::vector<double>>(direction);
  if (static_cast<int>(e.size()) != d)
    throw validation_error("domain", fmt::format("direction has {} components, expected {}", e.size(), d));
  double norm2 = 0.0;
  for (double c : e) norm2 += c * c;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
    throw validation_error("domain", fmt::format("direction ({}) is not a unit vector", fmt::join(e, ", ")));
  return e;
}

double continuous_diff(const FunctionSource& source, const DiffRequest& request) {
  check_order(request.order);
  const int d = source.dimension();
  const auto& f = source.function();
  const auto e = direction_vector(request.direction, d);
  if (!(request.step > 0.0) || !std::isfinite(request.step))
    throw validation_error("domain", fmt::format("step {} must be positive", request.step));
  check_point(request.base, d);
  const double reach = static_cast<double>(request.order) * request.step;
  Point end(request.base);
  for (std::size_t j = 0; j < end.size(); ++j) end[j] += reach * e[j];
  for (std::size_t j = 0; j < end.size(); ++j)
    if (!(end[j] >= -kCubeTolerance && end[j] <= 1.0 + kCubeTolerance))
      throw validation_error("domain", fmt::format("segment leaves the cube: endpoint ({}) exits on axis {}",
                                                   fmt::join(end, ", "), j + 1));
  Point x(request.base.size());
  return weighted_sum(request.order, [&](int k) {
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] = std::clamp(request.base[j] + static_cast<double>(k) * request.step * e[j], 0.0, 1.0);
    return f(x);
  });
}

}  // namespace dysmooth
