#pragma once

#include "dysmooth/mesh.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace dysmooth {

/// Largest difference order; C(30, k) is exact in 64-bit integers.
inline constexpr int kMaxOrder = 30;
/// From this order on, differences use compensated summation.
inline constexpr int kCompensatedFromOrder = 8;

/// C(r, k) for 0 <= k <= r <= kMaxOrder (0 outside that range of k).
std::int64_t binomial(int r, int k);

/// Throws a capacity error unless 1 <= r <= kMaxOrder.
void check_order(int r);

/// sum_{k=0}^{r} (-1)^{r-k} C(r,k) values[k]. Requires exactly r+1 values.
double forward_diff(std::span<const double> values, int r);

/// r-th difference of the field along `axis` (0-based) at mesh index k,
/// stepping `stride` cells: values at k, k + s e_axis, ..., k + r s e_axis.
double grid_diff(const SampleField& field, std::span<const std::int64_t> k, int axis, int r, int stride = 1);

/// Direction of a continuous difference: a 0-based axis or a unit vector.
using Direction = std::variant<int, std::vector<double>>;

struct DiffRequest {
  int order = 1;
  Direction direction = 0;
  double step = 0.0;
  Point base;
};

/// Unit vector of `direction` in dimension d; validates |e| = 1 within 1e-12.
std::vector<double> direction_vector(const Direction& direction, int d);

/// r-th difference of an analytic source along direction e with step h
/// from `base`. Both base and base + r h e must lie in I^d.
double continuous_diff(const FunctionSource& source, const DiffRequest& request);

}  // namespace dysmooth
