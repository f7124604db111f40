#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace dysmooth {

/// Point of the unit cube; d coordinates in [0, 1].
using Point = std::vector<double>;

/// Integer multi-index k = (k_1, ..., k_d) addressing the mesh point 2^{-n} k.
using MultiIndex = std::vector<std::int64_t>;

/// Coordinates may stray outside [0, 1] by this much before a point is
/// considered off the cube.
inline constexpr double kCubeTolerance = 1e-12;

/// Throws a validation error ("domain") if any coordinate leaves [0, 1]
/// beyond kCubeTolerance, or if the point has the wrong dimension.
void check_point(std::span<const double> x, int d);

/// The dyadic lattice {2^{-n} k : 0 <= k_j <= 2^n} in I^d.
///
/// Flat indices are lexicographic with the last axis varying fastest, so
/// the flat stride of axis i is (2^n + 1)^{d-1-i}. Axes are 0-based here;
/// reports and the CLI use 1-based axis numbers.
class DyadicGrid {
 public:
  static constexpr int kMaxDimension = 4;
  /// Total level budget: n <= kLevelBudget / d.
  static constexpr int kLevelBudget = 24;

  /// Throws a capacity error naming the violated limit.
  DyadicGrid(int d, int n);

  int dimension() const noexcept { return d_; }
  int level() const noexcept { return n_; }
  /// 2^n, the number of cells along each axis.
  std::int64_t cells_per_axis() const noexcept { return per_axis_ - 1; }
  std::int64_t points_per_axis() const noexcept { return per_axis_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(per_axis_ - 1); }
  std::size_t axis_stride(int axis) const noexcept { return strides_[static_cast<std::size_t>(axis)]; }

  bool contains(std::span<const std::int64_t> k) const noexcept;
  std::size_t flat(std::span<const std::int64_t> k) const;
  MultiIndex unflat(std::size_t index) const;
  /// Component of the multi-index of `index` along `axis`, without unflattening.
  std::int64_t component(std::size_t index, int axis) const noexcept {
    return static_cast<std::int64_t>((index / axis_stride(axis)) % static_cast<std::size_t>(per_axis_));
  }
  Point point(std::span<const std::int64_t> k) const;

  friend bool operator==(const DyadicGrid& a, const DyadicGrid& b) noexcept {
    return a.d_ == b.d_ && a.n_ == b.n_;
  }

 private:
  int d_;
  int n_;
  std::int64_t per_axis_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

DyadicGrid make_grid(int d, int n);

/// Values of a function on every point of a dyadic grid, in flat order.
/// Immutable; construction rejects wrong lengths and non-finite values.
class SampleField {
 public:
  SampleField(DyadicGrid grid, std::vector<double> values);

  const DyadicGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t flat_index) const noexcept { return values_[flat_index]; }
  double at(std::span<const std::int64_t> k) const { return values_[grid_.flat(k)]; }
  /// max |value|; used as the scale for zero tolerances.
  double max_abs() const noexcept;

 private:
  DyadicGrid grid_;
  std::vector<double> values_;
};

class CatalogFunction;

/// Either an analytic catalog function (evaluable anywhere on I^d) or a
/// sampled field (evaluable only on its own mesh and coarser dyadic meshes).
class FunctionSource {
 public:
  explicit FunctionSource(CatalogFunction function);
  explicit FunctionSource(SampleField field);

  int dimension() const noexcept;
  bool is_analytic() const noexcept { return static_cast<bool>(analytic_); }
  const CatalogFunction& function() const;
  const SampleField& field() const;
  /// Finest dyadic level this source can serve (analytic: unbounded).
  int max_level() const noexcept;

  /// Value at an arbitrary point; sampled sources reject off-mesh points.
  double evaluate(std::span<const double> x) const;
  /// Value at the level-`level` mesh point 2^{-level} k.
  double at_mesh(int level, std::span<const std::int64_t> k) const;

 private:
  std::shared_ptr<const CatalogFunction> analytic_;
  std::shared_ptr<const SampleField> sampled_;
};

/// values[flat(k)] = f(2^{-n} k). Sampled sources are sub-sampled with
/// index stride 2^{n_src - n}; a coarser source raises a resolution error.
SampleField sample(const FunctionSource& source, const DyadicGrid& grid);

}  // namespace dysmooth
