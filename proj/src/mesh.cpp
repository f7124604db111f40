#include "dysmooth/mesh.hpp"

#include "dysmooth/catalog.hpp"
#include "dysmooth/error.hpp"
#include "dysmooth/parallel.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>

namespace dysmooth {

void check_point(std::span<const double> x, int d) {
  if (static_cast<int>(x.size()) != d)
    throw validation_error("domain", fmt::format("point has {} coordinates, expected {}", x.size(), d));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= -kCubeTolerance && x[j] <= 1.0 + kCubeTolerance))
      throw validation_error("domain", fmt::format("coordinate {} of point ({}) lies outside [0, 1]",
                                                   j + 1, fmt::join(x, ", ")));
  }
}

DyadicGrid::DyadicGrid(int d, int n) : d_(d), n_(n) {
  if (d < 1 || d > kMaxDimension)
    throw capacity_error(fmt::format("dimension {} outside 1..{}", d, kMaxDimension));
  if (n < 0 || n > kLevelBudget / d)
    throw capacity_error(fmt::format("level {} outside 0..{} for dimension {} (cap n <= {}/d)", n,
                                     kLevelBudget / d, d, kLevelBudget));
  per_axis_ = (std::int64_t{1} << n) + 1;
  strides_.assign(static_cast<std::size_t>(d), 1);
  for (int i = d - 2; i >= 0; --i)
    strides_[static_cast<std::size_t>(i)] =
        strides_[static_cast<std::size_t>(i + 1)] * static_cast<std::size_t>(per_axis_);
  size_ = strides_[0] * static_cast<std::size_t>(per_axis_);
}

bool DyadicGrid::contains(std::span<const std::int64_t> k) const noexcept {
  if (static_cast<int>(k.size()) != d_) return false;
  return std::all_of(k.begin(), k.end(), [&](std::int64_t c) { return c >= 0 && c < per_axis_; });
}

std::size_t DyadicGrid::flat(std::span<const std::int64_t> k) const {
  if (static_cast<int>(k.size()) != d_)
    throw validation_error("bounds", fmt::format("multi-index has {} components, expected {}", k.size(), d_));
  std::size_t index = 0;
  for (int i = 0; i < d_; ++i) {
    const auto c = k[static_cast<std::size_t>(i)];
    if (c < 0 || c >= per_axis_)
      throw validation_error("bounds", fmt::format("index {} on axis {} outside 0..{}", c, i + 1, per_axis_ - 1));
    index += static_cast<std::size_t>(c) * strides_[static_cast<std::size_t>(i)];
  }
  return index;
}

MultiIndex DyadicGrid::unflat(std::size_t index) const {
  if (index >= size_)
    throw validation_error("bounds", fmt::format("flat index {} outside 0..{}", index, size_ - 1));
  MultiIndex k(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) k[static_cast<std::size_t>(i)] = component(index, i);
  return k;
}

Point DyadicGrid::point(std::span<const std::int64_t> k) const {
  Point x(k.size());
  const double h = spacing();
  for (std::size_t j = 0; j < k.size(); ++j) x[j] = static_cast<double>(k[j]) * h;
  return x;
}

DyadicGrid make_grid(int d, int n) { return DyadicGrid(d, n); }

SampleField::SampleField(DyadicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw validation_error("format", fmt::format("expected {} values for dimension {} level {}, got {}",
                                                 grid_.size(), grid_.dimension(), grid_.level(),
                                                 values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw validation_error("format", fmt::format("non-finite value at flat index {}", i));
}

double SampleField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

FunctionSource::FunctionSource(CatalogFunction function)
    : analytic_(std::make_shared<const CatalogFunction>(std::move(function))) {}

FunctionSource::FunctionSource(SampleField field)
    : sampled_(std::make_shared<const SampleField>(std::move(field))) {}

int FunctionSource::dimension() const noexcept {
  return analytic_ ? analytic_->dimension() : sampled_->grid().dimension();
}

const CatalogFunction& FunctionSource::function() const {
  if (!analytic_) throw validation_error("source", "operation requires an analytic source");
  return *analytic_;
}

const SampleField& FunctionSource::field() const {
  if (!sampled_) throw validation_error("source", "operation requires a sampled source");
  return *sampled_;
}

int FunctionSource::max_level() const noexcept {
  return analytic_ ? DyadicGrid::kLevelBudget : sampled_->grid().level();
}

double FunctionSource::evaluate(std::span<const double> x) const {
  check_point(x, dimension());
  if (analytic_) return (*analytic_)(x);
  const auto& grid = sampled_->grid();
  const double cells = static_cast<double>(grid.cells_per_axis());
  MultiIndex k(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double scaled = x[j] * cells;
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) > kCubeTolerance * cells)
      throw validation_error("resolution", fmt::format("point ({}) is not on the level-{} mesh of the sampled source",
                                                       fmt::join(x, ", "), grid.level()));
    k[j] = std::clamp(static_cast<std::int64_t>(nearest), std::int64_t{0}, grid.cells_per_axis());
  }
  return sampled_->at(k);
}

double FunctionSource::at_mesh(int level, std::span<const std::int64_t> k) const {
  if (analytic_) {
    const double h = std::ldexp(1.0, -level);
    Point x(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) x[j] = static_cast<double>(k[j]) * h;
    return (*analytic_)(x);
  }
  const auto& grid = sampled_->grid();
  const int shift = grid.level() - level;
  MultiIndex kk(k.begin(), k.end());
  if (shift >= 0) {
    for (auto& c : kk) c <<= shift;
  } else {
    const std::int64_t mask = (std::int64_t{1} << -shift) - 1;
    for (auto& c : kk) {
      if (c & mask)
        throw validation_error("resolution",
                               fmt::format("mesh point ({}) at level {} is not available from level-{} samples",
                                           fmt::join(k, ", "), level, grid.level()));
      c >>= -shift;
    }
  }
  return sampled_->at(kk);
}

SampleField sample(const FunctionSource& source, const DyadicGrid& grid) {
  if (source.dimension() != grid.dimension())
    throw validation_error("dimension", fmt::format("source has dimension {}, grid has dimension {}",
                                                    source.dimension(), grid.dimension()));
  std::vector<double> values(grid.size());
  if (source.is_analytic()) {
    const auto& f = source.function();
    parallel_chunks(grid.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
      Point x(static_cast<std::size_t>(grid.dimension()));
      const double h = grid.spacing();
      for (std::size_t p = begin; p < end; ++p) {
        for (int j = 0; j < grid.dimension(); ++j)
          x[static_cast<std::size_t>(j)] = static_cast<double>(grid.component(p, j)) * h;
        values[p] = f(x);
      }
    });
    return SampleField(grid, std::move(values));
  }
  const auto& field = source.field();
  const int shift = field.grid().level() - grid.level();
  if (shift < 0)
    throw validation_error("resolution", fmt::format("requested level {} exceeds sampled source level {}",
                                                     grid.level(), field.grid().level()));
  MultiIndex k(static_cast<std::size_t>(grid.dimension()));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int j = 0; j < grid.dimension(); ++j)
      k[static_cast<std::size_t>(j)] = grid.component(p, j) << shift;
    values[p] = field.at(k);
  }
  return SampleField(grid, std::move(values));
}

}  // namespace dysmooth
