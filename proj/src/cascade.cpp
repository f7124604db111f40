#include "dysmooth/cascade.hpp"

#include "dysmooth/catalog.hpp"
#include "dysmooth/certificates.hpp"
#include "dysmooth/error.hpp"
#include "dysmooth/fdiff.hpp"
#include "dysmooth/lagrange.hpp"
#include "dysmooth/moduli.hpp"
#include "dysmooth/parallel.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace dysmooth {

namespace {

constexpr std::size_t kMaxSplineNodes = std::size_t{1} << 26;

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

// Iterates a d-dimensional counter over [0, extent)^d, last axis fastest.
bool next_index(std::vector<std::int64_t>& idx, std::int64_t extent) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    if (++idx[j] < extent) return true;
    idx[j] = 0;
  }
  return false;
}

// Like next_index but leaves axis 0 fixed.
bool next_tail(std::vector<std::int64_t>& idx, std::int64_t extent) {
  for (std::size_t j = idx.size(); j-- > 1;) {
    if (++idx[j] < extent) return true;
    idx[j] = 0;
  }
  return false;
}

void unflat_into(std::size_t p, std::int64_t extent, std::vector<std::int64_t>& idx) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    idx[j] = static_cast<std::int64_t>(p % static_cast<std::size_t>(extent));
    p /= static_cast<std::size_t>(extent);
  }
}

// Per-thread evaluator for cells of one spline.
class CellEvaluator {
 public:
  explicit CellEvaluator(const PiecewiseSpline& spline)
      : spline_(spline),
        lagrange_(std::max(spline.order(), 1), spline.dimension()),
        nodes_(lagrange_.node_count()),
        node_(static_cast<std::size_t>(spline.dimension())),
        w_(node_.size()) {}

  double operator()(std::span<const std::int64_t> cell, std::span<const double> s) {
    const int r = spline_.order();
    if (r == 1) return spline_.node_value(cell);
    const auto per = static_cast<std::int64_t>(r);
    std::fill(w_.begin(), w_.end(), 0);
    std::size_t slot = 0;
    do {
      for (std::size_t j = 0; j < node_.size(); ++j) node_[j] = cell[j] * (r - 1) + w_[j];
      nodes_[slot++] = spline_.node_value(node_);
    } while (next_index(w_, per));
    return lagrange_.evaluate(nodes_, s);
  }

 private:
  const PiecewiseSpline& spline_;
  TensorLagrange lagrange_;
  std::vector<double> nodes_;
  std::vector<std::int64_t> node_;
  std::vector<std::int64_t> w_;
};

// Local sample positions inside a cell, in node units.
std::vector<double> cell_samples(int r) {
  const int count = kSamplesPerOrder * r;
  std::vector<double> s(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    if (r >= 2)
      s[static_cast<std::size_t>(m)] = static_cast<double>(r - 1) * m / (count - 1);
    else
      s[static_cast<std::size_t>(m)] = static_cast<double>(m) / count;  // half-open cell
  }
  return s;
}

// max over cells and samples of |value(cell, s, x)|.
template <typename Sampler>
double dense_cell_max(const PiecewiseSpline& spline, Sampler&& make_sampler) {
  const int d = spline.dimension();
  const auto samples = cell_samples(spline.order());
  const std::size_t cells = spline.cell_count();
  std::vector<double> partial(thread_count(), 0.0);
  parallel_chunks(cells, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto sampler = make_sampler();
    std::vector<std::int64_t> cell(static_cast<std::size_t>(d));
    std::vector<std::int64_t> m(static_cast<std::size_t>(d));
    std::vector<double> s(static_cast<std::size_t>(d));
    double best = 0.0;
    for (std::size_t c = begin; c < end; ++c) {
      unflat_into(c, spline.cells_per_axis(), cell);
      std::fill(m.begin(), m.end(), 0);
      do {
        for (std::size_t j = 0; j < s.size(); ++j) s[j] = samples[static_cast<std::size_t>(m[j])];
        best = std::max(best, std::abs(sampler(cell, s)));
      } while (next_index(m, static_cast<std::int64_t>(samples.size())));
    }
    partial[chunk] = best;
  }, partial.size());
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace

double Cube::side() const noexcept { return std::ldexp(static_cast<double>(side_cells()), -n); }

Point Cube::anchor_point() const {
  Point x(anchor.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::ldexp(static_cast<double>(anchor[j]), -n);
  return x;
}

bool Cube::contains(std::span<const double> x) const {
  if (x.size() != anchor.size()) return false;
  const auto lo = anchor_point();
  const double s = side();
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < lo[j] - kCubeTolerance || x[j] > lo[j] + s + kCubeTolerance) return false;
  return true;
}

bool Cube::inside_unit_cube() const {
  const std::int64_t cells = std::int64_t{1} << n;
  return std::all_of(anchor.begin(), anchor.end(),
                     [&](std::int64_t k) { return k >= 0 && k + side_cells() <= cells; });
}

Cube select_basic_cube(std::span<const double> u, int axis, double t, int r, int n) {
  const int d = static_cast<int>(u.size());
  if (d < 1 || d > DyadicGrid::kMaxDimension) throw capacity_error(fmt::format("dimension {} outside 1..4", d));
  check_order(r);
  if (axis < 0 || axis >= d) throw validation_error("constraint", fmt::format("axis {} outside 1..{}", axis + 1, d));
  if (n < 0 || n > 40) throw capacity_error(fmt::format("level {} outside 0..40", n));
  if (!(t > 0.0)) throw validation_error("constraint", fmt::format("t = {} must be positive", t));
  if (!(t <= std::ldexp(1.0, -n - 1)))
    throw validation_error("constraint", fmt::format("t <= 2^-(n+1) fails: t = {}, n = {}", t, n));
  Cube cube;
  cube.r = r;
  cube.n = n;
  cube.half_open = r == 1;
  const std::int64_t cells = std::int64_t{1} << n;
  if (cube.side_cells() > cells) {
    if (r >= 2)
      throw validation_error("constraint", fmt::format("r - 1 <= 2^(n-1) fails: r = {}, n = {}", r, n));
    throw validation_error("constraint", fmt::format("r = 1 needs n >= 1 (got n = {})", n));
  }
  check_point(u, d);
  Point end(u.begin(), u.end());
  end[static_cast<std::size_t>(axis)] += r * t;
  if (end[static_cast<std::size_t>(axis)] > 1.0 + kCubeTolerance)
    throw validation_error("constraint", fmt::format("u + r t e_i leaves the cube on axis {}: {}", axis + 1,
                                                     end[static_cast<std::size_t>(axis)]));

  const std::int64_t last = cells - cube.side_cells();
  cube.anchor.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const double uj = std::clamp(u[static_cast<std::size_t>(j)], 0.0, 1.0);
    std::int64_t k = 0;
    if (uj <= 0.5) {
      k = std::min(static_cast<std::int64_t>(std::floor(std::ldexp(uj, n))), last);
    } else {
      const double tilde = uj + r * t;
      const auto k_tilde = std::clamp(static_cast<std::int64_t>(std::floor(std::ldexp(1.0 - tilde, n))),
                                      std::int64_t{0}, last);
      k = cells - k_tilde - cube.side_cells();
    }
    cube.anchor[static_cast<std::size_t>(j)] = k;
  }
  if (!cube.inside_unit_cube() || !cube.contains(u) || !cube.contains(end))
    throw invariant_error(fmt::format("basic cube at ({}) level {} misses u = ({}) or its segment end",
                                      fmt::join(cube.anchor, ", "), n, fmt::join(u, ", ")));
  return cube;
}

std::size_t PiecewiseSpline::cell_count() const noexcept {
  return static_cast<std::size_t>(ipow(cells_per_axis(), dimension()));
}

double PiecewiseSpline::cell_side() const noexcept { return cube_.side() / static_cast<double>(cells_per_axis()); }

std::size_t PiecewiseSpline::node_flat(std::span<const std::int64_t> node) const {
  std::size_t p = 0;
  for (auto c : node) p = p * static_cast<std::size_t>(nodes_per_axis_) + static_cast<std::size_t>(c);
  return p;
}

MultiIndex PiecewiseSpline::node_mesh_index(std::span<const std::int64_t> node) const {
  MultiIndex k(node.size());
  for (std::size_t j = 0; j < node.size(); ++j) k[j] = (cube_.anchor[j] << stage_) + 2 * node[j];
  return k;
}

double PiecewiseSpline::node_value(std::span<const std::int64_t> node) const { return values_[node_flat(node)]; }

std::vector<double> PiecewiseSpline::cell_node_values(std::span<const std::int64_t> cell) const {
  const int r = order();
  if (r == 1) return {node_value(cell)};
  std::vector<double> out;
  std::vector<std::int64_t> w(cell.size(), 0);
  std::vector<std::int64_t> node(cell.size());
  do {
    for (std::size_t j = 0; j < cell.size(); ++j) node[j] = cell[j] * (r - 1) + w[j];
    out.push_back(node_value(node));
  } while (next_index(w, r));
  return out;
}

double PiecewiseSpline::evaluate_in_cell(std::span<const std::int64_t> cell, std::span<const double> s) const {
  CellEvaluator eval(*this);
  return eval(cell, s);
}

double PiecewiseSpline::evaluate(std::span<const double> x) const {
  if (!cube_.contains(x))
    throw validation_error("domain", fmt::format("point ({}) lies outside the spline's cube", fmt::join(x, ", ")));
  const int r = order();
  const int level = node_level();
  std::vector<std::int64_t> cell(x.size());
  std::vector<double> s(x.size());
  const auto last_cell = cells_per_axis() - 1;
  for (std::size_t j = 0; j < x.size(); ++j) {
    // position in node units from the cube's anchor
    double z = (std::ldexp(x[j], level) - static_cast<double>(cube_.anchor[j] << stage_)) / 2.0;
    z = std::clamp(z, 0.0, r >= 2 ? static_cast<double>(nodes_per_axis_ - 1) : static_cast<double>(nodes_per_axis_));
    std::int64_t c = 0;
    if (r >= 2) {
      c = z <= 0.0 ? 0 : static_cast<std::int64_t>(std::ceil(z / (r - 1))) - 1;
      c = std::clamp<std::int64_t>(c, 0, last_cell);
      s[j] = z - static_cast<double>(c * (r - 1));
    } else {
      c = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(z)), 0, last_cell);
    }
    cell[j] = c;
  }
  return evaluate_in_cell(cell, s);
}

PiecewiseSpline build_stage(const FunctionSource& source, const Cube& cube, int stage) {
  const int d = cube.dimension();
  if (source.dimension() != d)
    throw validation_error("dimension", fmt::format("source dimension {} differs from cube dimension {}",
                                                    source.dimension(), d));
  if (stage < 0 || stage > 24) throw capacity_error(fmt::format("stage {} outside 0..24", stage));
  if (!cube.inside_unit_cube()) throw validation_error("constraint", "cube is not inside the unit cube");
  PiecewiseSpline spline;
  spline.cube_ = cube;
  spline.stage_ = stage;
  spline.nodes_per_axis_ = cube.r >= 2 ? (std::int64_t{1} << stage) * (cube.r - 1) + 1 : (std::int64_t{1} << stage);
  const auto total = static_cast<double>(std::pow(static_cast<double>(spline.nodes_per_axis_), d));
  if (total > static_cast<double>(kMaxSplineNodes))
    throw capacity_error(fmt::format("stage {} needs {} nodes, above the cap {}", stage, total, kMaxSplineNodes));
  spline.values_.resize(static_cast<std::size_t>(total));

  const int level = spline.node_level();
  const std::int64_t mesh_cells = std::int64_t{1} << level;
  parallel_chunks(spline.values_.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> node(static_cast<std::size_t>(d));
    for (std::size_t p = begin; p < end; ++p) {
      unflat_into(p, spline.nodes_per_axis_, node);
      const auto k = spline.node_mesh_index(node);
      for (auto c : k)
        if (c < 0 || c > mesh_cells)
          throw invariant_error(fmt::format("stage node ({}) is off the level-{} mesh", fmt::join(k, ", "), level));
      spline.values_[p] = source.at_mesh(level, k);
    }
  });
  return spline;
}

double stage_diff_norm(const PiecewiseSpline& next, const PiecewiseSpline& prev) {
  const auto& a = next.cube();
  const auto& b = prev.cube();
  if (a.r != b.r || a.n != b.n || a.anchor != b.anchor)
    throw validation_error("pairing", "stages are built on different cubes");
  if (next.stage() != prev.stage() + 1)
    throw validation_error("pairing", fmt::format("stages {} and {} are not consecutive", next.stage(), prev.stage()));
  const int r = next.order();
  const std::size_t d = static_cast<std::size_t>(next.dimension());
  return dense_cell_max(next, [&] {
    return [&, fine = CellEvaluator(next), coarse = CellEvaluator(prev),
            parent = std::vector<std::int64_t>(d), sp = std::vector<double>(d)](
               std::span<const std::int64_t> cell, std::span<const double> s) mutable {
      for (std::size_t j = 0; j < d; ++j) {
        parent[j] = cell[j] >> 1;
        if (r >= 2) sp[j] = (static_cast<double>(cell[j] * (r - 1)) + s[j]) / 2.0 - static_cast<double>(parent[j] * (r - 1));
      }
      return fine(cell, s) - coarse(parent, sp);
    };
  });
}

double reconstruction_error(const PiecewiseSpline& spline, const FunctionSource& source) {
  const auto& f = source.function();
  const int r = spline.order();
  const int level = spline.node_level();
  const std::size_t d = static_cast<std::size_t>(spline.dimension());
  const auto& anchor = spline.cube().anchor;
  const int stage = spline.stage();
  return dense_cell_max(spline, [&] {
    return [&, eval = CellEvaluator(spline), x = Point(d)](std::span<const std::int64_t> cell,
                                                           std::span<const double> s) mutable {
      for (std::size_t j = 0; j < d; ++j) {
        const double z = r >= 2 ? static_cast<double>(cell[j] * (r - 1)) + s[j] : static_cast<double>(cell[j]) + s[j];
        x[j] = std::ldexp(static_cast<double>(anchor[j] << stage) + 2.0 * z, -level);
      }
      return eval(cell, s) - f(x);
    };
  });
}

std::vector<double> reconstruction_errors(std::span<const PiecewiseSpline> stages, const FunctionSource& source) {
  if (stages.empty()) return {};
  const auto& last = stages.back();
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const auto& c = stages[k].cube();
    if (c.r != last.cube().r || c.n != last.cube().n || c.anchor != last.cube().anchor ||
        stages[k].stage() != static_cast<int>(k))
      throw validation_error("pairing", "stages must be 0..K on one cube");
  }
  const auto& f = source.function();
  const int r = last.order();
  const int top = last.stage();
  const int level = last.node_level();
  const std::size_t d = static_cast<std::size_t>(last.dimension());
  const auto& anchor = last.cube().anchor;
  const double span = r >= 2 ? r - 1 : 1;  // node units per cell
  const std::int64_t per_cell = kSamplesPerOrder * r;
  const std::int64_t points = per_cell * last.cells_per_axis();
  const std::size_t width = static_cast<std::size_t>(r);

  // Half-open lattice in stage-K node units, nested in every coarser stage.
  // The lattice is the same on each axis, so one table per stage: first
  // node of the containing cell and the 1-D basis weights.
  struct Table {
    std::vector<std::int64_t> first;
    std::vector<double> weight;
    std::vector<std::int64_t> offset;  // flat offsets of the r^d cell nodes
  };
  std::vector<Table> tables(stages.size());
  for (std::size_t k = 0; k < stages.size(); ++k) {
    auto& tab = tables[k];
    tab.first.resize(static_cast<std::size_t>(points));
    tab.weight.resize(static_cast<std::size_t>(points) * width);
    for (std::int64_t p = 0; p < points; ++p) {
      const double z = std::ldexp(span * static_cast<double>(p) / static_cast<double>(per_cell),
                                  static_cast<int>(k) - top);
      const auto cell = static_cast<std::int64_t>(std::floor(z / span));
      const auto i = static_cast<std::size_t>(p);
      if (r >= 2) {
        tab.first[i] = cell * (r - 1);
        uniform_lagrange_basis(r, z - static_cast<double>(tab.first[i]), std::span<double>(tab.weight).subspan(i * width, width));
      } else {
        tab.first[i] = cell;
        tab.weight[i] = 1.0;
      }
    }
    const std::int64_t side = stages[k].nodes_per_axis();
    std::vector<std::int64_t> w(d, 0);
    do {
      std::int64_t off = 0;
      for (std::size_t j = 0; j < d; ++j) off = off * side + w[j];
      tab.offset.push_back(off);
    } while (next_index(w, r));
  }

  std::vector<std::vector<double>> partial(thread_count(), std::vector<double>(stages.size(), 0.0));
  parallel_chunks(static_cast<std::size_t>(points), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& best = partial[chunk];
    std::vector<std::int64_t> p(d, 0), w(d);
    Point x(d);
    for (std::size_t row = begin; row < end; ++row) {
      std::fill(p.begin(), p.end(), 0);
      p[0] = static_cast<std::int64_t>(row);
      do {
        for (std::size_t j = 0; j < d; ++j)
          x[j] = std::ldexp(static_cast<double>(anchor[j] << top) + 2.0 * span * static_cast<double>(p[j]) / static_cast<double>(per_cell), -level);
        const double fx = f(x);
        for (std::size_t k = 0; k < stages.size(); ++k) {
          const auto& tab = tables[k];
          const auto values = stages[k].node_values();
          const std::int64_t side = stages[k].nodes_per_axis();
          std::int64_t base = 0;
          for (std::size_t j = 0; j < d; ++j) base = base * side + tab.first[static_cast<std::size_t>(p[j])];
          double sum = 0.0;
          const double* w0 = &tab.weight[static_cast<std::size_t>(p[0]) * width];
          if (d == 1) {
            for (std::size_t i = 0; i < width; ++i) sum += w0[i] * values[static_cast<std::size_t>(base) + i];
          } else if (d == 2) {
            const double* w1 = &tab.weight[static_cast<std::size_t>(p[1]) * width];
            for (std::size_t i = 0; i < width; ++i) {
              const double* row = &values[static_cast<std::size_t>(base + static_cast<std::int64_t>(i) * side)];
              double acc = 0.0;
              for (std::size_t l = 0; l < width; ++l) acc += w1[l] * row[l];
              sum += w0[i] * acc;
            }
          } else {
            std::fill(w.begin(), w.end(), 0);
            for (const std::int64_t off : tab.offset) {
              double weight = 1.0;
              for (std::size_t j = 0; j < d; ++j)
                weight *= tab.weight[static_cast<std::size_t>(p[j]) * width + static_cast<std::size_t>(w[j])];
              if (weight != 0.0) sum += weight * values[static_cast<std::size_t>(base + off)];
              next_index(w, r);
            }
          }
          best[k] = std::max(best[k], std::abs(sum - fx));
        }
      } while (d > 1 && next_tail(p, points));
    }
  }, partial.size());
  std::vector<double> out(stages.size(), 0.0);
  for (const auto& b : partial)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::max(out[k], b[k]);
  return out;
}

CascadeReport cascade_reconstruct(const FunctionSource& source, std::span<const double> u, int axis, double t, int r,
                                  int n, int max_stage) {
  if (max_stage < 0) throw validation_error("stage", "max_stage must be non-negative");
  CascadeReport report;
  report.cube = select_basic_cube(u, axis, t, r, n);
  report.u.assign(u.begin(), u.end());
  report.axis = axis;
  report.t = t;
  report.r = r;
  report.n = n;
  report.max_stage = max_stage;
  const int d = static_cast<int>(u.size());
  report.lemma_constant = lemma_constant_dd(r, d).value;

  // Psi_r(n..n+K) when the mesh caps allow it.
  std::optional<ModulusProfile> profile;
  const int top = n + max_stage;
  if (top <= DyadicGrid::kLevelBudget / d && top <= source.max_level())
    profile = modulus_profile(source, r, std::max(n, min_level_for_order(r)), top);

  const bool analytic = source.is_analytic();
  auto prev = build_stage(source, report.cube, 0);
  auto track_scale = [&](const PiecewiseSpline& s) {
    for (double v : s.node_values()) report.scale = std::max(report.scale, std::abs(v));
  };
  track_scale(prev);
  report.stages.push_back(CascadeStage{});
  std::vector<PiecewiseSpline> built;
  if (analytic) built.push_back(prev);

  std::vector<double> along(static_cast<std::size_t>(r) + 1);
  Point x(u.begin(), u.end());
  for (int j = 0; j <= r; ++j) {
    x[static_cast<std::size_t>(axis)] = std::min(u[static_cast<std::size_t>(axis)] + j * t, 1.0);
    along[static_cast<std::size_t>(j)] = prev.evaluate(x);
  }
  report.delta_stage0 = forward_diff(along, r);

  double diff_sum = 0.0;
  for (int k = 1; k <= max_stage; ++k) {
    auto next = build_stage(source, report.cube, k);
    track_scale(next);
    CascadeStage stage;
    stage.k = k;
    stage.diff_norm = stage_diff_norm(next, prev);
    diff_sum += stage.diff_norm;
    if (profile && profile->covers(n + k - 1)) {
      stage.psi_prev = profile->at(n + k - 1);
      stage.bound = report.lemma_constant * *stage.psi_prev;
      stage.margin = *stage.bound - stage.diff_norm;
      if (*stage.margin < -1e-12 * std::max(*stage.bound, report.scale)) report.margins_nonnegative = false;
    }
    report.stages.push_back(stage);
    if (analytic) built.push_back(next);
    prev = std::move(next);
  }
  if (analytic) {
    const auto errors = reconstruction_errors(built, source);
    for (std::size_t k = 0; k < errors.size(); ++k) report.stages[k].recon_error = errors[k];
  }
  if (profile && profile->covers(top)) report.psi_final = profile->at(top);
  report.stage0_annihilated = std::abs(report.delta_stage0) <= 1e-9 * std::max(report.scale, 1e-300);

  const double remainder = report.stages.back().recon_error.value_or(0.0);
  report.telescoped_bound = std::abs(report.delta_stage0) + std::ldexp(diff_sum + remainder, r);
  try {
    for (int j = 0; j <= r; ++j) {
      x[static_cast<std::size_t>(axis)] = std::min(u[static_cast<std::size_t>(axis)] + j * t, 1.0);
      along[static_cast<std::size_t>(j)] = source.evaluate(x);
    }
    report.delta_f = std::abs(forward_diff(along, r));
  } catch (const Error&) {
    report.delta_f.reset();  // sampled source without the segment points
  }
  if (report.delta_f && analytic)
    report.bound_holds = *report.delta_f <= report.telescoped_bound * (1.0 + 1e-12) + 1e-12 * report.scale;
  return report;
}

void LemmaInstance::validate() const {
  if (r < 2 || r > kMaxLemmaOrder) throw validation_error("instance", fmt::format("lemma order {} outside 2..{}", r, kMaxLemmaOrder));
  if (d < 1 || d > 4) throw validation_error("instance", fmt::format("dimension {} outside 1..4", d));
  if (!(h > 0.0)) throw validation_error("instance", "spacing h must be positive");
  if (static_cast<int>(anchor.size()) != d) throw validation_error("instance", "anchor dimension mismatch");
  const auto side = points_per_axis();
  const auto expected = static_cast<std::size_t>(ipow(side, d));
  if (values.size() != expected)
    throw validation_error("instance", fmt::format("expected {} grid values, got {}", expected, values.size()));
  std::vector<std::int64_t> k(static_cast<std::size_t>(d), 0);
  std::size_t p = 0;
  do {
    const double v = values[p];
    if (!std::isfinite(v)) throw validation_error("instance", fmt::format("non-finite value at grid index {}", p));
    const bool all_even = std::all_of(k.begin(), k.end(), [](std::int64_t c) { return c % 2 == 0; });
    if (all_even && v != 0.0)
      throw validation_error("instance", fmt::format("nonzero value {} at all-even node ({})", v, fmt::join(k, ", ")));
    ++p;
  } while (next_index(k, side));
}

LemmaInstance make_lemma_instance(int r, int d, double h, Point anchor, std::uint64_t seed) {
  LemmaInstance inst{r, d, h, std::move(anchor), {}};
  if (r < 2) throw validation_error("instance", "lemma instances need r >= 2");
  if (d < 1 || d > 4) throw validation_error("instance", fmt::format("dimension {} outside 1..4", d));
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> k(static_cast<std::size_t>(d), 0);
  do {
    const bool all_even = std::all_of(k.begin(), k.end(), [](std::int64_t c) { return c % 2 == 0; });
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    inst.values.push_back(all_even ? 0.0 : 2.0 * u - 1.0);
  } while (next_index(k, inst.points_per_axis()));
  inst.validate();
  return inst;
}

LemmaInstance make_lemma_instance(int r, int d, double h, Point anchor, std::vector<double> values) {
  LemmaInstance inst{r, d, h, std::move(anchor), std::move(values)};
  inst.validate();
  return inst;
}

LemmaInstance lemma_instance_from_stages(const PiecewiseSpline& next, const PiecewiseSpline& prev,
                                         std::span<const std::int64_t> parent_cell) {
  if (next.stage() != prev.stage() + 1 || next.cube().anchor != prev.cube().anchor || next.order() != prev.order())
    throw validation_error("pairing", "stages are not consecutive stages of one cube");
  const int r = next.order();
  if (r < 2) throw validation_error("instance", "lemma instances need r >= 2");
  const int d = next.dimension();
  LemmaInstance inst;
  inst.r = r;
  inst.d = d;
  inst.h = next.cell_side() / (r - 1);
  inst.anchor.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    inst.anchor[jj] = next.cube().anchor_point()[jj] + static_cast<double>(parent_cell[jj]) * prev.cell_side();
  }
  CellEvaluator coarse(prev);
  std::vector<std::int64_t> z(static_cast<std::size_t>(d), 0);
  std::vector<std::int64_t> node(static_cast<std::size_t>(d));
  std::vector<double> s(static_cast<std::size_t>(d));
  do {
    for (std::size_t j = 0; j < z.size(); ++j) {
      node[j] = parent_cell[j] * 2 * (r - 1) + z[j];
      s[j] = static_cast<double>(z[j]) / 2.0;
    }
    inst.values.push_back(next.node_value(node) - coarse(parent_cell, s));
  } while (next_index(z, inst.points_per_axis()));
  inst.validate();
  return inst;
}

double lemma_evaluate(const LemmaInstance& instance, std::span<const double> z) {
  const int r = instance.r;
  const auto d = static_cast<std::size_t>(instance.d);
  TensorLagrange lagrange(r, instance.d);
  std::vector<std::int64_t> cell(d);
  std::vector<double> s(d);
  for (std::size_t j = 0; j < d; ++j) {
    cell[j] = z[j] <= static_cast<double>(r - 1) ? 0 : 1;
    s[j] = z[j] - static_cast<double>(cell[j] * (r - 1));
  }
  std::vector<double> nodes;
  nodes.reserve(lagrange.node_count());
  std::vector<std::int64_t> w(d, 0);
  const auto side = instance.points_per_axis();
  do {
    std::size_t p = 0;
    for (std::size_t j = 0; j < d; ++j) p = p * static_cast<std::size_t>(side) + static_cast<std::size_t>(cell[j] * (r - 1) + w[j]);
    nodes.push_back(instance.values[p]);
  } while (next_index(w, r));
  return lagrange.evaluate(nodes, s);
}

double lemma_max_difference(const LemmaInstance& instance) {
  const int r = instance.r;
  const auto d = static_cast<std::size_t>(instance.d);
  const auto side = instance.points_per_axis();
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t j = d - 1; j-- > 0;) stride[j] = stride[j + 1] * static_cast<std::size_t>(side);
  std::vector<double> along(static_cast<std::size_t>(r) + 1);
  double best = 0.0;
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::vector<std::int64_t> k(d, 0);
    std::size_t p = 0;
    do {
      if (k[axis] <= r - 2) {
        for (int m = 0; m <= r; ++m)
          along[static_cast<std::size_t>(m)] = instance.values[p + static_cast<std::size_t>(m) * stride[axis]];
        best = std::max(best, std::abs(forward_diff(along, r)));
      }
      ++p;
    } while (next_index(k, side));
  }
  return best;
}

std::string serialize_lemma_instance(const LemmaInstance& instance) {
  nlohmann::json doc = {{"r", instance.r},
                        {"d", instance.d},
                        {"h", instance.h},
                        {"anchor", instance.anchor},
                        {"values", instance.values}};
  return doc.dump();
}

LemmaInstance parse_lemma_instance(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    LemmaInstance inst{doc.at("r").get<int>(), doc.at("d").get<int>(), doc.at("h").get<double>(),
                       doc.at("anchor").get<std::vector<double>>(), doc.at("values").get<std::vector<double>>()};
    inst.validate();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("format", fmt::format("malformed lemma instance: {}", e.what()));
  }
}

}  // namespace dysmooth
