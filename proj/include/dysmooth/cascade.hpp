#pragma once

#include "dysmooth/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dysmooth {

/// Axis-aligned cube anchored on the level-n mesh. For r >= 2 its side is
/// 2(r-1) 2^{-n}; for r = 1 it is the half-open cube of side 2 * 2^{-n}.
struct Cube {
  int r = 2;
  int n = 0;
  MultiIndex anchor;  ///< level-n multi-index of the lowest corner
  bool half_open = false;

  int dimension() const noexcept { return static_cast<int>(anchor.size()); }
  /// Side length in level-n cells.
  std::int64_t side_cells() const noexcept { return r >= 2 ? 2 * (r - 1) : 2; }
  double side() const noexcept;
  Point anchor_point() const;
  /// Closed-cube containment with tolerance kCubeTolerance.
  bool contains(std::span<const double> x) const;
  bool inside_unit_cube() const;
};

/// Basic cube containing u and u + r t e_axis, inside I^d.
/// Requires t <= 2^{-n-1}, r - 1 <= 2^{n-1} (n >= 1 for r = 1) and both
/// segment ends in I^d; throws a "constraint" validation error naming the
/// failed inequality otherwise.
Cube select_basic_cube(std::span<const double> u, int axis, double t, int r, int n);

/// Stage k of the spline cascade on a basic cube: the cube is bisected k
/// times along every axis; each of the 2^{dk} cells carries the tensor
/// Lagrange interpolant of f at its r^d uniform nodes (r = 1: the constant
/// f at the cell's lowest corner).
///
/// Node values live on one global node grid, so cells that share a face
/// share the face nodes. Node positions are exact integers on the level
/// n + k mesh.
class PiecewiseSpline {
 public:
  const Cube& cube() const noexcept { return cube_; }
  int stage() const noexcept { return stage_; }
  int order() const noexcept { return cube_.r; }
  int dimension() const noexcept { return cube_.dimension(); }
  /// Mesh level on which node positions are expressed (n + k).
  int node_level() const noexcept { return cube_.n + stage_; }
  std::int64_t cells_per_axis() const noexcept { return std::int64_t{1} << stage_; }
  std::int64_t nodes_per_axis() const noexcept { return nodes_per_axis_; }
  std::size_t node_count() const noexcept { return values_.size(); }
  std::size_t cell_count() const noexcept;
  double cell_side() const noexcept;

  /// Level-(n+k) mesh multi-index of a node given by its global node index.
  MultiIndex node_mesh_index(std::span<const std::int64_t> node) const;
  double node_value(std::span<const std::int64_t> node) const;
  std::span<const double> node_values() const noexcept { return values_; }
  /// The r^d node values of one cell (lexicographic, last axis fastest).
  std::vector<double> cell_node_values(std::span<const std::int64_t> cell) const;

  /// Value at x; the cell is chosen as the lexicographically smallest
  /// closed cell containing x (r >= 2) or by half-open cells (r = 1).
  double evaluate(std::span<const double> x) const;
  /// Value at local coordinates s in [0, r-1]^d (node units) of a cell.
  double evaluate_in_cell(std::span<const std::int64_t> cell, std::span<const double> s) const;

 private:
  friend PiecewiseSpline build_stage(const FunctionSource& source, const Cube& cube, int stage);
  PiecewiseSpline() = default;

  std::size_t node_flat(std::span<const std::int64_t> node) const;

  Cube cube_;
  int stage_ = 0;
  std::int64_t nodes_per_axis_ = 0;
  std::vector<double> values_;
};

/// Nodes must be readable from the source: analytic, or sampled on a mesh
/// containing every node (resolution error naming the first missing node).
PiecewiseSpline build_stage(const FunctionSource& source, const Cube& cube, int stage);

/// Default dense sampling: 4r points per axis per cell of the finer stage.
inline constexpr int kSamplesPerOrder = 4;

/// Sup-norm estimate of next - prev over the cube; requires the same cube
/// and next.stage() == prev.stage() + 1 (otherwise a "pairing" error).
double stage_diff_norm(const PiecewiseSpline& next, const PiecewiseSpline& prev);

/// Sup-norm estimate of spline - f over the cube (analytic f), sampled
/// like stage_diff_norm on the spline's own cells.
double reconstruction_error(const PiecewiseSpline& spline, const FunctionSource& source);

/// ||S_{n+k} - f|| for stages 0..K of one cube, all on the same half-open
/// lattice of 4r points per axis per stage-K cell, so the errors compare
/// point for point across stages.
std::vector<double> reconstruction_errors(std::span<const PiecewiseSpline> stages, const FunctionSource& source);

struct CascadeStage {
  int k = 0;
  double diff_norm = 0.0;                 ///< ||S_{n+k} - S_{n+k-1}|| (k >= 1)
  std::optional<double> recon_error;      ///< ||S_{n+k} - f|| (analytic sources)
  std::optional<double> psi_prev;         ///< Psi_r(n+k-1)
  std::optional<double> bound;            ///< lemma constant * Psi_r(n+k-1)
  std::optional<double> margin;           ///< bound - diff_norm
};

struct CascadeReport {
  Cube cube;
  std::vector<double> u;
  int axis = 0;
  double t = 0.0;
  int r = 1;
  int n = 0;
  int max_stage = 0;
  double lemma_constant = 0.0;
  std::vector<CascadeStage> stages;       ///< k = 0..K
  std::optional<double> psi_final;        ///< Psi_r(n+K)
  double scale = 0.0;                     ///< max |node value| seen
  double delta_stage0 = 0.0;              ///< Delta^r_{t e_i} S_n(u)
  bool stage0_annihilated = false;        ///< |delta_stage0| <= 1e-9 scale
  std::optional<double> delta_f;          ///< |Delta^r_{t e_i} f(u)|
  double telescoped_bound = 0.0;          ///< |delta_stage0| + 2^r (sum diff norms + ||f - S_{n+K}||)
  std::optional<bool> bound_holds;
  bool margins_nonnegative = true;
};

/// Builds stages 0..max_stage on the basic cube for (u, axis, t) and
/// records the quantities that realise the axis bound.
CascadeReport cascade_reconstruct(const FunctionSource& source, std::span<const double> u, int axis, double t,
                                  int r, int n, int max_stage);

/// A configuration for the piecewise-polynomial lemma on [0, 2(r-1)]^d with
/// spacing h: values on the (2r-1)^d integer grid, zero at every all-even
/// multi-index.
struct LemmaInstance {
  int r = 2;
  int d = 1;
  double h = 1.0;
  Point anchor;
  std::vector<double> values;  ///< (2r-1)^d, lexicographic

  std::int64_t points_per_axis() const noexcept { return 2 * r - 1; }
  /// Throws a validation error if the shape or the even-zero hypothesis fails.
  void validate() const;
};

/// Seeded instance: uniform [-1, 1] values at non-all-even grid points.
LemmaInstance make_lemma_instance(int r, int d, double h, Point anchor, std::uint64_t seed);
/// Caller-supplied values; a nonzero value at an all-even node is rejected.
LemmaInstance make_lemma_instance(int r, int d, double h, Point anchor, std::vector<double> values);

/// The stage difference S_{n+k} - S_{n+k-1} on one cell of the coarser
/// stage, read at the finer stage's nodes, as a lemma instance.
LemmaInstance lemma_instance_from_stages(const PiecewiseSpline& next, const PiecewiseSpline& prev,
                                         std::span<const std::int64_t> parent_cell);

/// g(a + h z) for local coordinates z in [0, 2(r-1)]^d.
double lemma_evaluate(const LemmaInstance& instance, std::span<const double> z);

/// max over axes i and offsets v_i of |Delta^r_{h e_i} g(a + v_i h)|, with
/// v_{i,j} in 0..2(r-1) (j != i) and v_{i,i} in 0..r-2.
double lemma_max_difference(const LemmaInstance& instance);

std::string serialize_lemma_instance(const LemmaInstance& instance);
LemmaInstance parse_lemma_instance(std::string_view text);

}  // namespace dysmooth
