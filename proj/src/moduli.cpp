#include "dysmooth/moduli.hpp"

#include "dysmooth/catalog.hpp"
#include "dysmooth/error.hpp"
#include "dysmooth/fdiff.hpp"
#include "dysmooth/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace dysmooth {

namespace {

struct Best {
  double magnitude = -1.0;
  double value = 0.0;
  std::size_t flat = 0;
};

std::vector<double> signed_binomials(int r) {
  std::vector<double> w(static_cast<std::size_t>(r) + 1);
  for (int k = 0; k <= r; ++k)
    w[static_cast<std::size_t>(k)] = ((r - k) % 2 ? -1.0 : 1.0) * static_cast<double>(binomial(r, k));
  return w;
}

// Maximum |Delta^r| of an analytic function over a family of (direction, step)
// pairs and the lattice {j / base_res}^d. Each pair is one work item.
double lattice_max(const CatalogFunction& f, int r, const std::vector<std::vector<double>>& directions,
                   const std::vector<double>& steps, int base_res) {
  const int d = f.dimension();
  const std::size_t per_axis = static_cast<std::size_t>(base_res) + 1;
  std::size_t lattice_size = 1;
  for (int j = 0; j < d; ++j) lattice_size *= per_axis;
  const std::size_t items = directions.size() * steps.size();
  const auto weights = signed_binomials(r);
  const double spacing = 1.0 / static_cast<double>(base_res);

  std::vector<double> chunk_max(thread_count(), 0.0);
  parallel_chunks(items, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    double best = 0.0;
    Point x(static_cast<std::size_t>(d));
    Point y(static_cast<std::size_t>(d));
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    for (std::size_t item = begin; item < end; ++item) {
      const auto& e = directions[item / steps.size()];
      const double h = steps[item % steps.size()];
      const double reach = static_cast<double>(r) * h;
      std::fill(idx.begin(), idx.end(), 0);
      for (std::size_t p = 0; p < lattice_size; ++p) {
        bool admissible = true;
        for (std::size_t j = 0; j < x.size(); ++j) {
          x[j] = static_cast<double>(idx[j]) * spacing;
          const double end_j = x[j] + reach * e[j];
          if (end_j < -kCubeTolerance || end_j > 1.0 + kCubeTolerance) admissible = false;
        }
        if (admissible) {
          double sum = 0.0;
          for (int k = 0; k <= r; ++k) {
            for (std::size_t j = 0; j < x.size(); ++j)
              y[j] = std::clamp(x[j] + static_cast<double>(k) * h * e[j], 0.0, 1.0);
            sum += weights[static_cast<std::size_t>(k)] * f(y);
          }
          best = std::max(best, std::abs(sum));
        }
        for (std::size_t j = x.size(); j-- > 0;) {
          if (++idx[j] < per_axis) break;
          idx[j] = 0;
        }
      }
    }
    chunk_max[chunk] = best;
  }, chunk_max.size());
  return *std::max_element(chunk_max.begin(), chunk_max.end());
}

double fractional(double v) { return v - std::floor(v); }

// SplitMix64 finaliser: maps the seed to a well-mixed 64-bit word.
std::uint64_t mix_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

DiscreteModulus discrete_modulus(const SampleField& field, int r, int stride) {
  check_order(r);
  if (stride < 1) throw validation_error("bounds", fmt::format("stride {} must be positive", stride));
  const auto& grid = field.grid();
  const std::int64_t reach = static_cast<std::int64_t>(r) * stride;
  if (grid.cells_per_axis() < reach)
    throw validation_error("level", fmt::format("level {} too coarse for order {} (2^n = {} < {})", grid.level(), r,
                                                grid.cells_per_axis(), reach));
  const auto weights = signed_binomials(r);
  const std::int64_t last = grid.cells_per_axis() - reach;

  DiscreteModulus result;
  result.per_axis.assign(static_cast<std::size_t>(grid.dimension()), 0.0);
  Best overall;
  int best_axis = 0;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const std::size_t step = grid.axis_stride(axis) * static_cast<std::size_t>(stride);
    std::vector<Best> partial(thread_count());
    parallel_chunks(grid.size(), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      Best best;
      const auto values = field.values();
      for (std::size_t p = begin; p < end; ++p) {
        if (grid.component(p, axis) > last) continue;
        double sum = 0.0;
        for (int k = 0; k <= r; ++k)
          sum += weights[static_cast<std::size_t>(k)] * values[p + static_cast<std::size_t>(k) * step];
        const double mag = std::abs(sum);
        if (mag > best.magnitude) best = {mag, sum, p};
      }
      partial[chunk] = best;
    }, partial.size());
    Best axis_best;
    for (const auto& b : partial)
      if (b.magnitude > axis_best.magnitude) axis_best = b;
    result.per_axis[static_cast<std::size_t>(axis)] = axis_best.magnitude;
    if (axis_best.magnitude > overall.magnitude) {
      overall = axis_best;
      best_axis = axis;
    }
  }
  result.value = overall.magnitude;
  result.argmax = {best_axis, grid.unflat(overall.flat), overall.value};
  return result;
}

double ModulusProfile::zero_threshold() const noexcept { return 1e-12 * scale; }

int min_level_for_order(int r) {
  int n = 0;
  while ((std::int64_t{1} << n) < r) ++n;
  return n;
}

ModulusProfile modulus_profile(const FunctionSource& source, int r, int n_min, int n_max) {
  check_order(r);
  if (n_min < min_level_for_order(r))
    throw validation_error("level", fmt::format("n_min {} below ceil(log2 {}) = {}", n_min, r, min_level_for_order(r)));
  if (n_max < n_min) throw validation_error("level", fmt::format("empty level range {}..{}", n_min, n_max));
  if (!source.is_analytic() && n_max > source.max_level())
    throw validation_error("resolution", fmt::format("n_max {} exceeds sampled source level {}", n_max, source.max_level()));
  ModulusProfile profile;
  profile.r = r;
  profile.d = source.dimension();
  profile.n_min = n_min;
  for (int n = n_min; n <= n_max; ++n) {
    const auto field = sample(source, make_grid(profile.d, n));
    auto dm = discrete_modulus(field, r);
    profile.psi.push_back(dm.value);
    profile.per_axis.push_back(std::move(dm.per_axis));
    profile.argmax.push_back(std::move(dm.argmax));
    if (n == n_max) profile.scale = field.max_abs();
  }
  return profile;
}

ModulusProfile profile_from_values(int r, int d, int n_min, std::vector<double> psi, double scale) {
  ModulusProfile profile;
  profile.r = r;
  profile.d = d;
  profile.n_min = n_min;
  profile.per_axis.reserve(psi.size());
  for (double v : psi) profile.per_axis.push_back(std::vector<double>(static_cast<std::size_t>(d), v));
  profile.psi = std::move(psi);
  profile.scale = scale;
  return profile;
}

NZero n_zero(int r, int n) {
  if (r < 1 || n < 0) throw validation_error("level", fmt::format("n_zero needs r >= 1 and n >= 0 (got r={}, n={})", r, n));
  if (n > 60) throw capacity_error(fmt::format("level {} too large for n_zero", n));
  // r 2^m <= 2^{n+1}
  const std::uint64_t limit = std::uint64_t{1} << (n + 1);
  const auto rr = static_cast<std::uint64_t>(r);
  if (rr > limit) return {0, true};
  int m = 0;
  while ((rr << (m + 1)) <= limit) ++m;
  return {m, false};
}

AxisBound axis_bound_rhs(const ModulusProfile& profile, int n) {
  if (!profile.covers(n))
    throw validation_error("range", fmt::format("level {} outside profile range {}..{}", n, profile.n_min, profile.n_max()));
  AxisBound bound;
  for (int m = n; m <= profile.n_max(); ++m) bound.value += profile.at(m);
  if (profile.psi.size() < 4) return bound;
  const double zero = profile.zero_threshold();
  auto clean = [&](double v) { return v <= zero ? 0.0 : v; };
  double rho = 0.0;
  for (int m = profile.n_max() - 3; m < profile.n_max(); ++m) {
    const double a = clean(profile.at(m));
    const double b = clean(profile.at(m + 1));
    const double ratio = a == 0.0 ? (b == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()) : b / a;
    rho = std::max(rho, ratio);
  }
  if (rho < kTailRatioLimit) {
    bound.ratio = rho;
    bound.tail = profile.at(profile.n_max()) * rho / (1.0 - rho);
    bound.value += bound.tail;
    bound.tail_truncated = false;
  }
  return bound;
}

const char* to_string(Weighting w) {
  return w == Weighting::theorem_statement ? "theorem-statement" : "proof-final-line";
}

Weighting parse_weighting(const std::string& text) {
  if (text == "theorem" || text == "theorem-statement") return Weighting::theorem_statement;
  if (text == "proof" || text == "proof-final-line") return Weighting::proof_final_line;
  throw validation_error("weighting", fmt::format("unknown weighting '{}', expected theorem or proof", text));
}

BoundReport omega_bound_rhs(const ModulusProfile& profile, int n, double t, double sup_norm, Weighting weighting) {
  if (n < 0) throw validation_error("level", fmt::format("level {} must be non-negative", n));
  if (!(t > std::ldexp(1.0, -n - 1) && t <= std::ldexp(1.0, -n)))
    throw validation_error("step", fmt::format("step t = {} outside (2^-{}, 2^-{}]", t, n + 1, n));
  BoundReport report;
  report.n = n;
  report.t = t;
  report.sup_norm = sup_norm;
  report.weighting = weighting;
  const auto axis = axis_bound_rhs(profile, n);
  report.axis_rhs = axis.value;
  report.tail_truncated = axis.tail_truncated;
  report.n0 = n_zero(profile.r, n);
  const int r = profile.r;
  for (int k = 1; k <= report.n0.value; ++k) {
    double psi = 0.0;
    if (profile.covers(n - k)) {
      psi = profile.at(n - k);
    } else {
      psi = profile.at(profile.n_min);
      report.coverage_warning = true;
    }
    const int exponent = weighting == Weighting::theorem_statement ? k * r : -k * r;
    report.middle_sum += std::ldexp(psi, exponent);
  }
  report.omega_rhs = report.axis_rhs + report.middle_sum + std::pow(t, r) * sup_norm;
  if (r == 1) report.omega1_rhs = report.axis_rhs;
  return report;
}

double directional_modulus_estimate(const FunctionSource& source, int r, int axis, double u, int base_res) {
  check_order(r);
  const auto& f = source.function();
  if (!(u > 0.0) || !std::isfinite(u)) throw validation_error("domain", fmt::format("step bound u = {} must be positive", u));
  if (base_res < 16) throw validation_error("resolution", fmt::format("base_res {} below 16", base_res));
  const auto e = direction_vector(axis, f.dimension());
  std::vector<double> steps;
  for (int j = 1; j <= base_res; ++j) steps.push_back(u * static_cast<double>(j) / static_cast<double>(base_res));
  return lattice_max(f, r, {e}, steps, base_res);
}

std::vector<double> omega_step_grid(double t, const OmegaEstimateOptions& options) {
  if (options.steps_per_octave < 1) throw validation_error("resolution", "steps_per_octave must be positive");
  std::vector<double> steps;
  const double smallest = std::ldexp(1.0, -options.min_step_exponent);
  for (int q = options.min_step_exponent; q >= -2; --q) {
    for (int j = 0; j < options.steps_per_octave; ++j) {
      const double h = std::ldexp(1.0 + static_cast<double>(j) / options.steps_per_octave, -q);
      if (h >= smallest && h <= t) steps.push_back(h);
    }
  }
  return steps;
}

std::vector<std::vector<double>> omega_directions(int d, int dir_count, std::uint64_t seed) {
  if (dir_count < 2 * d)
    throw validation_error("directions", fmt::format("dir_count {} below 2d = {}", dir_count, 2 * d));
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    dirs.push_back(std::move(e));
  }
  if (d == 1) return dirs;
  const int extra = dir_count - d;
  const double offset = static_cast<double>(mix_seed(seed) >> 11) * 0x1.0p-53;
  if (d == 2) {
    // Golden-ratio (Kronecker) angles over the half circle.
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int j = 0; j < extra; ++j) {
      const double theta = std::numbers::pi * fractional(offset + j * golden);
      dirs.push_back({std::cos(theta), std::sin(theta)});
    }
    return dirs;
  }
  // R_d low-discrepancy sequence in [-1, 1]^d, kept inside the unit ball
  // and normalised; the sign is fixed so the first nonzero component is positive.
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (d + 1));
  std::vector<double> alpha(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) alpha[static_cast<std::size_t>(j)] = fractional(std::pow(1.0 / phi, j + 1));
  std::mt19937_64 rng(mix_seed(seed));
  std::vector<double> shift(static_cast<std::size_t>(d));
  for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  for (long j = 0; static_cast<int>(dirs.size()) < dir_count; ++j) {
    std::vector<double> v(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c) {
      v[c] = 2.0 * fractional(shift[c] + static_cast<double>(j) * alpha[c]) - 1.0;
      norm2 += v[c] * v[c];
    }
    if (norm2 > 1.0 || norm2 < 0.01) continue;
    const double norm = std::sqrt(norm2);
    for (auto& c : v) c /= norm;
    const auto first = std::find_if(v.begin(), v.end(), [](double c) { return c != 0.0; });
    if (first != v.end() && *first < 0.0)
      for (auto& c : v) c = -c;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

double omega_estimate(const FunctionSource& source, int r, double t, const OmegaEstimateOptions& options) {
  check_order(r);
  const auto& f = source.function();
  if (!(t > 0.0) || !std::isfinite(t)) throw validation_error("domain", fmt::format("t = {} must be positive", t));
  if (options.base_res < 1) throw validation_error("resolution", "base_res must be positive");
  const auto dirs = omega_directions(f.dimension(), options.dir_count, options.seed);
  const auto steps = omega_step_grid(t, options);
  if (steps.empty()) return 0.0;
  return lattice_max(f, r, dirs, steps, options.base_res);
}

double sup_norm_estimate(const FunctionSource& source, int level, int base_res) {
  const int d = source.dimension();
  double best = sample(source, make_grid(d, std::min(level, source.max_level()))).max_abs();
  if (!source.is_analytic()) return best;
  const auto& f = source.function();
  const std::size_t per_axis = static_cast<std::size_t>(base_res) + 1;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  Point x(static_cast<std::size_t>(d));
  for (bool done = false; !done;) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = static_cast<double>(idx[j]) / base_res;
    best = std::max(best, std::abs(f(x)));
    done = true;
    for (std::size_t j = x.size(); j-- > 0;) {
      if (++idx[j] < per_axis) {
        done = false;
        break;
      }
      idx[j] = 0;
    }
  }
  return best;
}

}  // namespace dysmooth
