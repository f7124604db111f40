#include "dysmooth/certificates.hpp"

#include "dysmooth/error.hpp"
#include "dysmooth/fdiff.hpp"
#include "dysmooth/lagrange.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dysmooth {

namespace {

void check_lemma_order(int r, int lowest) {
  if (r < lowest || r > kMaxLemmaOrder)
    throw capacity_error(fmt::format("lemma order {} outside {}..{}", r, lowest, kMaxLemmaOrder));
}

BigInt big_binomial(int r, int m) {
  if (m < 0 || m > r) return 0;
  BigInt c = 1;
  for (int j = 1; j <= m; ++j) c = c * (r - m + j) / j;
  return c;
}

double dense_lebesgue(int r, int intervals) {
  const double width = static_cast<double>(r - 1);
  double best = 0.0;
  for (int j = 0; j <= intervals; ++j)
    best = std::max(best, uniform_lebesgue_function(r, width * j / intervals));
  return best;
}

}  // namespace

ExactMatrix lemma_matrix(int r) {
  check_lemma_order(r, 2);
  const auto size = static_cast<std::size_t>(r - 1);
  ExactMatrix m(size, size);
  for (int i = 1; i <= r - 1; ++i) {
    const int sign = (r + i) % 2 ? -1 : 1;
    for (int j = 1; j <= r - 1; ++j)
      m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = sign * big_binomial(r, 2 * j - i);
  }
  return m;
}

DeterminantCheck verify_determinant_identity(int r) {
  DeterminantCheck check;
  check.r = r;
  check.det = exact_determinant(lemma_matrix(r));
  check.expected = BigInt(1) << (r * (r - 1) / 2);
  check.pass = abs(check.det) == check.expected;
  return check;
}

Rational inverse_infinity_norm(const ExactMatrix& m) {
  if (exact_determinant(m) == 0)
    throw validation_error("singular", "matrix is singular; its inverse norm is undefined");
  const auto adj = exact_adjugate(m);
  BigInt best = 0;
  for (std::size_t i = 0; i < adj.adj.rows(); ++i) {
    BigInt row = 0;
    for (std::size_t j = 0; j < adj.adj.cols(); ++j) row += abs(adj.adj(i, j));
    best = std::max(best, row);
  }
  return Rational(best, abs(adj.det));
}

LebesgueConstant lebesgue_constant_uniform(int r, int resolution) {
  if (r < 1) throw validation_error("order", fmt::format("order {} must be positive", r));
  if (resolution < 1024) throw validation_error("resolution", fmt::format("resolution {} below 1024", resolution));
  if (r <= 2) return {1.0, resolution};
  double current = dense_lebesgue(r, resolution);
  int intervals = resolution;
  while (intervals < (1 << 24)) {
    const double refined = dense_lebesgue(r, intervals * 2);
    intervals *= 2;
    const bool stable = std::abs(refined - current) <= 1e-6;
    current = std::max(current, refined);
    if (stable) break;
  }
  return {current, intervals};
}

LemmaConstant1d lemma_constant_1d(int r) {
  if (r == 1) return {1, 1.0, Rational(1), 1.0};
  check_lemma_order(r, 2);
  LemmaConstant1d c;
  c.r = r;
  c.lebesgue = lebesgue_constant_uniform(r).value;
  c.c3 = inverse_infinity_norm(lemma_matrix(r));
  c.value = c.lebesgue * to_double(c.c3);
  return c;
}

LemmaConstantDd lemma_constant_dd(int r, int d) {
  if (d < 1 || d > 4) throw capacity_error(fmt::format("dimension {} outside 1..4", d));
  LemmaConstantDd out;
  out.r = r;
  out.d = d;
  out.one_dim = lemma_constant_1d(r);
  if (r == 1) {
    for (int m = 1; m <= d; ++m) out.by_dimension.push_back(static_cast<double>(m));
    out.value = static_cast<double>(d);
    out.assembly = fmt::format("r = 1: piecewise constants; c(1, d) = d = {}", d);
    return out;
  }
  const double lambda = out.one_dim.lebesgue;
  out.by_dimension.push_back(out.one_dim.value);
  out.assembly = fmt::format("c({0},1) = lebesgue {1:.17g} * c3 {2} = {3:.17g}", r, lambda, to_string(out.one_dim.c3),
                             out.one_dim.value);
  for (int m = 2; m <= d; ++m) {
    const double spread = std::pow(lambda, m - 1);
    const double previous = out.by_dimension.back();
    const double value = spread * (out.one_dim.value + lambda * previous);
    out.by_dimension.push_back(value);
    out.assembly += fmt::format("; c({0},{1}) = lebesgue^{2} * (c({0},1) + lebesgue * c({0},{2})) = {3:.17g}", r, m,
                                m - 1, value);
  }
  out.value = out.by_dimension.back();
  return out;
}

ConstantLedger make_ledger(int r, int d) {
  ConstantLedger ledger;
  ledger.r = r;
  ledger.d = d;
  ledger.breakdown = lemma_constant_dd(r, d);
  ledger.lebesgue_1d = ledger.breakdown.one_dim.lebesgue;
  ledger.lemma_c_1d = ledger.breakdown.one_dim.value;
  ledger.lemma_c_dd = ledger.breakdown.value;
  ledger.inv_inf_norm = ledger.breakdown.one_dim.c3;
  ledger.det_abs = r >= 2 ? BigInt(abs(exact_determinant(lemma_matrix(r)))) : BigInt(1);
  return ledger;
}

LemmaCheck lemma_bound_check(const LemmaInstance& instance, const ConstantLedger& ledger) {
  instance.validate();
  if (ledger.r != instance.r || ledger.d != instance.d)
    throw validation_error("pairing", fmt::format("ledger is for (r={}, d={}), instance is (r={}, d={})", ledger.r,
                                                  ledger.d, instance.r, instance.d));
  const int r = instance.r;
  const int d = instance.d;
  LemmaCheck check;
  check.constant = ledger.lemma_c_dd;
  check.samples_per_axis_per_cell = kSamplesPerOrder * r;
  check.max_difference = lemma_max_difference(instance);

  // Dense sampling: 4r points per axis in each of the 2^d cells of side r-1,
  // plus every grid value (the nodes themselves).
  for (double v : instance.values) check.g_norm = std::max(check.g_norm, std::abs(v));
  const int per_cell = check.samples_per_axis_per_cell;
  const int per_axis = 2 * per_cell;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> z(static_cast<std::size_t>(d));
  const double side = static_cast<double>(r - 1);
  for (bool done = false; !done;) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      const int cell = idx[j] / per_cell;
      const int local = idx[j] % per_cell;
      z[j] = side * cell + side * local / (per_cell - 1);
    }
    check.g_norm = std::max(check.g_norm, std::abs(lemma_evaluate(instance, z)));
    done = true;
    for (std::size_t j = z.size(); j-- > 0;) {
      if (++idx[j] < per_axis) {
        done = false;
        break;
      }
      idx[j] = 0;
    }
  }
  check.ratio = check.max_difference == 0.0 ? 0.0 : check.g_norm / check.max_difference;
  if (check.max_difference == 0.0)
    check.pass = check.g_norm == 0.0;
  else
    check.pass = check.ratio <= check.constant;
  return check;
}

ExactMatrix lemma_difference_map(int r, int d) {
  check_lemma_order(r, 2);
  if (d < 1 || d > 4) throw capacity_error(fmt::format("dimension {} outside 1..4", d));
  const std::int64_t side = 2 * r - 1;
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(side);

  auto unflat = [&](std::size_t p) {
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    for (int j = d - 1; j >= 0; --j) {
      k[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(p % static_cast<std::size_t>(side));
      p /= static_cast<std::size_t>(side);
    }
    return k;
  };
  auto flat = [&](const std::vector<std::int64_t>& k) {
    std::size_t p = 0;
    for (auto c : k) p = p * static_cast<std::size_t>(side) + static_cast<std::size_t>(c);
    return p;
  };
  // Column index of each free (non-all-even) grid point.
  std::vector<long> column(total, -1);
  std::size_t unknowns = 0;
  for (std::size_t p = 0; p < total; ++p) {
    const auto k = unflat(p);
    if (std::any_of(k.begin(), k.end(), [](std::int64_t c) { return c % 2 != 0; }))
      column[p] = static_cast<long>(unknowns++);
  }
  std::vector<std::vector<std::pair<std::size_t, long long>>> rows;
  for (int axis = 0; axis < d; ++axis) {
    for (std::size_t p = 0; p < total; ++p) {
      const auto k = unflat(p);
      if (k[static_cast<std::size_t>(axis)] > r - 2) continue;
      std::vector<std::pair<std::size_t, long long>> row;
      auto point = k;
      for (int m = 0; m <= r; ++m) {
        point[static_cast<std::size_t>(axis)] = k[static_cast<std::size_t>(axis)] + m;
        const long col = column[flat(point)];
        if (col < 0) continue;
        row.emplace_back(static_cast<std::size_t>(col),
                         ((r - m) % 2 ? -1LL : 1LL) * big_binomial(r, m).convert_to<long long>());
      }
      rows.push_back(std::move(row));
    }
  }
  ExactMatrix map(rows.size(), unknowns);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [col, coef] : rows[i]) map(i, col) = coef;
  return map;
}

KernelCheck lemma_kernel_check(int r, int d) {
  const auto map = lemma_difference_map(r, d);
  KernelCheck check;
  check.unknowns = map.cols();
  check.equations = map.rows();
  check.rank = exact_rank(map);
  check.trivial = check.rank == check.unknowns;
  return check;
}

}  // namespace dysmooth
