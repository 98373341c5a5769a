#include "kernlat/oracles.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <optional>

#include "kernlat/cbc.hpp"
#include "kernlat/errors.hpp"

namespace kernlat::oracles {

namespace {

void poll(const Budget& budget) {
  if (budget.cancel && budget.cancel->load(std::memory_order_relaxed)) {
    throw ResourceGuardError("oracle cancelled");
  }
}

void charge(const Budget& budget, double cells, const char* what) {
  if (cells > static_cast<double>(budget.max_cells)) {
    throw ResourceGuardError(std::string(what) + ": " + std::to_string(cells) +
                             " cells exceed budget of " + std::to_string(budget.max_cells));
  }
}

}  // namespace

double s_oracle(const GeneratingVector& gv, const SpaceParams& params, long H, const Budget& budget) {
  if (gv.d() != params.d()) throw DimensionMismatchError("s_oracle: dimension mismatch");
  if (H < 0) throw InvalidArgumentError("s_oracle: H must be >= 0");
  const long n = gv.n();
  const int d = gv.d();
  const double width = 2.0 * H + 1.0;
  charge(budget, static_cast<double>(d) * (width * width + static_cast<double>(n) * n), "s_oracle");

  // Per coordinate, G(l) = sum_{|h| <= H} w(h) w(h + l) for |l| <= H, binned
  // by the exact residue l z_j mod n; the dual condition sum_j l_j z_j = 0
  // (mod n) is then a cyclic convolution of the bins evaluated at 0.
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  acc[0] = 1.0;
  double zero_shift = 1.0;
  for (int j = 0; j < d; ++j) {
    poll(budget);
    const double gamma = params.weights().gamma<double>(j + 1, params.alpha());
    auto w = [&](long h) {
      return h == 0 ? 1.0 : gamma / std::pow(static_cast<double>(std::labs(h)), 2 * params.alpha());
    };
    const long zj = gv[static_cast<std::size_t>(j)];
    std::vector<double> bins(static_cast<std::size_t>(n), 0.0);
    for (long l = -H; l <= H; ++l) {
      double g = 0.0;
      for (long h = H; h >= -H; --h) g += w(h) * w(h + l);
      if (l == 0) zero_shift *= g;
      const long r = static_cast<long>(((static_cast<__int128>(l) * zj) % n + n) % n);
      bins[static_cast<std::size_t>(r)] += g;
    }
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (long a = 0; a < n; ++a) {
      if (acc[static_cast<std::size_t>(a)] == 0.0) continue;
      for (long b = 0; b < n; ++b) {
        next[static_cast<std::size_t>((a + b) % n)] +=
            acc[static_cast<std::size_t>(a)] * bins[static_cast<std::size_t>(b)];
      }
    }
    acc = std::move(next);
  }
  return std::max(0.0, acc[0] - zero_shift);
}

template <class Real>
std::vector<std::vector<Real>> dense_solve(std::vector<std::vector<Real>> a,
                                           std::vector<std::vector<Real>> b) {
  using std::abs;
  const std::size_t n = a.size();
  if (b.size() != n) throw DimensionMismatchError("dense_solve: rhs has wrong row count");
  Real scale(0);
  for (const auto& row : a) {
    if (row.size() != n) throw DimensionMismatchError("dense_solve: matrix is not square");
    for (const auto& v : row) {
      if (abs(v) > scale) scale = abs(v);
    }
  }
  const Real tiny = scale * Real(static_cast<long>(std::max<std::size_t>(n, 16))) *
                    Real(std::ldexp(1.0, -working_bits<Real>()));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    }
    if (!(abs(a[piv][col]) > tiny)) throw SingularOperatorError("dense_solve: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real f = a[r][col] / a[col][col];
      if (f == Real(0)) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      for (std::size_t c = 0; c < b[r].size(); ++c) b[r][c] -= f * b[col][c];
    }
  }
  for (std::size_t ri = n; ri-- > 0;) {
    for (std::size_t c = 0; c < b[ri].size(); ++c) {
      Real s = b[ri][c];
      for (std::size_t k = ri + 1; k < n; ++k) s -= a[ri][k] * b[k][c];
      b[ri][c] = s / a[ri][ri];
    }
  }
  return b;
}

template <class Real>
std::vector<Real> dense_solve(const std::vector<std::vector<Real>>& a, const std::vector<Real>& b) {
  std::vector<std::vector<Real>> rhs;
  rhs.reserve(b.size());
  for (const auto& v : b) rhs.push_back({v});
  auto x = dense_solve<Real>(a, std::move(rhs));
  std::vector<Real> out;
  out.reserve(x.size());
  for (auto& row : x) out.push_back(std::move(row[0]));
  return out;
}

namespace {

template <class Real>
std::vector<std::vector<Real>> points_at(const GeneratingVector& gv) {
  std::vector<std::vector<Real>> t(static_cast<std::size_t>(gv.n()));
  for (long k = 0; k < gv.n(); ++k) {
    for (int j = 0; j < gv.d(); ++j) {
      t[static_cast<std::size_t>(k)].push_back(Real(gv.residue(k, static_cast<std::size_t>(j))) /
                                               Real(gv.n()));
    }
  }
  return t;
}

}  // namespace

template <class Real>
std::vector<std::vector<Real>> dense_kernel_matrix(const GeneratingVector& gv,
                                                   const SpaceParams& params) {
  const auto t = points_at<Real>(gv);
  const std::size_t n = t.size();
  std::vector<std::vector<Real>> k(n, std::vector<Real>(n));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t c = 0; c < n; ++c) {
      k[l][c] = kernel_eval<Real>(params, t[l], t[c]);
    }
  }
  return k;
}

template <class Real>
std::vector<std::vector<Real>> dense_m_matrix(const GeneratingVector& gv,
                                              const SpaceParams& params) {
  const auto t = points_at<Real>(gv);
  const std::size_t n = t.size();
  const int alpha = params.alpha();
  const auto g = params.gammas<Real>();
  // (2 pi)^{4 alpha} / (4 alpha)!
  Real scale(1);
  const Real two_pi = Real(2) * pi_constant<Real>();
  for (int i = 1; i <= 4 * alpha; ++i) scale *= two_pi / Real(i);
  std::vector<std::vector<Real>> m(n, std::vector<Real>(n));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t c = 0; c < n; ++c) {
      Real v(1);
      for (std::size_t j = 0; j < g.size(); ++j) {
        const Real x = fractional_part<Real>(t[l][j] - t[c][j]);
        v *= Real(1) - scale * g[j] * g[j] * bernoulli_periodic<Real>(4 * alpha, x);
      }
      m[l][c] = v;
    }
  }
  return m;
}

template <class Real>
Real p_oracle_dense_squared(const GeneratingVector& gv, const SpaceParams& params) {
  if (gv.n() > 128) throw ResourceGuardError("p_oracle_dense: n must be <= 128");
  auto k = dense_kernel_matrix<Real>(gv, params);
  auto m = dense_m_matrix<Real>(gv, params);
  const auto x = dense_solve<Real>(std::move(k), std::move(m));
  Real trace(0);
  for (std::size_t i = 0; i < x.size(); ++i) trace += x[i][i];
  const Real diag = kernel_diagonal<Real>(params);
  return clamp_nonnegative(diag - trace, diag, "dense P*^2");
}

double p_oracle_dense(const GeneratingVector& gv, const SpaceParams& params, PrecisionContext ctx) {
  if (ctx.is_native()) return std::sqrt(p_oracle_dense_squared<double>(gv, params));
  PrecisionScope scope(ctx);
  using std::sqrt;
  return to_double(sqrt(p_oracle_dense_squared<MpReal>(gv, params)));
}

namespace {

template <class Real>
double p_integral_impl(const GeneratingVector& gv, const SpaceParams& params, int panels,
                       const Budget& budget) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
    const double x = Rule::abscissa()[i];
    const double w = Rule::weights()[i];
    for (int p = 0; p < panels; ++p) {
      const double lo = static_cast<double>(p) / panels;
      const double half = 0.5 / panels;
      nodes.push_back(lo + half * (1.0 + x));
      weights.push_back(half * w);
      if (x != 0.0) {
        nodes.push_back(lo + half * (1.0 - x));
        weights.push_back(half * w);
      }
    }
  }
  const int d = gv.d();
  const std::size_t m = nodes.size();
  Real total(0);
  std::vector<Real> y(static_cast<std::size_t>(d));
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Real w(1);
    for (int j = 0; j < d; ++j) {
      y[static_cast<std::size_t>(j)] = Real(nodes[idx[static_cast<std::size_t>(j)]]);
      w *= Real(weights[idx[static_cast<std::size_t>(j)]]);
    }
    const Real p = power_pointwise<Real>(gv, params, y);
    total += w * p * p;
    int j = 0;
    for (; j < d; ++j) {
      if (++idx[static_cast<std::size_t>(j)] < m) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j == d) break;
    poll(budget);
  }
  using std::sqrt;
  return to_double(sqrt(total));
}

}  // namespace

double p_integral_oracle(const GeneratingVector& gv, const SpaceParams& params, int panels,
                         PrecisionContext ctx, const Budget& budget) {
  if (gv.d() > 2) throw InvalidArgumentError("p_integral_oracle: d must be <= 2");
  if (panels < 1) throw InvalidArgumentError("p_integral_oracle: panels must be >= 1");
  charge(budget, std::pow(8.0 * panels, gv.d()) * static_cast<double>(gv.n()), "p_integral_oracle");
  if (ctx.is_native()) return p_integral_impl<double>(gv, params, panels, budget);
  PrecisionScope scope(ctx);
  return p_integral_impl<MpReal>(gv, params, panels, budget);
}

double m_entry_fourier(const SpaceParams& params, const GeneratingVector& gv, long shift, long H) {
  if (gv.d() != params.d()) throw DimensionMismatchError("m_entry_fourier: dimension mismatch");
  const long n = gv.n();
  const long s = ((shift % n) + n) % n;
  double prod = 1.0;
  for (int j = 0; j < gv.d(); ++j) {
    const double gamma = params.weights().gamma<double>(j + 1, params.alpha());
    const double x = static_cast<double>(gv.residue(s, static_cast<std::size_t>(j))) / n;
    double sum = 0.0;
    for (long h = H; h >= 1; --h) {
      sum += 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(h) * x) /
             std::pow(static_cast<double>(h), 4 * params.alpha());
    }
    prod *= 1.0 + gamma * gamma * sum;
  }
  return prod;
}

namespace {

template <class Real>
GeneratingVector exhaustive_impl(long n, int d, const SpaceParams& params, CriterionKind kind) {
  using std::abs;
  // Every unit yields the same one-dimensional point set.
  std::vector<long> z{1};
  const auto cands = units(n);
  for (int s = 2; s <= d; ++s) {
    const SpaceParams sp = params.with_dimension(s);
    std::vector<std::optional<Real>> score(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      auto trial = z;
      trial.push_back(cands[i]);
      const GeneratingVector gv(n, trial);
      try {
        score[i] = kind == CriterionKind::S ? s_quantity<Real>(gv, sp)
                                            : p_oracle_dense_squared<Real>(gv, sp);
      } catch (const SingularOperatorError&) {
      }
    }
    std::optional<Real> best;
    // Both criteria are small differences of terms of size K(y,y) (S: squared).
    const Real diag = kernel_diagonal<Real>(sp);
    Real scale = kind == CriterionKind::S ? diag * diag : diag;
    for (const auto& v : score) {
      if (!v) continue;
      if (!best || *v < *best) best = *v;
      if (abs(*v) > scale) scale = abs(*v);
    }
    if (!best) throw SingularOperatorError("cbc_exhaustive_oracle: no admissible candidate");
    const Real tol = working_tolerance<Real>(kCbcTieSlack) * scale;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (score[i] && *score[i] - *best <= tol) {
        z.push_back(cands[i]);
        break;
      }
    }
  }
  return GeneratingVector(n, z);
}

}  // namespace

GeneratingVector cbc_exhaustive_oracle(long n, int d, const SpaceParams& params, CriterionKind kind,
                                       PrecisionContext ctx) {
  if (n < 2 || d < 1) throw InvalidArgumentError("cbc_exhaustive_oracle: need n >= 2, d >= 1");
  if (n > 64 || d > 4) throw ResourceGuardError("cbc_exhaustive_oracle: limited to n <= 64, d <= 4");
  if (ctx.is_native()) return exhaustive_impl<double>(n, d, params, kind);
  PrecisionScope scope(ctx);
  return exhaustive_impl<MpReal>(n, d, params, kind);
}

#define KERNLAT_INSTANTIATE(Real)                                                               \
  template std::vector<std::vector<Real>> dense_solve<Real>(std::vector<std::vector<Real>>,     \
                                                            std::vector<std::vector<Real>>);    \
  template std::vector<Real> dense_solve<Real>(const std::vector<std::vector<Real>>&,           \
                                               const std::vector<Real>&);                       \
  template std::vector<std::vector<Real>> dense_kernel_matrix<Real>(const GeneratingVector&,    \
                                                                    const SpaceParams&);        \
  template std::vector<std::vector<Real>> dense_m_matrix<Real>(const GeneratingVector&,         \
                                                               const SpaceParams&);             \
  template Real p_oracle_dense_squared<Real>(const GeneratingVector&, const SpaceParams&);

KERNLAT_INSTANTIATE(double)
KERNLAT_INSTANTIATE(MpReal)

#undef KERNLAT_INSTANTIATE

}  // namespace kernlat::oracles
