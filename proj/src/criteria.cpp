#include "kernlat/criteria.hpp"

#include <cmath>

#include "kernlat/errors.hpp"
#include "kernlat/spectral.hpp"

namespace kernlat {

std::string to_string(CriterionKind kind) { return kind == CriterionKind::S ? "S" : "P"; }

CriterionKind parse_criterion(std::string_view name) {
  if (name == "S" || name == "s") return CriterionKind::S;
  if (name == "P" || name == "p") return CriterionKind::P;
  throw InvalidArgumentError("unknown criterion '" + std::string(name) + "' (expected S or P)");
}

namespace {

void check_dims(const GeneratingVector& gv, const SpaceParams& params) {
  if (gv.d() != params.d()) {
    throw DimensionMismatchError("generating vector has d = " + std::to_string(gv.d()) +
                                 ", space has d = " + std::to_string(params.d()));
  }
}

// omega(alpha, r/n) for r = 0..n-1, evaluated on folded residues.
template <class Real>
std::vector<Real> omega_table(const SpaceConstants<Real>& c, long n) {
  std::vector<Real> t(static_cast<std::size_t>(n));
  const Real nn(n);
  for (long r = 0; r <= n / 2; ++r) {
    t[static_cast<std::size_t>(r)] = c.omega(Real(r) / nn);
    if (r > 0) t[static_cast<std::size_t>(n - r)] = t[static_cast<std::size_t>(r)];
  }
  return t;
}

// -B_{4 alpha}(r/n) (2 pi)^{4 alpha} / (4 alpha)! for r = 0..n-1.
template <class Real>
std::vector<Real> omega_squared_table(const SpaceConstants<Real>& c, long n) {
  std::vector<Real> t(static_cast<std::size_t>(n));
  const Real nn(n);
  for (long r = 0; r <= n / 2; ++r) {
    t[static_cast<std::size_t>(r)] = c.omega_squared_kernel(Real(r) / nn);
    if (r > 0) t[static_cast<std::size_t>(n - r)] = t[static_cast<std::size_t>(r)];
  }
  return t;
}

}  // namespace

template <class Real>
Real clamp_nonnegative(const Real& value, const Real& magnitude, const char* what) {
  using std::abs;
  if (value >= Real(0)) return value;
  const Real limit = working_tolerance<Real>() * abs(magnitude);
  if (-value > limit) {
    throw PrecisionLossError(std::string(what) + " evaluated to " +
                             std::to_string(to_double(value)) +
                             ", below round-off tolerance; increase precision");
  }
  return Real(0);
}

template <class Real>
Real s_quantity(const GeneratingVector& gv, const SpaceParams& params) {
  check_dims(gv, params);
  const long n = gv.n();
  const auto c = SpaceConstants<Real>::make(params.alpha());
  const auto g = params.gammas<Real>();
  const auto om = omega_table(c, n);

  Real first(1), second(1);
  const Real two_zeta4 = Real(2) * c.zeta_4a;
  const Real two_zeta2 = Real(2) * c.zeta_2a;
  for (const Real& gj : g) {
    first *= Real(1) + gj * gj * two_zeta4;
    Real f = Real(1) + gj * two_zeta2;
    second *= f * f;
  }

  Real sum(0), prod, factor;
  for (long k = 1; k < n; ++k) {
    prod = Real(1);
    for (std::size_t j = 0; j < g.size(); ++j) {
      factor = g[j];
      factor *= om[static_cast<std::size_t>(gv.residue(k, j))];
      factor += Real(1);
      prod *= factor;
      prod *= factor;
    }
    sum += prod;
  }
  const Real nn(n);
  const Real value = second / nn + sum / nn - first;
  Real largest = first;
  if (second / nn > largest) largest = second / nn;
  if (sum / nn > largest) largest = sum / nn;
  return clamp_nonnegative(value, largest, "S_{n,d}(z)");
}

template <class Real>
Real s_star_from_quantity(const Real& s) {
  using std::sqrt;
  return sqrt(Real(2)) * sqrt(sqrt(s));
}

CriterionValue s_star(const GeneratingVector& gv, const SpaceParams& params,
                      PrecisionContext ctx) {
  CriterionValue out{CriterionKind::S, 0.0, gv.n(), gv.d(), params.alpha(),
                     params.weights().name(), ctx.mantissa_bits};
  if (ctx.is_native()) {
    out.value = s_star_from_quantity(s_quantity<double>(gv, params));
  } else {
    PrecisionScope scope(ctx);
    out.value = to_double(s_star_from_quantity(s_quantity<MpReal>(gv, params)));
  }
  return out;
}

template <class Real>
Real k_entry(const SpaceParams& params, const GeneratingVector& gv, long shift) {
  check_dims(gv, params);
  const long n = gv.n();
  const auto c = SpaceConstants<Real>::make(params.alpha());
  const auto g = params.gammas<Real>();
  const long s = ((shift % n) + n) % n;
  Real k(1);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const long r = fold_residue(gv.residue(s, j), n);
    k *= Real(1) + g[j] * c.omega(Real(r) / Real(n));
  }
  return k;
}

template <class Real>
Real m_entry(const SpaceParams& params, const GeneratingVector& gv, long shift) {
  check_dims(gv, params);
  const long n = gv.n();
  const auto c = SpaceConstants<Real>::make(params.alpha());
  const auto g = params.gammas<Real>();
  const long s = ((shift % n) + n) % n;
  Real m(1);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const long r = fold_residue(gv.residue(s, j), n);
    m *= Real(1) + g[j] * g[j] * c.omega_squared_kernel(Real(r) / Real(n));
  }
  return m;
}

template <class Real>
std::vector<Real> k_column(const SpaceParams& params, const GeneratingVector& gv) {
  check_dims(gv, params);
  const long n = gv.n();
  const auto c = SpaceConstants<Real>::make(params.alpha());
  const auto g = params.gammas<Real>();
  const auto om = omega_table(c, n);
  std::vector<Real> col(static_cast<std::size_t>(n), Real(1));
  Real factor;
  for (std::size_t j = 0; j < g.size(); ++j) {
    for (long l = 0; l < n; ++l) {
      factor = g[j];
      factor *= om[static_cast<std::size_t>(gv.residue(l, j))];
      factor += Real(1);
      col[static_cast<std::size_t>(l)] *= factor;
    }
  }
  return col;
}

template <class Real>
std::vector<Real> m_column(const SpaceParams& params, const GeneratingVector& gv) {
  check_dims(gv, params);
  const long n = gv.n();
  const auto c = SpaceConstants<Real>::make(params.alpha());
  const auto g = params.gammas<Real>();
  const auto om2 = omega_squared_table(c, n);
  std::vector<Real> col(static_cast<std::size_t>(n), Real(1));
  Real factor;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Real g2 = g[j] * g[j];
    for (long l = 0; l < n; ++l) {
      factor = g2;
      factor *= om2[static_cast<std::size_t>(gv.residue(l, j))];
      factor += Real(1);
      col[static_cast<std::size_t>(l)] *= factor;
    }
  }
  return col;
}

template <class Real>
Real p_star_squared(const GeneratingVector& gv, const SpaceParams& params) {
  const auto kc = k_column<Real>(params, gv);
  const auto mc = m_column<Real>(params, gv);
  const Real diag = kernel_diagonal<Real>(params);
  const Real trace = ratio_trace<Real>(mc, kc);
  return clamp_nonnegative(diag - trace, diag, "P*^2");
}

CriterionValue p_star(const GeneratingVector& gv, const SpaceParams& params,
                      PrecisionContext ctx) {
  CriterionValue out{CriterionKind::P, 0.0, gv.n(), gv.d(), params.alpha(),
                     params.weights().name(), ctx.mantissa_bits};
  if (ctx.is_native()) {
    out.value = std::sqrt(p_star_squared<double>(gv, params));
  } else {
    PrecisionScope scope(ctx);
    using std::sqrt;
    out.value = to_double(sqrt(p_star_squared<MpReal>(gv, params)));
  }
  return out;
}

template <class Real>
Real power_pointwise(const GeneratingVector& gv, const SpaceParams& params,
                     std::span<const Real> y) {
  using std::sqrt;
  check_dims(gv, params);
  if (y.size() != static_cast<std::size_t>(gv.d())) {
    throw DimensionMismatchError("power_pointwise: point has wrong dimension");
  }
  const long n = gv.n();
  const auto c = SpaceConstants<Real>::make(params.alpha());
  const auto g = params.gammas<Real>();
  const Real nn(n);

  std::vector<Real> k_y(static_cast<std::size_t>(n), Real(1));
  for (long k = 0; k < n; ++k) {
    Real& v = k_y[static_cast<std::size_t>(k)];
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Real t = Real(gv.residue(k, j)) / nn;
      v *= Real(1) + g[j] * c.omega(fractional_part<Real>(t - y[j]));
    }
  }
  const CirculantOperator<Real> kop(k_column<Real>(params, gv));
  const auto mu = circulant_solve<Real>(kop, k_y);
  Real quad(0);
  for (std::size_t k = 0; k < k_y.size(); ++k) quad += k_y[k] * mu[k];
  const Real diag = kernel_diagonal<Real>(params);
  return sqrt(clamp_nonnegative(diag - quad, diag, "P_Lambda(y)^2"));
}

double power_pointwise(const GeneratingVector& gv, const SpaceParams& params,
                       std::span<const double> y, PrecisionContext ctx) {
  if (ctx.is_native()) return power_pointwise<double>(gv, params, y);
  PrecisionScope scope(ctx);
  std::vector<MpReal> yy(y.begin(), y.end());
  return to_double(power_pointwise<MpReal>(gv, params, yy));
}

#define KERNLAT_INSTANTIATE(Real)                                                            \
  template Real clamp_nonnegative<Real>(const Real&, const Real&, const char*);              \
  template Real s_quantity<Real>(const GeneratingVector&, const SpaceParams&);               \
  template Real s_star_from_quantity<Real>(const Real&);                                     \
  template Real k_entry<Real>(const SpaceParams&, const GeneratingVector&, long);            \
  template Real m_entry<Real>(const SpaceParams&, const GeneratingVector&, long);            \
  template std::vector<Real> k_column<Real>(const SpaceParams&, const GeneratingVector&);    \
  template std::vector<Real> m_column<Real>(const SpaceParams&, const GeneratingVector&);    \
  template Real p_star_squared<Real>(const GeneratingVector&, const SpaceParams&);           \
  template Real power_pointwise<Real>(const GeneratingVector&, const SpaceParams&,           \
                                      std::span<const Real>);

KERNLAT_INSTANTIATE(double)
KERNLAT_INSTANTIATE(MpReal)

#undef KERNLAT_INSTANTIATE

}  // namespace kernlat
