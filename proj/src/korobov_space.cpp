#include "kernlat/korobov_space.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "kernlat/errors.hpp"

namespace kernlat {

namespace {

// Rational coefficients of B_q, highest degree first: {num, den}.
struct Coef {
  long num;
  long den;
};

std::span<const Coef> bernoulli_coefficients(int q) {
  static constexpr Coef b2[] = {{1, 1}, {-1, 1}, {1, 6}};
  static constexpr Coef b4[] = {{1, 1}, {-2, 1}, {1, 1}, {0, 1}, {-1, 30}};
  static constexpr Coef b6[] = {{1, 1}, {-3, 1}, {5, 2}, {0, 1}, {-1, 2}, {0, 1}, {1, 42}};
  static constexpr Coef b8[] = {{1, 1},  {-4, 1}, {14, 3}, {0, 1}, {-7, 3},
                                {0, 1},  {2, 3},  {0, 1},  {-1, 30}};
  switch (q) {
    case 2: return b2;
    case 4: return b4;
    case 6: return b6;
    case 8: return b8;
    default:
      throw UnsupportedOrderError("Bernoulli polynomial of order " + std::to_string(q) +
                                  " not supported (orders 2, 4, 6, 8)");
  }
}

long factorial(int k) {
  long r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

template <class Real>
Real int_pow(Real base, int e) {
  Real r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- weights

ProductWeights ProductWeights::explicit_list(std::vector<double> gammas) {
  if (gammas.empty()) throw InvalidArgumentError("explicit weight list is empty");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] >= 0.0) || !std::isfinite(gammas[i])) {
      throw InvalidArgumentError("weight gamma_" + std::to_string(i + 1) + " must be >= 0");
    }
  }
  ProductWeights w(WeightScheme::Explicit);
  w.explicit_ = std::move(gammas);
  return w;
}

ProductWeights ProductWeights::parse(std::string_view name) {
  if (name == "poly3a") return poly3alpha();
  if (name == "poly2") return poly2();
  if (name == "geo09") return geometric09();
  if (name == "equal") return equal();
  if (name.starts_with("list:")) {
    std::vector<double> values;
    std::string_view rest = name.substr(5);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string token(rest.substr(0, comma));
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw InvalidArgumentError("weight list entry '" + token + "' is not a number");
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return explicit_list(std::move(values));
  }
  throw UnsupportedWeightsError("unknown weight scheme '" + std::string(name) +
                             "' (expected poly3a, poly2, geo09, equal or list:...)");
}

std::string ProductWeights::name() const {
  switch (scheme_) {
    case WeightScheme::Poly3Alpha: return "poly3a";
    case WeightScheme::Poly2: return "poly2";
    case WeightScheme::Geometric09: return "geo09";
    case WeightScheme::Equal: return "equal";
    case WeightScheme::Explicit: break;
  }
  std::ostringstream os;
  os.precision(17);
  os << "list:";
  for (std::size_t i = 0; i < explicit_.size(); ++i) os << (i ? "," : "") << explicit_[i];
  return os.str();
}

std::string ProductWeights::file_token() const {
  return scheme_ == WeightScheme::Explicit ? "list" : name();
}

template <class Real>
Real ProductWeights::gamma(int j, int alpha) const {
  if (j < 1) throw InvalidArgumentError("weight index must be >= 1");
  if (scheme_ == WeightScheme::Explicit) {
    if (static_cast<std::size_t>(j) > explicit_.size()) {
      throw InvalidArgumentError("explicit weight list has no entry for coordinate " +
                                 std::to_string(j));
    }
    return Real(explicit_[j - 1]);
  }
  const Real scale = Real(1) / int_pow(pi_constant<Real>(), 2 * alpha);
  switch (scheme_) {
    case WeightScheme::Poly3Alpha: return scale / int_pow(Real(j), 3 * alpha);
    case WeightScheme::Poly2: return scale / (Real(j) * Real(j));
    case WeightScheme::Geometric09: return scale * int_pow(rational<Real>(9, 10), j - 1);
    default: return scale;
  }
}

SpaceParams::SpaceParams(int alpha, ProductWeights weights, int d)
    : alpha_(alpha), weights_(std::move(weights)), d_(d) {
  if (alpha_ < 1) throw InvalidArgumentError("alpha must be a positive integer");
  if (d_ < 1) throw InvalidArgumentError("dimension d must be >= 1");
  if (weights_.scheme() == WeightScheme::Explicit &&
      weights_.explicit_values().size() < static_cast<std::size_t>(d_)) {
    throw InvalidArgumentError("explicit weight list has " +
                               std::to_string(weights_.explicit_values().size()) +
                               " entries, dimension is " + std::to_string(d_));
  }
}

template <class Real>
std::vector<Real> SpaceParams::gammas() const {
  std::vector<Real> g;
  g.reserve(static_cast<std::size_t>(d_));
  for (int j = 1; j <= d_; ++j) g.push_back(weights_.gamma<Real>(j, alpha_));
  return g;
}

// ---------------------------------------------------------------- frequencies

std::vector<int> FrequencyVector::support() const {
  std::vector<int> s;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] != 0) s.push_back(static_cast<int>(j));
  }
  return s;
}

bool FrequencyVector::is_zero() const {
  for (long v : h) {
    if (v != 0) return false;
  }
  return true;
}

FrequencyVector FrequencyVector::operator-() const {
  FrequencyVector r = *this;
  for (long& v : r.h) v = -v;
  return r;
}

// ---------------------------------------------------------------- closed forms

template <class Real>
Real bernoulli_periodic(int q, const Real& x) {
  auto coefs = bernoulli_coefficients(q);
  Real acc = rational<Real>(coefs[0].num, coefs[0].den);
  for (std::size_t i = 1; i < coefs.size(); ++i) {
    acc *= x;
    if (coefs[i].num != 0) acc += rational<Real>(coefs[i].num, coefs[i].den);
  }
  return acc;
}

template <class Real>
Real zeta_even(int s) {
  long den = 0;
  switch (s) {
    case 2: den = 6; break;
    case 4: den = 90; break;
    case 6: den = 945; break;
    case 8: den = 9450; break;
    default:
      throw UnsupportedOrderError("zeta(" + std::to_string(s) +
                                  ") not supported (arguments 2, 4, 6, 8)");
  }
  return int_pow(pi_constant<Real>(), s) / Real(den);
}

template <class Real>
SpaceConstants<Real> SpaceConstants<Real>::make(int alpha) {
  if (alpha < 1 || 2 * alpha > 8) {
    throw UnsupportedOrderError("alpha = " + std::to_string(alpha) + " not supported");
  }
  const Real two_pi = Real(2) * pi_constant<Real>();
  Real omega_scale = int_pow(two_pi, 2 * alpha) / Real(factorial(2 * alpha));
  if (alpha % 2 == 0) omega_scale = -omega_scale;
  // B_{4 alpha} and zeta(4 alpha) only exist in closed form for alpha <= 2;
  // leave them NaN otherwise so misuse is loud.
  Real square_scale(std::nan(""));
  Real zeta_4a(std::nan(""));
  if (4 * alpha <= 8) {
    square_scale = int_pow(two_pi, 4 * alpha) / Real(factorial(4 * alpha));
    zeta_4a = zeta_even<Real>(4 * alpha);
  }
  return SpaceConstants{alpha, omega_scale, square_scale, zeta_even<Real>(2 * alpha), zeta_4a};
}

template <class Real>
Real omega(int alpha, const Real& x) {
  return SpaceConstants<Real>::make(alpha).omega(x);
}

template <class Real>
Real fractional_part(const Real& x) {
  using std::floor;
  Real f = x - floor(x);
  // x slightly below an integer can round up to exactly 1
  if (f >= Real(1)) f -= Real(1);
  return f;
}

template <class Real>
Real kernel_eval(const SpaceParams& params, std::span<const Real> x, std::span<const Real> y) {
  const auto d = static_cast<std::size_t>(params.d());
  if (x.size() != d || y.size() != d) {
    throw DimensionMismatchError("kernel_eval: points must have dimension " + std::to_string(d));
  }
  const auto c = SpaceConstants<Real>::make(params.alpha());
  const auto g = params.gammas<Real>();
  Real k(1);
  for (std::size_t j = 0; j < d; ++j) {
    k *= Real(1) + g[j] * c.omega(fractional_part<Real>(x[j] - y[j]));
  }
  return k;
}

template <class Real>
Real kernel_diagonal(const SpaceParams& params) {
  const Real two_zeta = Real(2) * zeta_even<Real>(2 * params.alpha());
  Real k(1);
  for (const Real& g : params.gammas<Real>()) k *= Real(1) + g * two_zeta;
  return k;
}

template <class Real>
Real decay_r(const SpaceParams& params, const FrequencyVector& h) {
  if (h.h.size() != static_cast<std::size_t>(params.d())) {
    throw DimensionMismatchError("decay_r: frequency has wrong dimension");
  }
  Real r(1);
  for (int j : h.support()) {
    const Real hj(std::labs(h.h[static_cast<std::size_t>(j)]));
    r *= int_pow(hj, 2 * params.alpha()) / params.weights().gamma<Real>(j + 1, params.alpha());
  }
  return r;
}

#define KERNLAT_INSTANTIATE(Real)                                                           \
  template Real ProductWeights::gamma<Real>(int, int) const;                                \
  template std::vector<Real> SpaceParams::gammas<Real>() const;                             \
  template Real bernoulli_periodic<Real>(int, const Real&);                                 \
  template Real zeta_even<Real>(int);                                                       \
  template struct SpaceConstants<Real>;                                                     \
  template Real omega<Real>(int, const Real&);                                              \
  template Real fractional_part<Real>(const Real&);                                         \
  template Real kernel_eval<Real>(const SpaceParams&, std::span<const Real>,                \
                                  std::span<const Real>);                                   \
  template Real kernel_diagonal<Real>(const SpaceParams&);                                  \
  template Real decay_r<Real>(const SpaceParams&, const FrequencyVector&);

KERNLAT_INSTANTIATE(double)
KERNLAT_INSTANTIATE(MpReal)

#undef KERNLAT_INSTANTIATE

}  // namespace kernlat
