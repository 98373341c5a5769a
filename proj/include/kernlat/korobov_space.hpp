#pragma once

// Closed-form ingredients of the weighted Korobov space H_{d,alpha,gamma}:
// product weights, the decay function r(h), even zeta values, Bernoulli
// polynomials and the reproducing kernel.
//
// Everything numeric is templated on the scalar (`double` or `MpReal`) and
// explicitly instantiated for both; MpReal results carry the calling thread's
// default precision.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kernlat/mp_real.hpp"

namespace kernlat {

enum class WeightScheme {
  Poly3Alpha,   // gamma_j = j^{-3 alpha} / pi^{2 alpha}
  Poly2,        // gamma_j = j^{-2} / pi^{2 alpha}
  Geometric09,  // gamma_j = 0.9^{j-1} / pi^{2 alpha}
  Equal,        // gamma_j = 1 / pi^{2 alpha}
  Explicit,     // gamma_j taken verbatim from a list
};

/// Product weights gamma_u = prod_{j in u} gamma_j, gamma_{} = 1.
class ProductWeights {
 public:
  static ProductWeights poly3alpha() { return ProductWeights(WeightScheme::Poly3Alpha); }
  static ProductWeights poly2() { return ProductWeights(WeightScheme::Poly2); }
  static ProductWeights geometric09() { return ProductWeights(WeightScheme::Geometric09); }
  static ProductWeights equal() { return ProductWeights(WeightScheme::Equal); }
  static ProductWeights explicit_list(std::vector<double> gammas);

  /// "poly3a" | "poly2" | "geo09" | "equal" | "list:<g1>,<g2>,..."
  static ProductWeights parse(std::string_view name);

  WeightScheme scheme() const { return scheme_; }
  /// Round-trips through parse().
  std::string name() const;
  /// Short token for file names ("list" for explicit weights).
  std::string file_token() const;
  const std::vector<double>& explicit_values() const { return explicit_; }

  /// gamma_j for 1-based coordinate index j.
  template <class Real>
  Real gamma(int j, int alpha) const;

 private:
  explicit ProductWeights(WeightScheme s) : scheme_(s) {}
  WeightScheme scheme_;
  std::vector<double> explicit_;
};

/// Smoothness alpha (positive integer), product weights and dimension d.
class SpaceParams {
 public:
  SpaceParams(int alpha, ProductWeights weights, int d);

  int alpha() const { return alpha_; }
  int d() const { return d_; }
  const ProductWeights& weights() const { return weights_; }

  /// Same space restricted/extended to dimension d.
  SpaceParams with_dimension(int d) const { return SpaceParams(alpha_, weights_, d); }

  /// gamma_1..gamma_d at the working precision of Real.
  template <class Real>
  std::vector<Real> gammas() const;

 private:
  int alpha_;
  ProductWeights weights_;
  int d_;
};

/// Integer frequency h in Z^d.
struct FrequencyVector {
  std::vector<long> h;

  /// supp(h) as 0-based coordinate indices.
  std::vector<int> support() const;
  bool is_zero() const;
  FrequencyVector operator-() const;
  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;
  friend auto operator<=>(const FrequencyVector&, const FrequencyVector&) = default;
};

/// Bernoulli polynomial B_q(x) for q in {2,4,6,8}; the caller reduces x to
/// [0,1) for the periodic version.
template <class Real>
Real bernoulli_periodic(int q, const Real& x);

/// zeta(s) for even s in {2,4,6,8}, in closed form.
template <class Real>
Real zeta_even(int s);

/// (-1)^{alpha+1} (2 pi)^{2 alpha} / (2 alpha)! * B_{2 alpha}(x): the 1-d
/// kernel increment sum_{h != 0} e^{2 pi i h x} / |h|^{2 alpha}.
template <class Real>
Real omega(int alpha, const Real& x);

/// Per-alpha constants reused by the hot loops.
template <class Real>
struct SpaceConstants {
  int alpha;
  Real omega_scale;   // (-1)^{alpha+1} (2 pi)^{2 alpha} / (2 alpha)!
  Real square_scale;  // (2 pi)^{4 alpha} / (4 alpha)!
  Real zeta_2a;
  Real zeta_4a;

  static SpaceConstants make(int alpha);

  Real omega(const Real& x) const { return omega_scale * bernoulli_periodic(2 * alpha, x); }
  /// sum_{h != 0} e^{2 pi i h x} / |h|^{4 alpha} = -square_scale * B_{4 alpha}(x).
  Real omega_squared_kernel(const Real& x) const {
    return -(square_scale * bernoulli_periodic(4 * alpha, x));
  }
};

/// K(x, y) = prod_j (1 + gamma_j omega(alpha, {x_j - y_j})).
template <class Real>
Real kernel_eval(const SpaceParams& params, std::span<const Real> x, std::span<const Real> y);

/// K(y, y) = prod_j (1 + 2 gamma_j zeta(2 alpha)), independent of y.
template <class Real>
Real kernel_diagonal(const SpaceParams& params);

/// r(h) = (1 / gamma_{supp h}) prod_{j in supp h} |h_j|^{2 alpha}.
template <class Real>
Real decay_r(const SpaceParams& params, const FrequencyVector& h);

/// Fractional part {x} in [0, 1).
template <class Real>
Real fractional_part(const Real& x);

}  // namespace kernlat
