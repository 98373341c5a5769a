#pragma once

// Exact rationals over __int128, enough for the small closed-form instances
// whose values are known by hand (n <= 4, alpha = 1, gamma = 1/pi^2).

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

class Rational {
 public:
  Rational(long long num = 0, long long den = 1) : p_(num), q_(den) { normalize(); }

  static Rational raw(__int128 p, __int128 q) {
    Rational r;
    r.p_ = p;
    r.q_ = q;
    r.normalize();
    return r;
  }

  double to_double() const { return static_cast<double>(p_) / static_cast<double>(q_); }
  __int128 num() const { return p_; }
  __int128 den() const { return q_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return raw(a.p_ * b.q_ + b.p_ * a.q_, a.q_ * b.q_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return raw(a.p_ * b.q_ - b.p_ * a.q_, a.q_ * b.q_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return raw(a.p_ * b.p_, a.q_ * b.q_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.p_ == 0) throw std::domain_error("rational division by zero");
    return raw(a.p_ * b.q_, a.q_ * b.p_);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }

 private:
  static __int128 abs128(__int128 v) { return v < 0 ? -v : v; }
  static __int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  void normalize() {
    if (q_ == 0) throw std::domain_error("rational with zero denominator");
    if (q_ < 0) {
      p_ = -p_;
      q_ = -q_;
    }
    const __int128 g = gcd128(p_, q_);
    if (g > 1) {
      p_ /= g;
      q_ /= g;
    }
  }

  __int128 p_;
  __int128 q_;
};

inline Rational bernoulli2(const Rational& x) { return x * x - x + Rational(1, 6); }
inline Rational bernoulli4(const Rational& x) {
  const Rational x2 = x * x;
  return x2 * x2 - Rational(2) * x2 * x + x2 - Rational(1, 30);
}

/// Fractional part of num/den as an exact rational in [0, 1).
inline Rational frac(long long num, long long den) {
  long long r = num % den;
  if (r < 0) r += den;
  return Rational(r, den);
}

/// Gauss-Jordan on exact rationals: returns A^{-1} B.
inline std::vector<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a,
                                                std::vector<std::vector<Rational>> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == Rational(0)) ++piv;
    if (piv == n) throw std::domain_error("singular rational matrix");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    const Rational inv = Rational(1) / a[c][c];
    for (auto& v : a[c]) v = v * inv;
    for (auto& v : b[c]) v = v * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == Rational(0)) continue;
      const Rational f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) a[r][k] = a[r][k] - f * a[c][k];
      for (std::size_t k = 0; k < b[r].size(); ++k) b[r][k] = b[r][k] - f * b[c][k];
    }
  }
  return b;
}

/// Reference instance alpha = 1, gamma_j = 1/pi^2 for every j, where
/// gamma * omega(x) = 2 B_2(x) and gamma^2 (2 pi)^4 / 4! B_4(x) = (2/3) B_4(x).
struct UnitPiInstance {
  long long n;
  std::vector<long long> z;

  Rational k_entry(long long shift) const {
    Rational v(1);
    for (long long zj : z) v = v * (Rational(1) + Rational(2) * bernoulli2(frac(shift * zj, n)));
    return v;
  }
  Rational m_entry(long long shift) const {
    Rational v(1);
    for (long long zj : z) v = v * (Rational(1) - Rational(2, 3) * bernoulli4(frac(shift * zj, n)));
    return v;
  }
  /// K(y, y) = (1 + 2 gamma zeta(2))^d = (4/3)^d.
  Rational diagonal() const {
    Rational v(1);
    for (std::size_t j = 0; j < z.size(); ++j) v = v * Rational(4, 3);
    return v;
  }
  Rational s_quantity() const {
    // -(1 + 2/90)^d + (1/n)(4/3)^{2d} + (1/n) sum_{k>=1} prod (1 + 2 B_2)^2
    Rational first(1), second(1), sum(0);
    for (std::size_t j = 0; j < z.size(); ++j) {
      first = first * Rational(46, 45);
      second = second * Rational(16, 9);
    }
    for (long long k = 1; k < n; ++k) {
      const Rational kv = k_entry(k);
      sum = sum + kv * kv;
    }
    return (second + sum) / Rational(n) - first;
  }
  Rational p_squared() const {
    std::vector<std::vector<Rational>> kk(n, std::vector<Rational>(n)), mm = kk;
    for (long long l = 0; l < n; ++l) {
      for (long long c = 0; c < n; ++c) {
        kk[l][c] = k_entry(l - c);
        mm[l][c] = m_entry(l - c);
      }
    }
    const auto x = solve(kk, mm);
    Rational trace(0);
    for (long long i = 0; i < n; ++i) trace = trace + x[i][i];
    return diagonal() - trace;
  }
  /// Power function squared at a rational point y (one coordinate per z_j).
  Rational power_squared(const std::vector<Rational>& y) const {
    std::vector<std::vector<Rational>> kk(n, std::vector<Rational>(n));
    std::vector<std::vector<Rational>> rhs(n, std::vector<Rational>(1));
    for (long long l = 0; l < n; ++l) {
      for (long long c = 0; c < n; ++c) kk[l][c] = k_entry(l - c);
      Rational v(1);
      for (std::size_t j = 0; j < z.size(); ++j) {
        Rational t = frac(l * z[j], n) - y[j];
        if (t.num() < 0) t = t + Rational(1);
        v = v * (Rational(1) + Rational(2) * bernoulli2(t));
      }
      rhs[l][0] = v;
    }
    const auto mu = solve(kk, rhs);
    Rational quad(0);
    for (long long l = 0; l < n; ++l) quad = quad + rhs[l][0] * mu[l][0];
    return diagonal() - quad;
  }
};

}  // namespace testsupport
