#include "kernlat/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "kernlat/errors.hpp"

namespace kernlat {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

template <class Real>
using Twiddles = std::vector<Complex<Real>>;

// e^{-2 pi i k / n} for k = 0..n-1, computed from the octant so that the
// table is exactly symmetric.
template <class Real>
std::shared_ptr<const Twiddles<Real>> make_twiddles(std::size_t n) {
  using std::cos;
  using std::sin;
  auto w = std::make_shared<Twiddles<Real>>(n);
  const Real two_pi = Real(2) * pi_constant<Real>();
  for (std::size_t k = 0; k < n; ++k) {
    // angle = 2 pi k / n, folded into [0, pi/4] where possible
    const std::size_t k4 = 4 * k;
    Real c, s;
    if (k4 % n == 0) {
      switch (k4 / n) {
        case 0: c = Real(1); s = Real(0); break;
        case 1: c = Real(0); s = Real(1); break;
        case 2: c = Real(-1); s = Real(0); break;
        default: c = Real(0); s = Real(-1); break;
      }
    } else {
      const Real angle = two_pi * Real(static_cast<long>(k)) / Real(static_cast<long>(n));
      c = cos(angle);
      s = sin(angle);
    }
    (*w)[k].re = c;
    (*w)[k].im = -s;
  }
  return w;
}

template <class Real>
std::shared_ptr<const Twiddles<Real>> twiddles(std::size_t n) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const Twiddles<Real>>> cache;
  const auto key = std::make_pair(n, working_bits<Real>());
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto w = make_twiddles<Real>(n);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(w)).first->second;
}

template <class Real>
void fft_radix2(std::vector<Complex<Real>>& x, const Twiddles<Real>& w) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  Real tr, ti, tmp;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex<Real>& wk = w[k * stride];
        Complex<Real>& a = x[start + k];
        Complex<Real>& b = x[start + k + half];
        // t = w * b
        tr = wk.re;
        tr *= b.re;
        tmp = wk.im;
        tmp *= b.im;
        tr -= tmp;
        ti = wk.re;
        ti *= b.im;
        tmp = wk.im;
        tmp *= b.re;
        ti += tmp;
        b.re = a.re;
        b.re -= tr;
        b.im = a.im;
        b.im -= ti;
        a.re += tr;
        a.im += ti;
      }
    }
  }
}

template <class Real>
void dft_direct(std::vector<Complex<Real>>& x, const Twiddles<Real>& w) {
  const std::size_t n = x.size();
  std::vector<Complex<Real>> out(n);
  Real tmp;
  for (std::size_t l = 0; l < n; ++l) {
    Real re(0), im(0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& wk = w[(l * j) % n];
      tmp = wk.re;
      tmp *= x[j].re;
      re += tmp;
      tmp = wk.im;
      tmp *= x[j].im;
      re -= tmp;
      tmp = wk.re;
      tmp *= x[j].im;
      im += tmp;
      tmp = wk.im;
      tmp *= x[j].re;
      im += tmp;
    }
    out[l].re = std::move(re);
    out[l].im = std::move(im);
  }
  x = std::move(out);
}

}  // namespace

template <class Real>
void dft_in_place(std::vector<Complex<Real>>& x) {
  const std::size_t n = x.size();
  if (n <= 1) return;
  auto w = twiddles<Real>(n);
  if (is_power_of_two(n)) {
    fft_radix2(x, *w);
  } else {
    dft_direct(x, *w);
  }
}

template <class Real>
std::vector<Complex<Real>> dft(std::span<const Complex<Real>> x) {
  std::vector<Complex<Real>> out(x.begin(), x.end());
  dft_in_place(out);
  return out;
}

template <class Real>
std::vector<Complex<Real>> inverse_dft(std::span<const Complex<Real>> x) {
  std::vector<Complex<Real>> out(x.begin(), x.end());
  for (auto& v : out) v.im = -v.im;
  dft_in_place(out);
  const Real n(static_cast<long>(out.size()));
  for (auto& v : out) {
    v.re /= n;
    v.im = -v.im;
    v.im /= n;
  }
  return out;
}

// ---------------------------------------------------------------- circulants

template <class Real>
CirculantOperator<Real>::CirculantOperator(std::vector<Real> first_column)
    : column_(std::move(first_column)), bits_(working_bits<Real>()) {
  if (column_.empty()) throw InvalidArgumentError("circulant operator needs n >= 1");
  spectrum_.resize(column_.size());
  for (std::size_t j = 0; j < column_.size(); ++j) {
    spectrum_[j].re = column_[j];
    spectrum_[j].im = Real(0);
  }
  dft_in_place(spectrum_);
}

template <class Real>
std::vector<Real> CirculantOperator<Real>::apply(std::span<const Real> x) const {
  if (x.size() != size()) throw InvalidArgumentError("circulant apply: size mismatch");
  std::vector<Complex<Real>> v(size());
  for (std::size_t j = 0; j < size(); ++j) {
    v[j].re = x[j];
    v[j].im = Real(0);
  }
  dft_in_place(v);
  for (std::size_t l = 0; l < size(); ++l) {
    const auto& s = spectrum_[l];
    Real re = s.re * v[l].re - s.im * v[l].im;
    Real im = s.re * v[l].im + s.im * v[l].re;
    v[l].re = std::move(re);
    v[l].im = std::move(im);
  }
  auto back = inverse_dft<Real>(v);
  std::vector<Real> out(size());
  for (std::size_t j = 0; j < size(); ++j) out[j] = back[j].re;
  return out;
}

template <class Real>
std::vector<Real> circulant_eigenvalues(const CirculantOperator<Real>& op) {
  using std::abs;
  Real norm1(0);
  for (const auto& c : op.first_column()) norm1 += abs(c);
  const Real limit = working_tolerance<Real>() * norm1;
  std::vector<Real> ev;
  ev.reserve(op.size());
  for (std::size_t l = 0; l < op.size(); ++l) {
    const auto& s = op.spectrum()[l];
    if (abs(s.im) > limit) {
      throw PrecisionLossError("circulant eigenvalue " + std::to_string(l) +
                               " has imaginary residue " + std::to_string(to_double(s.im)) +
                               " above tolerance; column not symmetric or precision too low");
    }
    ev.push_back(s.re);
  }
  return ev;
}

template <class Real>
Real singular_threshold(std::span<const Complex<Real>> spectrum) {
  using std::abs;
  Real largest(0);
  for (const auto& s : spectrum) {
    Real mag = abs(s.re) + abs(s.im);
    if (mag > largest) largest = mag;
  }
  const long n = static_cast<long>(spectrum.size());
  const Real eps(std::ldexp(1.0, -working_bits<Real>()));
  return Real(n < 16 ? 16L : n) * eps * largest;
}

template <class Real>
std::vector<Real> circulant_solve(const CirculantOperator<Real>& op, std::span<const Real> rhs,
                                  bool assert_spd, std::vector<std::string>* warnings) {
  using std::abs;
  const std::size_t n = op.size();
  if (rhs.size() != n) throw InvalidArgumentError("circulant_solve: rhs has wrong length");
  const auto& spec = op.spectrum();
  const Real threshold = singular_threshold<Real>(spec);
  for (std::size_t l = 0; l < n; ++l) {
    if (abs(spec[l].re) + abs(spec[l].im) <= threshold) {
      throw SingularOperatorError("circulant operator is singular: eigenvalue " +
                                  std::to_string(l) + " is zero at working precision");
    }
    if (assert_spd && spec[l].re <= Real(0) && warnings) {
      warnings->push_back("eigenvalue " + std::to_string(l) + " = " +
                          std::to_string(to_double(spec[l].re)) +
                          " is not positive; operator is not SPD");
    }
  }
  std::vector<Complex<Real>> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    v[j].re = rhs[j];
    v[j].im = Real(0);
  }
  dft_in_place(v);
  for (std::size_t l = 0; l < n; ++l) {
    const auto& s = spec[l];
    const Real denom = s.re * s.re + s.im * s.im;
    Real re = (v[l].re * s.re + v[l].im * s.im) / denom;
    Real im = (v[l].im * s.re - v[l].re * s.im) / denom;
    v[l].re = std::move(re);
    v[l].im = std::move(im);
  }
  auto back = inverse_dft<Real>(v);
  std::vector<Real> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = back[j].re;
  return x;
}

template <class Real>
Real RatioTraceEvaluator<Real>::operator()(std::span<const Real> m_col,
                                           std::span<const Real> k_col) {
  using std::abs;
  const std::size_t n = k_col.size();
  if (m_col.size() != n || n == 0) throw InvalidArgumentError("ratio_trace: length mismatch");
  buf_.resize(n);
  k_hat_.resize(n);
  m_hat_.resize(n);
  Real k_norm(0), m_norm(0);
  for (std::size_t j = 0; j < n; ++j) {
    buf_[j].re = k_col[j];
    buf_[j].im = m_col[j];
    k_norm += abs(k_col[j]);
    m_norm += abs(m_col[j]);
  }
  dft_in_place(buf_);

  // X = k_hat + i m_hat with both spectra real and even:
  //   k_hat_l = (X_l + conj X_{n-l}) / 2,  m_hat_l = (X_l - conj X_{n-l}) / 2i.
  // The discarded imaginary parts are round-off residues and must stay small.
  const Real half = rational<Real>(1, 2);
  const Real tol = working_tolerance<Real>();
  Real residue_k, residue_m;
  for (std::size_t l = 0; l < n; ++l) {
    const auto& a = buf_[l];
    const auto& b = buf_[(n - l) % n];
    k_hat_[l] = a.re;
    k_hat_[l] += b.re;
    k_hat_[l] *= half;
    m_hat_[l] = a.im;
    m_hat_[l] += b.im;
    m_hat_[l] *= half;
    residue_k = a.im;
    residue_k -= b.im;
    residue_m = a.re;
    residue_m -= b.re;
    if (abs(residue_k) > tol * k_norm || abs(residue_m) > tol * m_norm) {
      throw PrecisionLossError("ratio_trace: spectrum not real at index " + std::to_string(l) +
                               "; columns not symmetric or precision too low");
    }
  }

  Real largest(0);
  for (const auto& v : k_hat_) {
    if (abs(v) > largest) largest = abs(v);
  }
  const Real threshold =
      Real(n < 16 ? 16L : static_cast<long>(n)) * Real(std::ldexp(1.0, -working_bits<Real>())) *
      largest;
  Real sum(0), term;
  for (std::size_t l = 0; l < n; ++l) {
    if (abs(k_hat_[l]) <= threshold) {
      throw SingularOperatorError("ratio_trace: K eigenvalue " + std::to_string(l) +
                                  " is zero at working precision");
    }
    term = m_hat_[l];
    term /= k_hat_[l];
    sum += term;
  }
  return sum;
}

template <class Real>
Real ratio_trace(std::span<const Real> m_col, std::span<const Real> k_col) {
  RatioTraceEvaluator<Real> eval;
  return eval(m_col, k_col);
}

#define KERNLAT_INSTANTIATE(Real)                                                            \
  template std::vector<Complex<Real>> dft<Real>(std::span<const Complex<Real>>);             \
  template std::vector<Complex<Real>> inverse_dft<Real>(std::span<const Complex<Real>>);     \
  template void dft_in_place<Real>(std::vector<Complex<Real>>&);                             \
  template class CirculantOperator<Real>;                                                    \
  template std::vector<Real> circulant_eigenvalues<Real>(const CirculantOperator<Real>&);    \
  template Real singular_threshold<Real>(std::span<const Complex<Real>>);                    \
  template std::vector<Real> circulant_solve<Real>(const CirculantOperator<Real>&,           \
                                                   std::span<const Real>, bool,              \
                                                   std::vector<std::string>*);               \
  template class RatioTraceEvaluator<Real>;                                                  \
  template Real ratio_trace<Real>(std::span<const Real>, std::span<const Real>);

KERNLAT_INSTANTIATE(double)
KERNLAT_INSTANTIATE(MpReal)

#undef KERNLAT_INSTANTIATE

}  // namespace kernlat
