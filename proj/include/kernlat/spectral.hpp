#pragma once

// DFT/FFT and symmetric-circulant linear algebra over double or MpReal.
//
// Power-of-two lengths use an iterative radix-2 FFT; any other length falls
// back to the direct O(n^2) transform. Twiddle factors are cached per
// (length, precision) and shared between threads.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kernlat/mp_real.hpp"

namespace kernlat {

template <class Real>
struct Complex {
  Real re{};
  Real im{};
};

bool is_power_of_two(std::size_t n);

/// X_l = sum_j x_j e^{-2 pi i l j / n}.
template <class Real>
std::vector<Complex<Real>> dft(std::span<const Complex<Real>> x);

/// x_j = (1/n) sum_l X_l e^{2 pi i l j / n}.
template <class Real>
std::vector<Complex<Real>> inverse_dft(std::span<const Complex<Real>> x);

/// In-place forward transform; the buffer length is arbitrary.
template <class Real>
void dft_in_place(std::vector<Complex<Real>>& x);

/// C with C[l][k] = first_column[(l - k) mod n]; the spectrum (DFT of the
/// first column) is computed eagerly so the operator is immutable afterwards.
template <class Real>
class CirculantOperator {
 public:
  explicit CirculantOperator(std::vector<Real> first_column);

  std::size_t size() const { return column_.size(); }
  const std::vector<Real>& first_column() const { return column_; }
  const std::vector<Complex<Real>>& spectrum() const { return spectrum_; }
  int precision_bits() const { return bits_; }

  Real entry(std::size_t row, std::size_t col) const {
    const std::size_t n = column_.size();
    return column_[(row + n - col % n) % n];
  }

  /// C x, via the spectrum.
  std::vector<Real> apply(std::span<const Real> x) const;

 private:
  std::vector<Real> column_;
  std::vector<Complex<Real>> spectrum_;
  int bits_;
};

/// Real eigenvalues of a symmetric circulant. Throws PrecisionLossError if an
/// imaginary residue exceeds 2^-(bits-20) * ||column||_1.
template <class Real>
std::vector<Real> circulant_eigenvalues(const CirculantOperator<Real>& op);

/// Smallest |eigenvalue| that is not treated as zero.
template <class Real>
Real singular_threshold(std::span<const Complex<Real>> spectrum);

/// Solves C x = rhs by spectral division. Throws SingularOperatorError if an
/// eigenvalue is below singular_threshold(). With `assert_spd`, eigenvalues
/// <= 0 append a message to `warnings` (when given) instead of failing.
template <class Real>
std::vector<Real> circulant_solve(const CirculantOperator<Real>& op, std::span<const Real> rhs,
                                  bool assert_spd = false,
                                  std::vector<std::string>* warnings = nullptr);

/// Evaluates tr(K^{-1} M) = sum_l m_hat_l / k_hat_l for symmetric circulants
/// given by first columns. Both spectra come out of one complex transform of
/// k + i m; buffers are reused across calls, so one instance per thread.
template <class Real>
class RatioTraceEvaluator {
 public:
  Real operator()(std::span<const Real> m_col, std::span<const Real> k_col);

 private:
  std::vector<Complex<Real>> buf_;
  std::vector<Real> k_hat_;
  std::vector<Real> m_hat_;
};

template <class Real>
Real ratio_trace(std::span<const Real> m_col, std::span<const Real> k_col);

}  // namespace kernlat
