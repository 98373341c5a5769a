#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kernlat/korobov_space.hpp"
#include "kernlat/lattice.hpp"

namespace kernlat {

/// Real-valued trigonometric polynomial given by a finite Fourier series.
class TestFunction {
 public:
  using Term = std::pair<FrequencyVector, std::complex<double>>;

  /// Validates dimensions, distinct frequencies and conjugate symmetry
  /// (within 1e-14 relative); throws InvalidArgumentError otherwise.
  TestFunction(int d, std::vector<Term> terms);

  int d() const { return d_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(std::span<const double> y) const;
  TestFunction scaled(double c) const;

 private:
  int d_;
  std::vector<Term> terms_;
};

/// (sum_h |f_hat(h)|^2 r(h))^{1/2}.
double function_norm(const TestFunction& f, const SpaceParams& params);

/// n_terms distinct pairs {h, -h} from the box |h_j| <= max_freq with
/// conjugate-symmetric Gaussian coefficients, rescaled to unit norm.
TestFunction random_unit_function(const SpaceParams& params, int n_terms, int max_freq,
                                  std::uint64_t seed);

/// A(f)(y) = sum_k a_k K(t_k, y), with K a = f at the lattice nodes.
class Interpolant {
 public:
  Interpolant(GeneratingVector gv, SpaceParams params, std::vector<double> coefficients);

  const GeneratingVector& generating_vector() const { return gv_; }
  const SpaceParams& params() const { return params_; }
  const std::vector<double>& coefficients() const { return a_; }

  double operator()(std::span<const double> y) const;
  std::vector<double> evaluate_batch(const std::vector<std::vector<double>>& points) const;

 private:
  GeneratingVector gv_;
  SpaceParams params_;
  std::vector<double> a_;
  std::vector<double> gammas_;
  SpaceConstants<double> constants_;
};

Interpolant fit(const GeneratingVector& gv, const SpaceParams& params,
                std::span<const double> node_values);

double evaluate(const Interpolant& ip, std::span<const double> y);

/// f at the n lattice nodes.
std::vector<double> sample_at_nodes(const GeneratingVector& gv, const TestFunction& f);

/// Evaluation set: n_eval-point Korobov lattice with a = unit nearest
/// 0.381966 n_eval, z = (1, a, a^2, ...) mod n_eval, shifted by a uniform
/// vector drawn from mt19937_64(seed).
std::vector<std::vector<double>> evaluation_points(int d, long n_eval, std::uint64_t seed);

/// RMS of f - A(f) over evaluation_points(d, n_eval, seed).
double l2_error_estimate(const Interpolant& ip, const TestFunction& f, long n_eval,
                         std::uint64_t seed);

}  // namespace kernlat
