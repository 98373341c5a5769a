#include "kernlat/interpolant.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "kernlat/criteria.hpp"
#include "kernlat/errors.hpp"
#include "kernlat/spectral.hpp"

namespace kernlat {

namespace {

bool canonical(const FrequencyVector& h) {
  for (long v : h.h) {
    if (v != 0) return v > 0;
  }
  return true;
}

}  // namespace

TestFunction::TestFunction(int d, std::vector<Term> terms) : d_(d), terms_(std::move(terms)) {
  if (d_ < 1) throw InvalidArgumentError("test function: d must be >= 1");
  std::map<FrequencyVector, std::complex<double>> index;
  for (const auto& [h, c] : terms_) {
    if (h.h.size() != static_cast<std::size_t>(d_)) {
      throw DimensionMismatchError("test function: frequency has wrong dimension");
    }
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidArgumentError("test function: non-finite coefficient");
    }
    if (!index.emplace(h, c).second) throw InvalidArgumentError("test function: repeated frequency");
  }
  for (const auto& [h, c] : index) {
    auto it = index.find(-h);
    const std::complex<double> partner = it == index.end() ? std::complex<double>{} : it->second;
    const double scale = std::max(std::abs(c), std::abs(partner));
    if (std::abs(partner - std::conj(c)) > 1e-14 * scale) {
      throw InvalidArgumentError("test function: coefficients are not conjugate symmetric");
    }
  }
}

double TestFunction::operator()(std::span<const double> y) const {
  if (y.size() != static_cast<std::size_t>(d_)) {
    throw DimensionMismatchError("test function: point has wrong dimension");
  }
  double sum = 0.0;
  for (const auto& [h, c] : terms_) {
    double phase = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) phase += static_cast<double>(h.h[j]) * y[j];
    phase = 2.0 * std::numbers::pi * (phase - std::floor(phase));
    sum += c.real() * std::cos(phase) - c.imag() * std::sin(phase);
  }
  return sum;
}

TestFunction TestFunction::scaled(double c) const {
  auto terms = terms_;
  for (auto& t : terms) t.second *= c;
  return TestFunction(d_, std::move(terms));
}

double function_norm(const TestFunction& f, const SpaceParams& params) {
  double sum = 0.0;
  for (const auto& [h, c] : f.terms()) sum += std::norm(c) * decay_r<double>(params, h);
  return std::sqrt(sum);
}

TestFunction random_unit_function(const SpaceParams& params, int n_terms, int max_freq,
                                  std::uint64_t seed) {
  if (n_terms < 1) throw InvalidArgumentError("random_unit_function: n_terms must be >= 1");
  if (max_freq < 0) throw InvalidArgumentError("random_unit_function: max_freq must be >= 0");
  const int d = params.d();
  const double box = std::pow(2.0 * max_freq + 1.0, d);
  if (static_cast<double>(n_terms) > (box - 1.0) / 2.0 + 1.0) {
    throw InvalidArgumentError("random_unit_function: box holds fewer than n_terms frequency pairs");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-max_freq, max_freq);
  std::normal_distribution<double> gauss;
  std::map<FrequencyVector, std::complex<double>> chosen;
  while (static_cast<int>(chosen.size()) < n_terms) {
    FrequencyVector h{std::vector<long>(static_cast<std::size_t>(d))};
    for (auto& v : h.h) v = coord(rng);
    if (!canonical(h)) h = -h;
    if (chosen.contains(h)) continue;
    const double re = gauss(rng);
    const double im = h.is_zero() ? 0.0 : gauss(rng);
    chosen.emplace(h, std::complex<double>(re, im));
  }

  std::vector<TestFunction::Term> terms;
  for (const auto& [h, c] : chosen) {
    terms.emplace_back(h, c);
    if (!h.is_zero()) terms.emplace_back(-h, std::conj(c));
  }
  TestFunction f(d, std::move(terms));
  return f.scaled(1.0 / function_norm(f, params));
}

Interpolant::Interpolant(GeneratingVector gv, SpaceParams params, std::vector<double> coefficients)
    : gv_(std::move(gv)),
      params_(std::move(params)),
      a_(std::move(coefficients)),
      gammas_(params_.gammas<double>()),
      constants_(SpaceConstants<double>::make(params_.alpha())) {
  if (gv_.d() != params_.d()) throw DimensionMismatchError("interpolant: dimension mismatch");
  if (a_.size() != static_cast<std::size_t>(gv_.n())) {
    throw DimensionMismatchError("interpolant: need one coefficient per node");
  }
}

double Interpolant::operator()(std::span<const double> y) const {
  if (y.size() != gammas_.size()) throw DimensionMismatchError("interpolant: point has wrong dimension");
  const long n = gv_.n();
  const double nn = static_cast<double>(n);
  double sum = 0.0;
  for (long k = 0; k < n; ++k) {
    double kv = 1.0;
    for (std::size_t j = 0; j < gammas_.size(); ++j) {
      const double x = static_cast<double>(gv_.residue(k, j)) / nn - y[j];
      kv *= 1.0 + gammas_[j] * constants_.omega(x - std::floor(x));
    }
    sum += a_[static_cast<std::size_t>(k)] * kv;
  }
  return sum;
}

std::vector<double> Interpolant::evaluate_batch(const std::vector<std::vector<double>>& points) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& y : points) out.push_back((*this)(y));
  return out;
}

Interpolant fit(const GeneratingVector& gv, const SpaceParams& params,
                std::span<const double> node_values) {
  if (node_values.size() != static_cast<std::size_t>(gv.n())) {
    throw DimensionMismatchError("fit: need one value per node");
  }
  const CirculantOperator<double> kop(k_column<double>(params, gv));
  return Interpolant(gv, params, circulant_solve<double>(kop, node_values));
}

double evaluate(const Interpolant& ip, std::span<const double> y) { return ip(y); }

std::vector<double> sample_at_nodes(const GeneratingVector& gv, const TestFunction& f) {
  const auto pts = lattice_points(gv);
  std::vector<double> v(static_cast<std::size_t>(gv.n()));
  for (long k = 0; k < gv.n(); ++k) v[static_cast<std::size_t>(k)] = f(pts.point(k));
  return v;
}

std::vector<std::vector<double>> evaluation_points(int d, long n_eval, std::uint64_t seed) {
  if (n_eval < 1) throw InvalidArgumentError("evaluation_points: n_eval must be >= 1");
  if (d < 1) throw InvalidArgumentError("evaluation_points: d must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(d));
  for (auto& s : shift) s = unif(rng);

  std::vector<long> z(static_cast<std::size_t>(d), 1);
  if (n_eval >= 2) {
    const double target = 0.381966 * static_cast<double>(n_eval);
    long a = 1;
    for (long u : units(n_eval)) {
      if (std::abs(static_cast<double>(u) - target) < std::abs(static_cast<double>(a) - target)) a = u;
    }
    for (std::size_t j = 1; j < z.size(); ++j) {
      z[j] = static_cast<long>(static_cast<__int128>(z[j - 1]) * a % n_eval);
    }
  }

  std::vector<std::vector<double>> pts(static_cast<std::size_t>(n_eval),
                                       std::vector<double>(static_cast<std::size_t>(d)));
  const double nn = static_cast<double>(n_eval);
  for (long k = 0; k < n_eval; ++k) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double x = static_cast<double>(static_cast<__int128>(k) * z[j] % n_eval) / nn + shift[j];
      pts[static_cast<std::size_t>(k)][j] = x - std::floor(x);
    }
  }
  return pts;
}

double l2_error_estimate(const Interpolant& ip, const TestFunction& f, long n_eval,
                         std::uint64_t seed) {
  const auto pts = evaluation_points(f.d(), n_eval, seed);
  double sum = 0.0;
  for (const auto& y : pts) {
    const double e = f(y) - ip(y);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(pts.size()));
}

}  // namespace kernlat
