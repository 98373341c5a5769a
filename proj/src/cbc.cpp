#include "kernlat/cbc.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "kernlat/criteria.hpp"
#include "kernlat/errors.hpp"
#include "kernlat/spectral.hpp"

namespace kernlat {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

namespace {

long pow_mod(long base, long exp, long mod) {
  __int128 result = 1, b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<long>(result);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class Real>
std::vector<Real> folded_table(long n, auto&& fn) {
  std::vector<Real> t(static_cast<std::size_t>(n));
  for (long r = 0; r <= n / 2; ++r) {
    t[static_cast<std::size_t>(r)] = fn(Real(r) / Real(n));
    if (r > 0) t[static_cast<std::size_t>(n - r)] = t[static_cast<std::size_t>(r)];
  }
  return t;
}

// Candidates z <= n/2; their mirrors n - z score identically.
std::vector<long> representatives(long n) {
  std::vector<long> reps;
  for (long z : units(n)) {
    if (z <= n - z) reps.push_back(z);
  }
  return reps;
}

// First index whose score is within tolerance of the optimum, so the smallest
// z wins among numerically tied candidates.
template <class Real>
std::size_t pick(const std::vector<std::optional<Real>>& scores, bool maximise) {
  using std::abs;
  std::optional<Real> best;
  Real scale(0);
  for (const auto& s : scores) {
    if (!s) continue;
    if (!best || (maximise ? *s > *best : *s < *best)) best = *s;
    if (abs(*s) > scale) scale = abs(*s);
  }
  if (!best) throw SingularOperatorError("every candidate was rejected");
  const Real tol = working_tolerance<Real>(kCbcTieSlack) * scale;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i]) continue;
    const Real gap = maximise ? *best - *scores[i] : *scores[i] - *best;
    if (gap <= tol) return i;
  }
  return 0;
}

template <class Real>
std::vector<Real> direct_scores(long n, std::span<const Real> p, std::span<const Real> f,
                                std::span<const long> cands) {
  std::vector<Real> w(cands.size());
  const Real nn(n);
  Real acc, term;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const long z = cands[i];
    acc = Real(0);
    long r = 0;
    for (long k = 0; k < n; ++k) {
      term = p[static_cast<std::size_t>(k)];
      term *= f[static_cast<std::size_t>(r)];
      acc += term;
      r += z;
      if (r >= n) r -= n;
    }
    w[i] = acc / nn;
  }
  return w;
}

// Prime n: with k = g^{-b}, z = g^a the sum over k != 0 becomes the cyclic
// convolution sum_b P'[b] F[a - b] of length n - 1, computed as a zero-padded
// power-of-two linear convolution folded back.
template <class Real>
std::vector<Real> prime_scores(long n, std::span<const Real> p, std::span<const Real> f,
                               std::span<const long> cands) {
  const long m = n - 1;
  const long g = primitive_root(n);
  std::size_t len = 1;
  while (len < static_cast<std::size_t>(2 * m - 1)) len <<= 1;

  std::vector<Complex<Real>> a(len), b(len);
  std::vector<long> power(static_cast<std::size_t>(m));
  long gp = 1;
  for (long e = 0; e < m; ++e) {
    power[static_cast<std::size_t>(e)] = gp;
    gp = static_cast<long>(static_cast<__int128>(gp) * g % n);
  }
  for (long e = 0; e < m; ++e) {
    const long inv = power[static_cast<std::size_t>((m - e) % m)];
    a[static_cast<std::size_t>(e)].re = p[static_cast<std::size_t>(inv)];
    b[static_cast<std::size_t>(e)].re = f[static_cast<std::size_t>(power[static_cast<std::size_t>(e)])];
  }
  dft_in_place(a);
  dft_in_place(b);
  for (std::size_t i = 0; i < len; ++i) {
    const Real re = a[i].re * b[i].re - a[i].im * b[i].im;
    const Real im = a[i].re * b[i].im + a[i].im * b[i].re;
    a[i].re = re;
    a[i].im = -im;  // conjugate: forward transform then acts as inverse
  }
  dft_in_place(a);
  const Real scale(static_cast<long>(len));

  std::vector<Real> by_exponent(static_cast<std::size_t>(m));
  for (long e = 0; e < m; ++e) {
    Real v = a[static_cast<std::size_t>(e)].re;
    if (e + m < static_cast<long>(len)) v += a[static_cast<std::size_t>(e + m)].re;
    by_exponent[static_cast<std::size_t>(e)] = v / scale;
  }
  std::vector<long> log_of(static_cast<std::size_t>(n), -1);
  for (long e = 0; e < m; ++e) log_of[static_cast<std::size_t>(power[static_cast<std::size_t>(e)])] = e;

  const Real base = p[0] * f[0];
  const Real nn(n);
  std::vector<Real> w(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    w[i] = (base + by_exponent[static_cast<std::size_t>(log_of[static_cast<std::size_t>(cands[i])])]) / nn;
  }
  return w;
}

template <class Real>
std::vector<Real> scores_for(long n, std::span<const Real> p, std::span<const Real> f,
                             std::span<const long> cands, ScoringPath path) {
  if (path == ScoringPath::FastPrime && n > 2 && is_prime(n)) {
    return prime_scores<Real>(n, p, f, cands);
  }
  return direct_scores<Real>(n, p, f, cands);
}

template <class Real>
CbcResultS cbc_s_impl(long n, int d, const SpaceParams& params, const CbcOptions& opts) {
  const auto start = Clock::now();
  const SpaceParams sp = params.with_dimension(d);
  const auto c = SpaceConstants<Real>::make(sp.alpha());
  const auto g = sp.gammas<Real>();
  const auto om = folded_table<Real>(n, [&](const Real& x) { return c.omega(x); });
  const auto reps = representatives(n);
  const Real nn(n);

  CbcResultS out;
  out.precision_bits = working_bits<Real>();
  std::vector<long> z;
  std::vector<Real> p(static_cast<std::size_t>(n), Real(1));
  std::vector<Real> f(static_cast<std::size_t>(n));
  Real first(1);
  const Real two_zeta4 = Real(2) * c.zeta_4a;

  for (int s = 1; s <= d; ++s) {
    const Real& gamma = g[static_cast<std::size_t>(s - 1)];
    long zs = 1;
    if (s > 1) {
      for (long r = 0; r < n; ++r) {
        const Real& o = om[static_cast<std::size_t>(r)];
        f[static_cast<std::size_t>(r)] = Real(2) * gamma * o + gamma * gamma * o * o;
      }
      const auto w = scores_for<Real>(n, p, f, reps, opts.path);
      std::vector<std::optional<Real>> scored(w.begin(), w.end());
      zs = reps[pick(scored, false)];
    }
    z.push_back(zs);

    Real factor;
    long r = 0;
    for (long k = 0; k < n; ++k) {
      factor = gamma;
      factor *= om[static_cast<std::size_t>(r)];
      factor += Real(1);
      p[static_cast<std::size_t>(k)] *= factor;
      p[static_cast<std::size_t>(k)] *= factor;
      r += zs;
      if (r >= n) r -= n;
    }
    first *= Real(1) + gamma * gamma * two_zeta4;
    Real mean(0);
    for (const Real& v : p) mean += v;
    mean /= nn;
    const Real sv = clamp_nonnegative(mean - first, first > mean ? first : mean, "S_{n,s}");
    out.s_values.push_back(to_double(sv));
    out.s_star_values.push_back(to_double(s_star_from_quantity(sv)));
  }
  out.gv = GeneratingVector(n, z);
  out.seconds = seconds_since(start);
  return out;
}

template <class Real>
struct PStep {
  std::optional<Real> t;
  std::string error;
};

template <class Real>
PStep<Real> evaluate_candidate(long n, long zc, const std::vector<Real>& kprev,
                               const std::vector<Real>& mprev, const std::vector<Real>& kt,
                               const std::vector<Real>& mt, std::vector<Real>& kbuf,
                               std::vector<Real>& mbuf, RatioTraceEvaluator<Real>& eval) {
  long r = 0;
  for (long l = 0; l < n; ++l) {
    const auto li = static_cast<std::size_t>(l);
    kbuf[li] = kprev[li];
    kbuf[li] *= kt[static_cast<std::size_t>(r)];
    mbuf[li] = mprev[li];
    mbuf[li] *= mt[static_cast<std::size_t>(r)];
    r += zc;
    if (r >= n) r -= n;
  }
  try {
    return {eval(mbuf, kbuf), {}};
  } catch (const SingularOperatorError& e) {
    return {std::nullopt, e.what()};
  }
}

template <class Real>
CbcResultP cbc_p_impl(long n, int d, const SpaceParams& params, int bits, const CbcOptions& opts) {
  using std::sqrt;
  const auto start = Clock::now();
  const SpaceParams sp = params.with_dimension(d);
  const auto c = SpaceConstants<Real>::make(sp.alpha());
  const auto g = sp.gammas<Real>();
  const auto om = folded_table<Real>(n, [&](const Real& x) { return c.omega(x); });
  const auto om2 = folded_table<Real>(n, [&](const Real& x) { return c.omega_squared_kernel(x); });
  const auto reps = representatives(n);
  const Real two_zeta2 = Real(2) * c.zeta_2a;

  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : opts.threads;

  CbcResultP out;
  out.precision_bits = working_bits<Real>();
  std::vector<long> z;
  std::vector<Real> kprev(static_cast<std::size_t>(n), Real(1));
  std::vector<Real> mprev(static_cast<std::size_t>(n), Real(1));
  std::vector<Real> kt(static_cast<std::size_t>(n)), mt(static_cast<std::size_t>(n));
  Real diag(1);

  for (int s = 1; s <= d; ++s) {
    const Real& gamma = g[static_cast<std::size_t>(s - 1)];
    const Real gamma2 = gamma * gamma;
    for (long r = 0; r < n; ++r) {
      const auto ri = static_cast<std::size_t>(r);
      kt[ri] = Real(1) + gamma * om[ri];
      mt[ri] = Real(1) + gamma2 * om2[ri];
    }
    const std::vector<long> cands = s == 1 ? std::vector<long>{1} : reps;
    std::vector<PStep<Real>> results(cands.size());

    auto worker = [&](std::atomic<std::size_t>& next) {
      PrecisionScope scope(bits);
      RatioTraceEvaluator<Real> eval;
      std::vector<Real> kbuf(static_cast<std::size_t>(n)), mbuf(static_cast<std::size_t>(n));
      for (std::size_t i = next++; i < cands.size(); i = next++) {
        results[i] = evaluate_candidate<Real>(n, cands[i], kprev, mprev, kt, mt, kbuf, mbuf, eval);
      }
    };
    std::atomic<std::size_t> next{0};
    const unsigned nthreads =
        static_cast<unsigned>(std::min<std::size_t>(threads, cands.size()));
    if (nthreads <= 1) {
      worker(next);
    } else {
      std::vector<std::thread> pool;
      std::exception_ptr failure;
      std::mutex failure_mutex;
      for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
          try {
            worker(next);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = cands.size();
          }
        });
      }
      for (auto& th : pool) th.join();
      if (failure) std::rethrow_exception(failure);
    }

    std::vector<std::optional<Real>> scored;
    scored.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (!results[i].t) out.diagnostics.push_back({s, cands[i], results[i].error});
      scored.push_back(std::move(results[i].t));
    }
    std::size_t best;
    try {
      best = pick(scored, true);
    } catch (const SingularOperatorError&) {
      throw SingularOperatorError("cbc_p: every candidate singular at s = " + std::to_string(s));
    }
    const long zs = cands[best];
    z.push_back(zs);

    long r = 0;
    for (long l = 0; l < n; ++l) {
      kprev[static_cast<std::size_t>(l)] *= kt[static_cast<std::size_t>(r)];
      mprev[static_cast<std::size_t>(l)] *= mt[static_cast<std::size_t>(r)];
      r += zs;
      if (r >= n) r -= n;
    }
    const Real t = *scored[best];
    diag *= Real(1) + gamma * two_zeta2;
    out.t_values.push_back(to_double(t));
    out.p_star_values.push_back(to_double(sqrt(clamp_nonnegative(diag - t, diag, "P*^2"))));
  }
  out.gv = GeneratingVector(n, z);
  out.p_star = out.p_star_values.back();
  out.seconds = seconds_since(start);
  return out;
}

void check_args(long n, int d) {
  if (n < 2) throw InvalidArgumentError("cbc: n must be >= 2, got " + std::to_string(n));
  if (d < 1) throw InvalidArgumentError("cbc: dimension must be >= 1, got " + std::to_string(d));
}

}  // namespace

long primitive_root(long p) {
  if (!is_prime(p)) throw InvalidArgumentError("primitive_root: " + std::to_string(p) + " is not prime");
  if (p == 2) return 1;
  std::vector<long> factors;
  long m = p - 1;
  for (long q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      factors.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) factors.push_back(m);
  for (long g = 2; g < p; ++g) {
    bool ok = true;
    for (long q : factors) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw InvalidArgumentError("primitive_root: none found");
}

std::vector<double> s_candidate_scores(long n, std::span<const double> p_prev, double gamma,
                                       int alpha, ScoringPath path) {
  if (p_prev.size() != static_cast<std::size_t>(n)) {
    throw DimensionMismatchError("s_candidate_scores: p has wrong length");
  }
  const auto c = SpaceConstants<double>::make(alpha);
  const auto om = folded_table<double>(n, [&](double x) { return c.omega(x); });
  std::vector<double> f(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < f.size(); ++r) f[r] = 2.0 * gamma * om[r] + gamma * gamma * om[r] * om[r];
  const auto u = units(n);
  return scores_for<double>(n, p_prev, f, u, path);
}

CbcResultS cbc_s(long n, int d, const SpaceParams& params, PrecisionContext ctx,
                 const CbcOptions& opts) {
  check_args(n, d);
  if (ctx.is_native()) return cbc_s_impl<double>(n, d, params, opts);
  PrecisionScope scope(ctx);
  return cbc_s_impl<MpReal>(n, d, params, opts);
}

CbcResultP cbc_p(long n, int d, const SpaceParams& params, PrecisionContext ctx,
                 const CbcOptions& opts) {
  check_args(n, d);
  if (ctx.is_native()) return cbc_p_impl<double>(n, d, params, 53, opts);
  PrecisionScope scope(ctx);
  return cbc_p_impl<MpReal>(n, d, params, ctx.mantissa_bits, opts);
}

}  // namespace kernlat
