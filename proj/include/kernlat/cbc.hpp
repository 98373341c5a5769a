#pragma once

// Component-by-component construction of generating vectors, minimising
// S*_n or P*_n one coordinate at a time with z_1 = 1.

#include <span>
#include <string>
#include <vector>

#include "kernlat/korobov_space.hpp"
#include "kernlat/lattice.hpp"
#include "kernlat/mp_real.hpp"

namespace kernlat {

enum class ScoringPath {
  Direct,     // O(n |U_n|) per coordinate
  FastPrime,  // prime n only: cyclic convolution over the unit group, O(n log n)
};

/// Candidates whose scores differ by at most 2^-(bits - slack) times the
/// largest score magnitude are treated as tied.
inline constexpr int kCbcTieSlack = 12;

struct CbcOptions {
  unsigned threads = 1;  // 0 = hardware concurrency; P search only
  ScoringPath path = ScoringPath::Direct;
};

struct CbcResultS {
  GeneratingVector gv{2, {1}};
  std::vector<double> s_values;       // S_{n,s} after choosing z_s, s = 1..d
  std::vector<double> s_star_values;  // sqrt(2) S_{n,s}^{1/4}
  int precision_bits = 53;
  double seconds = 0.0;
};

struct CbcDiagnostic {
  int s = 0;
  long z = 0;
  std::string message;
};

struct CbcResultP {
  GeneratingVector gv{2, {1}};
  std::vector<double> t_values;       // tr(K^{-1} M) after choosing z_s
  std::vector<double> p_star_values;  // P*_{n,s}
  double p_star = 0.0;
  int precision_bits = 256;
  double seconds = 0.0;
  std::vector<CbcDiagnostic> diagnostics;
};

/// Generating vector of dimension d minimising S step by step; weights and
/// alpha come from `params` (its own dimension is ignored).
CbcResultS cbc_s(long n, int d, const SpaceParams& params,
                 PrecisionContext ctx = PrecisionContext::native(), const CbcOptions& opts = {});

/// Generating vector of dimension d maximising tr(K^{-1} M), i.e. minimising P*.
CbcResultP cbc_p(long n, int d, const SpaceParams& params,
                 PrecisionContext ctx = PrecisionContext::extended(256),
                 const CbcOptions& opts = {});

/// z-dependent part of S at one CBC step for every z in units(n), in that order:
///   W(z) = (1/n) sum_k p(k) (2 gamma omega({kz/n}) + gamma^2 omega({kz/n})^2).
std::vector<double> s_candidate_scores(long n, std::span<const double> p_prev, double gamma,
                                       int alpha, ScoringPath path);

bool is_prime(long n);
/// Smallest generator of the multiplicative group mod prime p.
long primitive_root(long p);

}  // namespace kernlat
