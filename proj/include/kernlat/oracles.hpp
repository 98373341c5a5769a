#pragma once

// Slow, independent reference computations used to cross-check the fast
// evaluators. Small instances only; each guards its work with a budget.

#include <atomic>
#include <cstdint>
#include <vector>

#include "kernlat/criteria.hpp"
#include "kernlat/korobov_space.hpp"
#include "kernlat/lattice.hpp"
#include "kernlat/mp_real.hpp"

namespace kernlat::oracles {

struct Budget {
  std::uint64_t max_cells = 100'000'000;
  const std::atomic<bool>* cancel = nullptr;  // polled cooperatively
};

/// sum_h 1/r(h) sum_{l != 0, l.z = 0 mod n} 1/r(h + l), with h and the dual
/// vector l both restricted to the box |component| <= H. Nondecreasing in H.
double s_oracle(const GeneratingVector& gv, const SpaceParams& params, long H,
                const Budget& budget = {});

/// Gaussian elimination with partial pivoting; solves A X = B column-wise.
/// Throws SingularOperatorError on a zero pivot.
template <class Real>
std::vector<std::vector<Real>> dense_solve(std::vector<std::vector<Real>> a,
                                           std::vector<std::vector<Real>> b);

template <class Real>
std::vector<Real> dense_solve(const std::vector<std::vector<Real>>& a, const std::vector<Real>& b);

/// Full n x n K and M from pairwise kernel evaluations at the lattice points.
template <class Real>
std::vector<std::vector<Real>> dense_kernel_matrix(const GeneratingVector& gv,
                                                   const SpaceParams& params);
template <class Real>
std::vector<std::vector<Real>> dense_m_matrix(const GeneratingVector& gv,
                                              const SpaceParams& params);

/// K(y,y) - tr(K^{-1} M) with dense K, M and a dense solve.
template <class Real>
Real p_oracle_dense_squared(const GeneratingVector& gv, const SpaceParams& params);

double p_oracle_dense(const GeneratingVector& gv, const SpaceParams& params,
                      PrecisionContext ctx = PrecisionContext::extended(256));

/// (int P_Lambda(y)^2 dy)^{1/2} by composite 8-point Gauss-Legendre with
/// `panels` panels per axis; d <= 2.
double p_integral_oracle(const GeneratingVector& gv, const SpaceParams& params, int panels = 64,
                         PrecisionContext ctx = PrecisionContext::extended(256),
                         const Budget& budget = {});

/// prod_j (1 + gamma_j^2 sum_{1 <= |h| <= H} e^{2 pi i h x_j} / |h|^{4 alpha})
/// at x = shift z / n: the M entry from its truncated Fourier series.
double m_entry_fourier(const SpaceParams& params, const GeneratingVector& gv, long shift, long H);

/// Greedy per-step exhaustive search over U_n with the full criterion
/// (s_quantity for S, p_oracle_dense_squared for P) with z_1 = 1; smallest
/// z wins ties.
/// n <= 64 and d <= 4.
GeneratingVector cbc_exhaustive_oracle(long n, int d, const SpaceParams& params,
                                       CriterionKind kind,
                                       PrecisionContext ctx = PrecisionContext::extended(256));

}  // namespace kernlat::oracles
