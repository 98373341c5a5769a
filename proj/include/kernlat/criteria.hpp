#pragma once

// The two lattice search criteria for kernel interpolation in weighted
// Korobov spaces with product weights:
//
//   S*_n(z) = sqrt(2) * S_{n,d,alpha,gamma}(z)^{1/4}
//   P*_n(z) = ( K(y,y) - tr(K^{-1} M) )^{1/2}
//
// together with the pointwise power function and the circulant K and M
// entries they are built from. Templated entry points compute at the working
// precision of Real; the PrecisionContext overloads pick double (53 bits) or
// MpReal (anything else) and report the result as double.

#include <span>
#include <string>
#include <vector>

#include "kernlat/korobov_space.hpp"
#include "kernlat/lattice.hpp"
#include "kernlat/mp_real.hpp"

namespace kernlat {

enum class CriterionKind { S, P };

std::string to_string(CriterionKind kind);
CriterionKind parse_criterion(std::string_view name);

struct CriterionValue {
  CriterionKind kind = CriterionKind::S;
  double value = 0.0;
  long n = 0;
  int d = 0;
  int alpha = 0;
  std::string weights;
  int precision_bits = 53;
};

/// Default precisions: S is well conditioned in double, P is not.
inline PrecisionContext default_s_precision() { return PrecisionContext::native(); }
inline PrecisionContext default_p_precision() { return PrecisionContext::extended(256); }

/// Throws PrecisionLossError when `value` < -tol * magnitude, otherwise
/// clamps negatives to zero.
template <class Real>
Real clamp_nonnegative(const Real& value, const Real& magnitude, const char* what);

/// S_{n,d,alpha,gamma}(z) via the Bernoulli closed form.
template <class Real>
Real s_quantity(const GeneratingVector& gv, const SpaceParams& params);

/// sqrt(2) * S^{1/4}.
template <class Real>
Real s_star_from_quantity(const Real& s);

CriterionValue s_star(const GeneratingVector& gv, const SpaceParams& params,
                      PrecisionContext ctx = default_s_precision());

/// K_{l,k} for shift = (l - k) mod n.
template <class Real>
Real k_entry(const SpaceParams& params, const GeneratingVector& gv, long shift);

/// M_{l,k} = int K(t_l, y) K(t_k, y) dy for shift = (l - k) mod n.
template <class Real>
Real m_entry(const SpaceParams& params, const GeneratingVector& gv, long shift);

/// First columns of K and M (all n shifts).
template <class Real>
std::vector<Real> k_column(const SpaceParams& params, const GeneratingVector& gv);
template <class Real>
std::vector<Real> m_column(const SpaceParams& params, const GeneratingVector& gv);

/// K(y,y) - tr(K^{-1} M), clamped at zero.
template <class Real>
Real p_star_squared(const GeneratingVector& gv, const SpaceParams& params);

CriterionValue p_star(const GeneratingVector& gv, const SpaceParams& params,
                      PrecisionContext ctx = default_p_precision());

/// Power function P_Lambda(y) = (K(y,y) - k(y)^T K^{-1} k(y))^{1/2}.
template <class Real>
Real power_pointwise(const GeneratingVector& gv, const SpaceParams& params,
                     std::span<const Real> y);

double power_pointwise(const GeneratingVector& gv, const SpaceParams& params,
                       std::span<const double> y, PrecisionContext ctx);

/// Folds a residue r in [0, n) to min(r, n - r), on which every even
/// Bernoulli term depends; keeps z and n - z bitwise symmetric.
inline long fold_residue(long r, long n) { return r <= n - r ? r : n - r; }

}  // namespace kernlat
