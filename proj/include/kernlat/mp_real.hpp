#pragma once

#include <mpfr.h>

#include <cmath>
#include <compare>
#include <iosfwd>
#include <string>

namespace kernlat {

/// Working precision of a computation, in mantissa bits.
///
/// 53 selects native `double`; anything larger runs on MPFR-backed `MpReal`.
struct PrecisionContext {
  int mantissa_bits = 53;

  static PrecisionContext native() { return {53}; }
  static PrecisionContext extended(int bits = 256) { return {bits}; }

  bool is_native() const { return mantissa_bits == 53; }

  /// 2^-(bits - slack): the precision-scaled tolerance family used for
  /// clamping and residue checks.
  double tolerance(int slack = 20) const {
    return std::ldexp(1.0, -(mantissa_bits - slack));
  }
};

/// Arbitrary-precision real backed by one `mpfr_t`.
///
/// New values take the calling thread's default precision (see
/// `PrecisionScope`). Binary operators produce the larger of the operand
/// precisions; copy assignment adopts the source precision.
class MpReal {
 public:
  MpReal() { init(default_precision()); mpfr_set_zero(v_, 1); }
  MpReal(int x) { init(default_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  MpReal(long x) { init(default_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  MpReal(long long x) { init(default_precision()); mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN); }
  MpReal(unsigned long x) { init(default_precision()); mpfr_set_ui(v_, x, MPFR_RNDN); }
  MpReal(double x) { init(default_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  /// Parses a decimal literal at the thread default precision.
  explicit MpReal(const std::string& decimal);

  MpReal(const MpReal& o) { init(o.precision()); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpReal(MpReal&& o) noexcept { steal(o); }
  MpReal& operator=(const MpReal& o) {
    if (this == &o) return *this;
    if (!live_) {
      init(o.precision());
    } else if (precision() != o.precision()) {
      mpfr_set_prec(v_, o.precision());
    }
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    if (this != &o) {
      release();
      steal(o);
    }
    return *this;
  }
  ~MpReal() { release(); }

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string to_string(int digits = 30) const;

  MpReal& operator+=(const MpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator-=(const MpReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator*=(const MpReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator/=(const MpReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend MpReal operator+(const MpReal& a, const MpReal& b) { return binary(a, b, mpfr_add); }
  friend MpReal operator-(const MpReal& a, const MpReal& b) { return binary(a, b, mpfr_sub); }
  friend MpReal operator*(const MpReal& a, const MpReal& b) { return binary(a, b, mpfr_mul); }
  friend MpReal operator/(const MpReal& a, const MpReal& b) { return binary(a, b, mpfr_div); }
  friend MpReal operator-(const MpReal& a) {
    MpReal r = a;
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const MpReal& a, const MpReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const MpReal& a, const MpReal& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  friend MpReal sqrt(const MpReal& a) { return unary(a, mpfr_sqrt); }
  friend MpReal abs(const MpReal& a) { return unary(a, mpfr_abs); }
  friend MpReal cos(const MpReal& a) { return unary(a, mpfr_cos); }
  friend MpReal sin(const MpReal& a) { return unary(a, mpfr_sin); }
  friend MpReal log(const MpReal& a) { return unary(a, mpfr_log); }
  friend MpReal exp(const MpReal& a) { return unary(a, mpfr_exp); }
  friend MpReal floor(const MpReal& a) {
    MpReal r(a.precision(), Uninit{});
    mpfr_floor(r.v_, a.v_);
    return r;
  }
  friend MpReal pow(const MpReal& a, long e) {
    MpReal r(a.precision(), Uninit{});
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend MpReal pow(const MpReal& a, const MpReal& e) { return binary(a, e, mpfr_pow); }
  friend bool isfinite(const MpReal& a) { return mpfr_number_p(a.v_) != 0; }

  /// pi at the thread default precision.
  static MpReal pi();

  /// Default precision (bits) for values created on this thread.
  static int default_precision();
  static void set_default_precision(int bits);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  struct Uninit {};
  MpReal(int bits, Uninit) { init(bits); }

  void init(int bits) {
    mpfr_init2(v_, bits);
    live_ = true;
  }
  void release() noexcept {
    if (live_) mpfr_clear(v_);
    live_ = false;
  }
  void steal(MpReal& o) noexcept {
    v_[0] = o.v_[0];
    live_ = o.live_;
    o.live_ = false;
  }

  template <class Op>
  static MpReal binary(const MpReal& a, const MpReal& b, Op op) {
    MpReal r(a.precision() > b.precision() ? a.precision() : b.precision(), Uninit{});
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  template <class Op>
  static MpReal unary(const MpReal& a, Op op) {
    MpReal r(a.precision(), Uninit{});
    op(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
  bool live_ = false;
};

std::ostream& operator<<(std::ostream& os, const MpReal& x);

/// Sets the calling thread's `MpReal` default precision for the lifetime of
/// the scope and restores the previous value on exit.
class PrecisionScope {
 public:
  explicit PrecisionScope(PrecisionContext ctx) : saved_(MpReal::default_precision()) {
    MpReal::set_default_precision(ctx.mantissa_bits);
  }
  explicit PrecisionScope(int bits) : PrecisionScope(PrecisionContext{bits}) {}
  ~PrecisionScope() { MpReal::set_default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

// Scalar traits shared by the precision-generic algorithms.

inline double to_double(double x) { return x; }
inline double to_double(const MpReal& x) { return x.to_double(); }

template <class Real>
Real pi_constant();
template <>
inline double pi_constant<double>() { return 3.14159265358979323846264338327950288; }
template <>
inline MpReal pi_constant<MpReal>() { return MpReal::pi(); }

/// Mantissa bits of `Real` as currently configured on this thread.
template <class Real>
int working_bits();
template <>
inline int working_bits<double>() { return 53; }
template <>
inline int working_bits<MpReal>() { return MpReal::default_precision(); }

template <class Real>
Real working_tolerance(int slack = 20) {
  return Real(std::ldexp(1.0, -(working_bits<Real>() - slack)));
}

/// Exact rational num/den at the working precision.
template <class Real>
Real rational(long num, long den = 1) {
  return Real(num) / Real(den);
}

}  // namespace kernlat
