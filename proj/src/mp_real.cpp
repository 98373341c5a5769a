#include "kernlat/mp_real.hpp"

#include <ostream>
#include <stdexcept>
#include <vector>

namespace kernlat {

namespace {
thread_local int tls_default_bits = 256;
}

int MpReal::default_precision() { return tls_default_bits; }

void MpReal::set_default_precision(int bits) {
  if (bits < MPFR_PREC_MIN || bits > 1 << 20) {
    throw std::invalid_argument("MpReal precision out of range: " + std::to_string(bits));
  }
  tls_default_bits = bits;
}

MpReal::MpReal(const std::string& decimal) {
  init(default_precision());
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + decimal + "'");
  }
}

MpReal MpReal::pi() {
  MpReal r(default_precision(), Uninit{});
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

std::string MpReal::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

std::ostream& operator<<(std::ostream& os, const MpReal& x) {
  return os << x.to_string(static_cast<int>(os.precision()));
}

}  // namespace kernlat
