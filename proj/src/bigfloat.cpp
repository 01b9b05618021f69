#include "sosbound/bigfloat.hpp"

#include <cmath>
#include <stdexcept>

namespace sosbound {

unsigned bits_to_digits10(unsigned bits) {
    if (bits < 53) bits = 53;
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 2;
}

PrecisionScope::PrecisionScope(unsigned bits)
    : saved_digits10_(BigFloat::default_precision()) {
    BigFloat::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() {
    BigFloat::default_precision(saved_digits10_);
}

BigFloat bf_pi() {
    BigFloat x;
    mpfr_const_pi(x.backend().data(), MPFR_RNDN);
    return x;
}

BigFloat bf_gamma(const BigFloat& x) {
    const double xd = x.convert_to<double>();
    const double two_x = 2.0 * xd;
    if (xd > 0.0 && std::abs(two_x - std::round(two_x)) < 1e-9) {
        const long k = std::lround(two_x);
        if (k % 2 == 0) {
            BigFloat g = 1;
            for (long i = 1; i < k / 2; ++i) g *= i;
            return g;
        }
        BigFloat g = sqrt(bf_pi());
        for (long i = 0; i < (k - 1) / 2; ++i) g *= BigFloat(2 * i + 1) / 2;
        return g;
    }
    BigFloat r;
    mpfr_gamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

BigFloat bf_factorial(unsigned k) {
    BigFloat g = 1;
    for (unsigned i = 2; i <= k; ++i) g *= i;
    return g;
}

}  // namespace sosbound
