#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace sosbound {

namespace mp = boost::multiprecision;

// Arbitrary-precision real used for moment assembly and Cholesky
// orthogonalization. Precision is runtime-selectable; values carry the
// precision they were created with through arithmetic.
using BigFloat = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

// Decimal digits needed to represent at least `bits` bits of mantissa.
unsigned bits_to_digits10(unsigned bits);

// Sets the default construction precision for BigFloat within a scope and
// restores the previous value on exit.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_digits10_;
};

// pi at the current default precision.
BigFloat bf_pi();

// Gamma function at the current default precision. Positive half-integer
// arguments (2x integral) are evaluated by the exact recursion from
// Gamma(1/2) = sqrt(pi) and Gamma(1) = 1; other arguments go through mpfr.
BigFloat bf_gamma(const BigFloat& x);

// k! as a BigFloat (exact while k! fits the mantissa).
BigFloat bf_factorial(unsigned k);

}  // namespace sosbound
