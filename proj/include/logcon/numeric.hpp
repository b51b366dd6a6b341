#pragma once

// Exact and high-precision scalar types used across the library.
//
// Int  - arbitrary precision signed integer (GMP).
// Rat  - rational in lowest terms with positive denominator (GMP).
// Real - 256-bit-mantissa float (MPFR); wide enough that forward error
//        bounds tracked per-Pmf stay decisive in log-concavity verdicts.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace logcon {

namespace mp = boost::multiprecision;

using Int = mp::number<mp::gmp_int, mp::et_off>;
using Rat = mp::number<mp::gmp_rational, mp::et_off>;
using Real = mp::number<mp::mpfr_float_backend<77>, mp::et_off>;

inline Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.backend().data(), n);
    return r;
}

inline Int binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    Int r;
    mpz_bin_uiui(r.backend().data(), n, k);
    return r;
}

// binomial(top, k) for possibly large non-negative integer top given as Int
inline Int binomial(const Int& top, unsigned long k) {
    if (top < 0) throw std::invalid_argument("binomial: negative top");
    Int r;
    mpz_bin_ui(r.backend().data(), top.backend().data(), k);
    return r;
}

inline Int int_pow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.backend().data(), b.backend().data(), e);
    return r;
}

inline Rat rat_pow(const Rat& b, long e) {
    if (e == 0) return Rat(1);
    Rat r;
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(mpq_numref(r.backend().data()), mpq_numref(b.backend().data()), a);
    mpz_pow_ui(mpq_denref(r.backend().data()), mpq_denref(b.backend().data()), a);
    if (e < 0) {
        if (b == 0) throw std::domain_error("rat_pow: 0 to negative power");
        r = Rat(1) / r;
    }
    return r;
}

// floor(sqrt(n)) for n >= 0
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative argument");
    return sqrt(n);
}

inline Real to_real(const Int& v) { return Real(v); }
inline Real to_real(const Rat& v) { return Real(v); }

// Round-to-nearest double; fine for reporting, never for certification.
inline double to_double(const Rat& v) { return v.convert_to<double>(); }
inline double to_double(const Real& v) { return v.convert_to<double>(); }
inline double to_double(const Int& v) { return v.convert_to<double>(); }
inline double to_double(double v) { return v; }

// Exact rational from a double (doubles are binary rationals).
inline Rat rat_from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("rat_from_double: non-finite");
    Rat r;
    mpq_set_d(r.backend().data(), v);
    return r;
}

inline Real real_pow(const Real& b, const Real& e) { return pow(b, e); }

inline std::string to_decimal_string(const Real& v, unsigned digits = 30) {
    return v.str(digits);
}

} // namespace logcon
