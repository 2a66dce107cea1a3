#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace pchbv {

/// Exact rational arithmetic. mpq_class keeps values canonical
/// (gcd(num,den)=1, den>0) as long as construction goes through the
/// helpers below; raw mpq_class(num,den) needs an explicit canonicalize.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rational_from_strings(const std::string& num, const std::string& den) {
    mpz_class n(num), d(den);
    if (d == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) {
    return q.get_str();
}

/// Small random rationals for generated field configurations.  Numerators
/// in [-max_num, max_num], denominators in [1, max_den].
inline Rational random_rational(std::mt19937_64& rng, long max_num = 2, long max_den = 2) {
    std::uniform_int_distribution<long> num(-max_num, max_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return make_rational(num(rng), den(rng));
}

} // namespace pchbv
