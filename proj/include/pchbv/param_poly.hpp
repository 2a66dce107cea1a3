#pragma once

#include "pchbv/rational.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace pchbv {

/// Commuting variables of the coefficient ring.  The first four are the
/// chart coordinates, then the two formal parameters (cosmological
/// constant and 1/gamma), then two spare even markers used for
/// contractions with even vector fields.
enum PolyVar : int {
    VAR_X0 = 0,
    VAR_X1 = 1,
    VAR_X2 = 2,
    VAR_X3 = 3,
    VAR_LAMBDA = 4,
    VAR_GAMMA_INV = 5,
    VAR_T0 = 6,
    VAR_T1 = 7,
};
inline constexpr int kNumPolyVars = 8;

const char* poly_var_name(int v);

/// Exponent vector packed 8 bits per variable; degree per variable < 256.
using Monomial = std::uint64_t;

inline int mono_exp(Monomial m, int var) {
    return static_cast<int>((m >> (8 * var)) & 0xffu);
}
inline Monomial mono_with_exp(Monomial m, int var, int e) {
    const Monomial mask = Monomial{0xff} << (8 * var);
    return (m & ~mask) | (Monomial(static_cast<unsigned>(e)) << (8 * var));
}
inline Monomial mono_mul(Monomial a, Monomial b) {
    // Per-variable exponent overflow would need degree >= 256; the suite
    // stays far below that, but keep the check cheap and present.
    Monomial r = 0;
    for (int v = 0; v < kNumPolyVars; ++v) {
        int e = mono_exp(a, v) + mono_exp(b, v);
        if (e > 0xff) throw std::overflow_error("monomial exponent overflow");
        r = mono_with_exp(r, v, e);
    }
    return r;
}

/// Sparse multivariate polynomial over Rational.  Terms are kept sorted
/// by monomial key and never store zero coefficients, so equality is
/// representational.
class ParamPoly {
public:
    struct Term {
        Monomial mono;
        Rational coeff;
    };

    ParamPoly() = default;
    explicit ParamPoly(Rational c);
    explicit ParamPoly(long c) : ParamPoly(make_rational(c)) {}

    static ParamPoly variable(int var, int exp = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant term (coefficient of the empty monomial).
    Rational constant_value() const;

    const std::vector<Term>& terms() const { return terms_; }

    ParamPoly& operator+=(const ParamPoly& o);
    ParamPoly& operator-=(const ParamPoly& o);
    ParamPoly operator-() const;
    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { a += b; return a; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { a -= b; return a; }
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
    ParamPoly& operator*=(const ParamPoly& o) { *this = *this * o; return *this; }
    ParamPoly operator*(const Rational& c) const;

    bool operator==(const ParamPoly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].mono != o.terms_[i].mono || terms_[i].coeff != o.terms_[i].coeff) return false;
        return true;
    }
    bool operator!=(const ParamPoly& o) const { return !(*this == o); }

    /// d/d(var)
    ParamPoly derivative(int var) const;
    /// Substitute a rational value for one variable.
    ParamPoly substitute(int var, const Rational& value) const;
    /// Integrate var over [0,1] (used by the exact box integrals).
    ParamPoly integrate_unit(int var) const;
    /// Coefficient of var^1 after discarding var^k, k != 1 (even-marker
    /// extraction; the markers only ever appear linearly).
    ParamPoly linear_coefficient(int var) const;
    /// Max exponent of var across terms.
    int degree_in(int var) const;
    bool depends_on(int var) const { return degree_in(var) > 0; }

    /// Exact division; throws if not divisible (used by fraction-free
    /// elimination where divisibility is guaranteed).
    static ParamPoly divide_exact(const ParamPoly& num, const ParamPoly& den);

    std::string str() const;
    std::size_t hash() const;

private:
    std::vector<Term> terms_; // sorted by mono, no zero coefficients
    void normalize();
    friend class ParamPolyBuilder;
};

std::ostream& operator<<(std::ostream& os, const ParamPoly& p);

} // namespace pchbv
