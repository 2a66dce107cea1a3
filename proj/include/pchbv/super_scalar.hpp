#pragma once

#include "pchbv/odd_word.hpp"
#include "pchbv/param_poly.hpp"

#include <iosfwd>
#include <vector>

namespace pchbv {

/// Element of the free graded-commutative algebra: a sum of terms
/// (polynomial coefficient) * (ascending word of odd generators).  The
/// term list is sorted by word and never holds zero polynomials, so
/// equality is representational and normalization is idempotent by
/// construction.
///
/// Tri-degree bookkeeping: for a term with word w,
///   form degree      = #dx letters
///   internal degree  = #u letters
///   ghost number     = #theta - #thetabar
/// and the Koszul parity of the term is word_length(w) mod 2 (every
/// generator is odd, so total parity = form + internal + ghost parity).
class SuperScalar {
public:
    struct Term {
        OddWord word;
        ParamPoly poly;
    };

    SuperScalar() = default;
    explicit SuperScalar(Rational c) : SuperScalar(ParamPoly(std::move(c)), 0) {}
    explicit SuperScalar(long c) : SuperScalar(make_rational(c)) {}
    SuperScalar(ParamPoly p, OddWord w);

    static SuperScalar generator(OddWord g) { return SuperScalar(ParamPoly(make_rational(1)), g); }

    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    SuperScalar& operator+=(const SuperScalar& o);
    SuperScalar& operator-=(const SuperScalar& o);
    SuperScalar operator-() const;
    friend SuperScalar operator+(SuperScalar a, const SuperScalar& b) { a += b; return a; }
    friend SuperScalar operator-(SuperScalar a, const SuperScalar& b) { a -= b; return a; }
    friend SuperScalar operator*(const SuperScalar& a, const SuperScalar& b);
    SuperScalar& operator*=(const SuperScalar& o) { *this = *this * o; return *this; }
    SuperScalar operator*(const Rational& c) const;
    SuperScalar operator*(const ParamPoly& p) const;

    bool operator==(const SuperScalar& o) const;
    bool operator!=(const SuperScalar& o) const { return !(*this == o); }

    /// True when every term has the same word-length parity.
    bool is_parity_homogeneous() const;
    /// Parity of a homogeneous element (0 for the zero element); throws
    /// on mixed parity.
    int parity() const;

    /// d/dx^mu on polynomial coefficients (even derivation).
    SuperScalar coordinate_derivative(int mu) const;
    /// Substitute x = point, keeping parameters and odd content.
    SuperScalar evaluate_at_point(const std::array<Rational, 4>& point) const;
    /// Substitute a value for one polynomial variable everywhere.
    SuperScalar substitute_param(int var, const Rational& value) const;

    /// Coefficient extraction for an odd marker: writes s = t*g + r with
    /// r free of g and returns t (right extraction: the sign moves g past
    /// the letters above it, which for markers are only higher markers).
    SuperScalar extract_odd(OddWord g) const;
    /// Left coefficient: s = g*t + r with r free of g; returns t.  For dx
    /// letters (the lowest bits) this is sign-free and is the component
    /// convention for forms: a = sum dx^mu a_mu.
    SuperScalar extract_odd_left(OddWord g) const;
    /// Coefficient of the degree-1 part in an even marker variable.
    SuperScalar extract_even(int var) const;
    bool depends_on_word_bit(OddWord g) const;

    /// theta/thetabar -> 0 part and its complement.
    SuperScalar body() const;
    SuperScalar soul() const { return *this - body(); }
    /// Part of given soul degree (number of theta+thetabar letters).
    SuperScalar soul_part(int degree) const;
    int max_soul_degree() const;

    /// Keep only terms with the given (form, internal) degrees.
    SuperScalar filter_form_internal(int form_deg, int internal_deg) const;
    /// Keep only terms with the given ghost number.
    SuperScalar filter_ghost(int ghost) const;

    std::string str() const;
    std::size_t hash() const;

private:
    std::vector<Term> terms_; // sorted by word
    void normalize();
    friend SuperScalar raw_terms(std::vector<Term> t);
};

std::ostream& operator<<(std::ostream& os, const SuperScalar& s);

/// Build an element from an arbitrary term list (normalizes).
SuperScalar raw_terms(std::vector<SuperScalar::Term> t);

/// GradedElement is a SuperScalar viewed with its tri-degree structure;
/// the free functions below give the graded view.
using GradedElement = SuperScalar;

struct GradeComponent {
    int form_degree;
    int internal_degree;
    int ghost_number;
    GradedElement part;
};

/// Split into homogeneous (form, internal, ghost) components; summing the
/// parts reproduces the element.  Marker letters are ignored for the
/// ghost count but count toward parity.
std::vector<GradeComponent> grade_split(const GradedElement& a);

/// True if every term matches the given tri-degree (markers not allowed).
bool has_tri_degree(const GradedElement& a, int form_deg, int internal_deg, int ghost);

} // namespace pchbv
