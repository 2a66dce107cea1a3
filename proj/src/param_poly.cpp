#include "pchbv/param_poly.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace pchbv {

const char* poly_var_name(int v) {
    switch (v) {
        case VAR_X0: return "x0";
        case VAR_X1: return "x1";
        case VAR_X2: return "x2";
        case VAR_X3: return "x3";
        case VAR_LAMBDA: return "Lambda";
        case VAR_GAMMA_INV: return "g";
        case VAR_T0: return "t0";
        case VAR_T1: return "t1";
        default: return "?";
    }
}

ParamPoly::ParamPoly(Rational c) {
    if (c != 0) terms_.push_back({0, std::move(c)});
}

ParamPoly ParamPoly::variable(int var, int exp) {
    ParamPoly p;
    if (exp == 0) return ParamPoly(make_rational(1));
    p.terms_.push_back({mono_with_exp(0, var, exp), make_rational(1)});
    return p;
}

bool ParamPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono == 0);
}

Rational ParamPoly::constant_value() const {
    for (const auto& t : terms_)
        if (t.mono == 0) return t.coeff;
    return Rational(0);
}

void ParamPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.mono < b.mono; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().mono == t.mono) {
            out.back().coeff += t.coeff;
            if (out.back().coeff == 0) out.pop_back();
        } else if (t.coeff != 0) {
            out.push_back(std::move(t));
        }
    }
    terms_ = std::move(out);
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
    // merge of two sorted term lists
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        if (terms_[i].mono < o.terms_[j].mono) {
            out.push_back(std::move(terms_[i++]));
        } else if (terms_[i].mono > o.terms_[j].mono) {
            out.push_back(o.terms_[j++]);
        } else {
            Rational c = terms_[i].coeff + o.terms_[j].coeff;
            if (c != 0) out.push_back({terms_[i].mono, std::move(c)});
            ++i; ++j;
        }
    }
    while (i < terms_.size()) out.push_back(std::move(terms_[i++]));
    while (j < o.terms_.size()) out.push_back(o.terms_[j++]);
    terms_ = std::move(out);
    return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
    *this += -o;
    return *this;
}

ParamPoly ParamPoly::operator-() const {
    ParamPoly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_)
            r.terms_.push_back({mono_mul(ta.mono, tb.mono), ta.coeff * tb.coeff});
    r.normalize();
    return r;
}

ParamPoly ParamPoly::operator*(const Rational& c) const {
    ParamPoly r;
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono, t.coeff * c});
    return r;
}

ParamPoly ParamPoly::derivative(int var) const {
    ParamPoly r;
    for (const auto& t : terms_) {
        int e = mono_exp(t.mono, var);
        if (e == 0) continue;
        r.terms_.push_back({mono_with_exp(t.mono, var, e - 1), t.coeff * e});
    }
    r.normalize();
    return r;
}

ParamPoly ParamPoly::substitute(int var, const Rational& value) const {
    ParamPoly r;
    for (const auto& t : terms_) {
        int e = mono_exp(t.mono, var);
        Rational c = t.coeff;
        for (int k = 0; k < e; ++k) c *= value;
        if (c != 0) r.terms_.push_back({mono_with_exp(t.mono, var, 0), std::move(c)});
    }
    r.normalize();
    return r;
}

ParamPoly ParamPoly::integrate_unit(int var) const {
    // int_0^1 x^e dx = 1/(e+1)
    ParamPoly r;
    for (const auto& t : terms_) {
        int e = mono_exp(t.mono, var);
        r.terms_.push_back({mono_with_exp(t.mono, var, 0), t.coeff / (e + 1)});
    }
    r.normalize();
    return r;
}

ParamPoly ParamPoly::linear_coefficient(int var) const {
    ParamPoly r;
    for (const auto& t : terms_) {
        if (mono_exp(t.mono, var) == 1)
            r.terms_.push_back({mono_with_exp(t.mono, var, 0), t.coeff});
    }
    r.normalize();
    return r;
}

int ParamPoly::degree_in(int var) const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, mono_exp(t.mono, var));
    return d;
}

ParamPoly ParamPoly::divide_exact(const ParamPoly& num, const ParamPoly& den) {
    if (den.is_zero()) throw std::invalid_argument("ParamPoly division by zero");
    // Multivariate division against the single leading term of den,
    // ordered by the packed monomial key.  Sufficient for Bareiss
    // pivots, where exact divisibility is a theorem.
    ParamPoly rem = num;
    ParamPoly quot;
    const auto& lead = den.terms_.back();
    int guard = 0;
    while (!rem.is_zero()) {
        if (++guard > 100000) throw std::runtime_error("divide_exact: runaway division");
        const auto& rlead = rem.terms_.back();
        // rlead.mono must be divisible by lead.mono
        Monomial q = 0;
        for (int v = 0; v < kNumPolyVars; ++v) {
            int e = mono_exp(rlead.mono, v) - mono_exp(lead.mono, v);
            if (e < 0) throw std::runtime_error("divide_exact: not divisible");
            q = mono_with_exp(q, v, e);
        }
        ParamPoly piece;
        piece.terms_.push_back({q, rlead.coeff / lead.coeff});
        quot += piece;
        rem -= piece * den;
    }
    return quot;
}

std::string ParamPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        std::string c = t.coeff.get_str();
        if (!first) {
            os << (c[0] == '-' ? " - " : " + ");
            if (c[0] == '-') c = c.substr(1);
        }
        first = false;
        bool has_vars = t.mono != 0;
        bool printed = false;
        if (!has_vars || c != "1") {
            os << c;
            printed = true;
        }
        if (has_vars) {
            for (int v = 0; v < kNumPolyVars; ++v) {
                int e = mono_exp(t.mono, v);
                if (e == 0) continue;
                if (printed) os << "*";
                os << poly_var_name(v);
                if (e > 1) os << "^" << e;
                printed = true;
            }
        }
    }
    return os.str();
}

std::size_t ParamPoly::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& t : terms_) {
        h ^= std::hash<std::uint64_t>{}(t.mono) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= std::hash<std::string>{}(t.coeff.get_str()) + (h << 6) + (h >> 2);
    }
    return h;
}

std::ostream& operator<<(std::ostream& os, const ParamPoly& p) {
    return os << p.str();
}

} // namespace pchbv
