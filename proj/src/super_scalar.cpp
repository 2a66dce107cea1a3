#include "pchbv/super_scalar.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

namespace pchbv {

std::string word_str(OddWord w) {
    if (w == 0) return "1";
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& s) {
        if (!first) os << " ";
        os << s;
        first = false;
    };
    for (int mu = 0; mu < 4; ++mu)
        if (w & dx_gen(mu)) emit("dx" + std::to_string(mu));
    for (int i = 0; i < 4; ++i)
        if (w & u_gen(i)) emit("u" + std::to_string(i));
    for (int a = 0; a < kThetaPoolMax; ++a)
        if (w & theta_gen(a)) emit("th" + std::to_string(a));
    for (int a = 0; a < kThetaPoolMax; ++a)
        if (w & thetabar_gen(a)) emit("tb" + std::to_string(a));
    for (int j = 0; j < kMarkerPoolMax; ++j)
        if (w & marker_gen(j)) emit("e" + std::to_string(j));
    return os.str();
}

SuperScalar::SuperScalar(ParamPoly p, OddWord w) {
    if (!p.is_zero()) terms_.push_back({w, std::move(p)});
}

SuperScalar raw_terms(std::vector<SuperScalar::Term> t) {
    SuperScalar s;
    s.terms_ = std::move(t);
    s.normalize();
    return s;
}

void SuperScalar::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.word < b.word; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().word == t.word) {
            out.back().poly += t.poly;
            if (out.back().poly.is_zero()) out.pop_back();
        } else if (!t.poly.is_zero()) {
            out.push_back(std::move(t));
        }
    }
    terms_ = std::move(out);
}

SuperScalar& SuperScalar::operator+=(const SuperScalar& o) {
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        if (terms_[i].word < o.terms_[j].word) {
            out.push_back(std::move(terms_[i++]));
        } else if (terms_[i].word > o.terms_[j].word) {
            out.push_back(o.terms_[j++]);
        } else {
            ParamPoly p = terms_[i].poly + o.terms_[j].poly;
            if (!p.is_zero()) out.push_back({terms_[i].word, std::move(p)});
            ++i; ++j;
        }
    }
    while (i < terms_.size()) out.push_back(std::move(terms_[i++]));
    while (j < o.terms_.size()) out.push_back(o.terms_[j++]);
    terms_ = std::move(out);
    return *this;
}

SuperScalar& SuperScalar::operator-=(const SuperScalar& o) {
    *this += -o;
    return *this;
}

SuperScalar SuperScalar::operator-() const {
    SuperScalar r(*this);
    for (auto& t : r.terms_) t.poly = -t.poly;
    return r;
}

SuperScalar operator*(const SuperScalar& a, const SuperScalar& b) {
    std::vector<SuperScalar::Term> out;
    out.reserve(a.terms().size() * b.terms().size());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            if (ta.word & tb.word) continue; // repeated odd letter
            int s = merge_sign(ta.word, tb.word);
            ParamPoly p = ta.poly * tb.poly;
            if (s < 0) p = -p;
            out.push_back({ta.word | tb.word, std::move(p)});
        }
    }
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::operator*(const Rational& c) const {
    SuperScalar r;
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.word, t.poly * c});
    return r;
}

SuperScalar SuperScalar::operator*(const ParamPoly& p) const {
    SuperScalar r;
    if (p.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        ParamPoly q = t.poly * p;
        if (!q.is_zero()) r.terms_.push_back({t.word, std::move(q)});
    }
    return r;
}

bool SuperScalar::operator==(const SuperScalar& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].word != o.terms_[i].word || terms_[i].poly != o.terms_[i].poly)
            return false;
    return true;
}

bool SuperScalar::is_parity_homogeneous() const {
    if (terms_.empty()) return true;
    int p = word_parity(terms_[0].word);
    for (const auto& t : terms_)
        if (word_parity(t.word) != p) return false;
    return true;
}

int SuperScalar::parity() const {
    if (terms_.empty()) return 0;
    if (!is_parity_homogeneous())
        throw std::logic_error("parity of non-homogeneous element");
    return word_parity(terms_[0].word);
}

SuperScalar SuperScalar::coordinate_derivative(int mu) const {
    if (mu < 0 || mu > 3) throw std::out_of_range("coordinate axis");
    std::vector<Term> out;
    for (const auto& t : terms_) {
        ParamPoly d = t.poly.derivative(VAR_X0 + mu);
        if (!d.is_zero()) out.push_back({t.word, std::move(d)});
    }
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::evaluate_at_point(const std::array<Rational, 4>& point) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        ParamPoly p = t.poly;
        for (int mu = 0; mu < 4; ++mu) p = p.substitute(VAR_X0 + mu, point[mu]);
        if (!p.is_zero()) out.push_back({t.word, std::move(p)});
    }
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::substitute_param(int var, const Rational& value) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        ParamPoly p = t.poly.substitute(var, value);
        if (!p.is_zero()) out.push_back({t.word, std::move(p)});
    }
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::extract_odd(OddWord g) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (!(t.word & g)) continue;
        int s = extract_right_sign(t.word, g);
        ParamPoly p = t.poly;
        if (s < 0) p = -p;
        out.push_back({t.word & ~g, std::move(p)});
    }
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::extract_odd_left(OddWord g) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (!(t.word & g)) continue;
        int s = extract_left_sign(t.word, g);
        ParamPoly p = t.poly;
        if (s < 0) p = -p;
        out.push_back({t.word & ~g, std::move(p)});
    }
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::extract_even(int var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        ParamPoly p = t.poly.linear_coefficient(var);
        if (!p.is_zero()) out.push_back({t.word, std::move(p)});
    }
    return raw_terms(std::move(out));
}

bool SuperScalar::depends_on_word_bit(OddWord g) const {
    for (const auto& t : terms_)
        if (t.word & g) return true;
    return false;
}

SuperScalar SuperScalar::body() const {
    std::vector<Term> out;
    for (const auto& t : terms_)
        if (!(t.word & (kThetaMask | kThetaBarMask))) out.push_back(t);
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::soul_part(int degree) const {
    std::vector<Term> out;
    for (const auto& t : terms_)
        if (theta_degree(t.word) + thetabar_degree(t.word) == degree) out.push_back(t);
    return raw_terms(std::move(out));
}

int SuperScalar::max_soul_degree() const {
    int d = 0;
    for (const auto& t : terms_)
        d = std::max(d, theta_degree(t.word) + thetabar_degree(t.word));
    return d;
}

SuperScalar SuperScalar::filter_form_internal(int form_deg, int internal_deg) const {
    std::vector<Term> out;
    for (const auto& t : terms_)
        if (dx_degree(t.word) == form_deg && u_degree(t.word) == internal_deg)
            out.push_back(t);
    return raw_terms(std::move(out));
}

SuperScalar SuperScalar::filter_ghost(int ghost) const {
    std::vector<Term> out;
    for (const auto& t : terms_)
        if (ghost_number(t.word) == ghost) out.push_back(t);
    return raw_terms(std::move(out));
}

std::string SuperScalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        bool needs_parens = t.poly.terms().size() > 1;
        if (t.word == 0) {
            os << t.poly.str();
        } else if (t.poly == ParamPoly(make_rational(1))) {
            os << word_str(t.word);
        } else {
            if (needs_parens) os << "(" << t.poly.str() << ")";
            else os << t.poly.str();
            os << " " << word_str(t.word);
        }
    }
    return os.str();
}

std::size_t SuperScalar::hash() const {
    std::size_t h = 0x517cc1b727220a95ull;
    for (const auto& t : terms_) {
        h ^= std::hash<std::uint64_t>{}(t.word) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= t.poly.hash() + (h << 6) + (h >> 2);
    }
    return h;
}

std::ostream& operator<<(std::ostream& os, const SuperScalar& s) {
    return os << s.str();
}

std::vector<GradeComponent> grade_split(const GradedElement& a) {
    std::map<std::tuple<int, int, int>, std::vector<SuperScalar::Term>> buckets;
    for (const auto& t : a.terms()) {
        auto key = std::make_tuple(dx_degree(t.word), u_degree(t.word), ghost_number(t.word));
        buckets[key].push_back(t);
    }
    std::vector<GradeComponent> out;
    out.reserve(buckets.size());
    for (auto& [key, terms] : buckets) {
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                       raw_terms(std::move(terms))});
    }
    return out;
}

bool has_tri_degree(const GradedElement& a, int form_deg, int internal_deg, int ghost) {
    for (const auto& t : a.terms()) {
        if (dx_degree(t.word) != form_deg || u_degree(t.word) != internal_deg ||
            ghost_number(t.word) != ghost || marker_degree(t.word) != 0)
            return false;
    }
    return true;
}

} // namespace pchbv
