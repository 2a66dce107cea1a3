#include "pchbv/fields.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace pchbv {

const std::vector<FieldSpec>& field_registry() {
    static const std::vector<FieldSpec> regs = {
        {"omega", 1, 2, 0, false, false},
        {"e", 1, 1, 0, false, true},
        {"c", 0, 2, 1, false, false},
        {"xi", 0, 0, 1, true, false},
        {"omega_dag", 3, 2, -1, false, false},
        {"e_dag", 3, 3, -1, false, false},
        {"c_dag", 4, 2, -2, false, false},
        // xi_dag = chi (x) vol; stored through its factors
        {"chi", 1, 0, -2, false, false},
        {"vol", 4, 0, 0, false, false},
    };
    return regs;
}

const FieldSpec& field_spec(const std::string& name) {
    for (const auto& f : field_registry())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown field: " + name);
}

bool is_antifield(const std::string& name) {
    return name == "omega_dag" || name == "e_dag" || name == "c_dag" ||
           name == "chi";
}

ParamPoly window_compact() {
    ParamPoly w(make_rational(1));
    for (int mu = 0; mu < 4; ++mu) {
        ParamPoly x = ParamPoly::variable(VAR_X0 + mu);
        ParamPoly f = x - x * x; // x(1-x)
        w = w * f * f;
    }
    return w;
}

ParamPoly window_free_boundary() {
    ParamPoly w(make_rational(1));
    for (int a = 0; a < 3; ++a) {
        ParamPoly x = ParamPoly::variable(VAR_X0 + a);
        ParamPoly f = x - x * x;
        w = w * f * f;
    }
    ParamPoly x3 = ParamPoly::variable(VAR_X3);
    ParamPoly g = ParamPoly(make_rational(1)) - x3; // (1 - x3)^2
    w = w * g * g;
    return w;
}

ParamPoly window(Support s) {
    switch (s) {
        case Support::none: return ParamPoly(make_rational(1));
        case Support::compact: return window_compact();
        case Support::free_boundary: return window_free_boundary();
    }
    throw std::logic_error("bad support");
}

GradedElement reference_tetrad() {
    GradedElement e;
    for (int mu = 0; mu < 4; ++mu)
        e += SuperScalar::generator(dx_gen(mu) | u_gen(mu));
    return e;
}

const GradedElement& FieldConfig::at(const std::string& name) const {
    auto it = elems.find(name);
    if (it == elems.end()) throw std::invalid_argument("config missing field: " + name);
    return it->second;
}

GradedElement& FieldConfig::at(const std::string& name) {
    auto it = elems.find(name);
    if (it == elems.end()) throw std::invalid_argument("config missing field: " + name);
    return it->second;
}

GradedElement FieldConfig::xi_dag_pairing(const VectorField& V) const {
    return interior(V, at("chi")) * at("vol");
}

namespace {

ParamPoly random_poly_impl(std::mt19937_64& rng, const RandomFieldOptions& opt) {
    // sparse random polynomial: a few monomials of total degree <= bound
    std::uniform_int_distribution<int> nterms(1, 2);
    std::uniform_int_distribution<int> pick_var(0, 3);
    std::uniform_int_distribution<int> pick_deg(0, opt.degree_bound);
    ParamPoly p;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        ParamPoly m(random_rational(rng, opt.coeff_num, opt.coeff_den));
        int deg = pick_deg(rng);
        for (int d = 0; d < deg; ++d)
            m = m * ParamPoly::variable(VAR_X0 + pick_var(rng));
        p += m;
    }
    return p;
}

ParamPoly random_poly(std::mt19937_64& rng, const RandomFieldOptions& opt) {
    return random_poly_impl(rng, opt);
}

SuperScalar random_ghost_coeff(std::mt19937_64& rng, int ghost,
                               const RandomFieldOptions& opt) {
    // polynomial times the ghost realization: g=0 plain, +1 theta-linear,
    // -1 thetabar-linear, -2 thetabar pairs.
    std::uniform_int_distribution<int> pick(0, opt.theta_pool - 1);
    SuperScalar out;
    if (ghost == 0) {
        out = SuperScalar(random_poly(rng, opt), 0);
    } else if (ghost == 1 || ghost == -1) {
        for (int t = 0; t < opt.odd_terms; ++t) {
            int a = pick(rng);
            OddWord w = ghost > 0 ? theta_gen(a) : thetabar_gen(a);
            out += SuperScalar(random_poly(rng, opt), w);
        }
    } else if (ghost == -2) {
        for (int t = 0; t < opt.odd_terms; ++t) {
            int a = pick(rng), b = pick(rng);
            if (a == b) b = (b + 1) % opt.theta_pool;
            out += SuperScalar(random_poly(rng, opt), thetabar_gen(a) | thetabar_gen(b));
        }
    } else if (ghost == 2) {
        for (int t = 0; t < opt.odd_terms; ++t) {
            int a = pick(rng), b = pick(rng);
            if (a == b) b = (b + 1) % opt.theta_pool;
            out += SuperScalar(random_poly(rng, opt), theta_gen(a) | theta_gen(b));
        }
    } else {
        throw std::invalid_argument("unsupported ghost number for random field");
    }
    return out;
}

std::vector<OddWord> words_of_degree(OddWord mask, int count, int shift, int range) {
    std::vector<OddWord> out;
    std::vector<int> idx(count);
    // enumerate ascending index tuples
    std::function<void(int, int, OddWord)> rec = [&](int pos, int start, OddWord acc) {
        if (pos == count) {
            out.push_back(acc);
            return;
        }
        for (int i = start; i < range; ++i)
            rec(pos + 1, i + 1, acc | (OddWord{1} << (shift + i)));
    };
    rec(0, 0, 0);
    (void)mask;
    return out;
}

} // namespace

std::vector<OddWord> form_words(int p) { return words_of_degree(kDxMask, p, kDxShift, 4); }
std::vector<OddWord> internal_words(int k) { return words_of_degree(kUMask, k, kUShift, 4); }

GradedElement random_element(std::mt19937_64& rng, int p, int k, int g,
                             const RandomFieldOptions& opt) {
    GradedElement out;
    ParamPoly win = window(opt.support);
    for (OddWord fw : form_words(p)) {
        for (OddWord uw : internal_words(k)) {
            SuperScalar coeff = random_ghost_coeff(rng, g, opt);
            out += SuperScalar::generator(fw | uw) * coeff;
        }
    }
    return out * win;
}

VectorField random_odd_vf(std::mt19937_64& rng, const RandomFieldOptions& opt,
                          bool tangent_at_boundary) {
    VectorField xi;
    xi.comp_parity = 1;
    ParamPoly win = window(opt.support);
    for (int mu = 0; mu < 4; ++mu) {
        SuperScalar c = random_ghost_coeff(rng, 1, opt);
        if (mu == Chart::normal_axis && tangent_at_boundary)
            c = c * ParamPoly::variable(VAR_X3); // xi^n vanishes at x3 = 0
        xi.comp[mu] = c * win;
    }
    return xi;
}

std::vector<std::array<Rational, 4>> sample_grid() {
    std::vector<std::array<Rational, 4>> pts;
    const Rational a = make_rational(1, 4), b = make_rational(3, 4);
    for (int m = 0; m < 16; ++m) {
        std::array<Rational, 4> p;
        for (int mu = 0; mu < 4; ++mu) p[mu] = (m >> mu) & 1 ? b : a;
        pts.push_back(p);
    }
    return pts;
}

Rational tetrad_determinant(const GradedElement& e, const std::array<Rational, 4>& pt) {
    // component matrix M[mu][i] from the dx^mu u_i coefficients
    Rational M[4][4];
    for (auto& row : M)
        for (auto& x : row) x = 0;
    for (const auto& t : e.terms()) {
        OddWord w = t.word;
        if (dx_degree(w) != 1 || u_degree(w) != 1 || (w & ~(kDxMask | kUMask)))
            throw std::invalid_argument("tetrad_determinant: not a (1,1,0) element");
        int mu = std::countr_zero(w & kDxMask);
        int i = std::countr_zero(w & kUMask) - kUShift;
        ParamPoly p = t.poly;
        for (int a = 0; a < 4; ++a) p = p.substitute(VAR_X0 + a, pt[a]);
        if (!p.is_constant())
            throw std::invalid_argument("tetrad has parameter dependence");
        M[mu][i] = p.constant_value();
    }
    // 4x4 determinant by expansion
    Rational det = 0;
    int perm[4] = {0, 1, 2, 3};
    do {
        int s = epsilon4(perm[0], perm[1], perm[2], perm[3]);
        Rational prod = M[0][perm[0]] * M[1][perm[1]] * M[2][perm[2]] * M[3][perm[3]];
        det += s > 0 ? prod : (s < 0 ? -prod : Rational(0));
    } while (std::next_permutation(perm, perm + 4));
    return det;
}

bool tetrad_nondegenerate(const GradedElement& e) {
    for (const auto& pt : sample_grid())
        if (tetrad_determinant(e, pt) == 0) return false;
    return true;
}

FieldConfig random_config(std::uint64_t seed, const RandomFieldOptions& opt,
                          bool boundary_preserving) {
    std::mt19937_64 rng(seed);
    FieldConfig cfg;
    cfg.seed = seed;
    cfg.degree_bound = opt.degree_bound;
    cfg.theta_pool = opt.theta_pool;
    cfg.support = opt.support;

    // e: reference + perturbation, kept nondegenerate.  The perturbation
    // is not windowed (the support window multiplies every non-e field);
    // boundary terms always carry at least one windowed factor.
    Rational scale = make_rational(1, 4);
    for (int attempt = 0;; ++attempt) {
        GradedElement pert;
        RandomFieldOptions eopt = opt;
        eopt.coeff_num = 1;
        eopt.coeff_den = 4;
        for (OddWord fw : form_words(1))
            for (OddWord uw : internal_words(1))
                pert += SuperScalar::generator(fw | uw) *
                        SuperScalar(random_poly(rng, eopt) * scale, 0);
        GradedElement e = reference_tetrad() + pert;
        if (tetrad_nondegenerate(e)) {
            cfg.elems["e"] = std::move(e);
            break;
        }
        scale /= 2;
        if (attempt > 12)
            throw std::runtime_error("random_config: could not keep tetrad nondegenerate");
    }

    for (const auto& f : field_registry()) {
        if (f.name == "e") continue;
        if (f.is_vector_field) {
            cfg.xi = random_odd_vf(rng, opt, boundary_preserving);
            continue;
        }
        if (f.name == "vol") {
            // volume factor: nonvanishing top form
            ParamPoly rho = ParamPoly(make_rational(1)) + window_compact() * random_poly(rng, opt);
            cfg.elems["vol"] =
                SuperScalar(rho, dx_gen(0) | dx_gen(1) | dx_gen(2) | dx_gen(3));
            continue;
        }
        cfg.elems[f.name] = random_element(rng, f.form_degree, f.internal_degree, f.ghost, opt);
    }
    return cfg;
}

namespace {
std::string offending(const SuperScalar::Term& t) {
    std::ostringstream os;
    os << "(" << t.poly.str() << ") " << word_str(t.word);
    return os.str();
}
} // namespace

SuperScalar integrate_box(const GradedElement& density) {
    // Coefficient of dx0 dx1 dx2 dx3 (the dx letters sit first in every
    // canonical word, so stripping them is sign-free), then iterated
    // exact integration of the polynomial over [0,1]^4.
    const OddWord top = dx_gen(0) | dx_gen(1) | dx_gen(2) | dx_gen(3);
    std::vector<SuperScalar::Term> out;
    for (const auto& t : density.terms()) {
        if (u_degree(t.word) != 0)
            throw std::invalid_argument("integrate_box: internal degree != 0 in " + offending(t));
        if ((t.word & kDxMask) != top)
            throw std::invalid_argument("integrate_box: form degree != 4 in " + offending(t));
        ParamPoly p = t.poly;
        for (int mu = 0; mu < 4; ++mu) p = p.integrate_unit(VAR_X0 + mu);
        if (!p.is_zero()) out.push_back({t.word & ~kDxMask, std::move(p)});
    }
    return raw_terms(std::move(out));
}

SuperScalar integrate_boundary(const GradedElement& density) {
    const OddWord face = dx_gen(0) | dx_gen(1) | dx_gen(2);
    std::vector<SuperScalar::Term> out;
    for (const auto& t : density.terms()) {
        if (u_degree(t.word) != 0)
            throw std::invalid_argument("integrate_boundary: internal degree != 0 in " + offending(t));
        if ((t.word & kDxMask) != face)
            throw std::invalid_argument("integrate_boundary: form degree != 3 (tangential) in " +
                                        offending(t));
        ParamPoly p = t.poly.substitute(VAR_X3, Rational(0));
        for (int a = 0; a < 3; ++a) p = p.integrate_unit(VAR_X0 + a);
        if (!p.is_zero()) out.push_back({t.word & ~kDxMask, std::move(p)});
    }
    return raw_terms(std::move(out));
}

BoundarySplit boundary_split(const GradedElement& a) {
    const OddWord dx3 = dx_gen(3);
    std::vector<SuperScalar::Term> tang, norm;
    for (const auto& t : a.terms()) {
        ParamPoly p = t.poly.substitute(VAR_X3, Rational(0));
        if (p.is_zero()) continue;
        if (t.word & dx3) {
            // a = tang + dx3 ^ normal: dx3 passes the letters below it
            int s = extract_left_sign(t.word, dx3);
            if (s < 0) p = -p;
            norm.push_back({t.word & ~dx3, std::move(p)});
        } else {
            tang.push_back({t.word, std::move(p)});
        }
    }
    return {raw_terms(std::move(tang)), raw_terms(std::move(norm))};
}

BoundaryRestriction boundary_restrict(const FieldConfig& cfg) {
    BoundaryRestriction r;
    for (const auto& [name, value] : cfg.elems)
        r.fields[name] = boundary_split(value);
    const std::array<Rational, 4> dummy{}; // substitution handled per component
    (void)dummy;
    for (int a = 0; a < 3; ++a)
        r.xi_tangent[a] = cfg.xi.comp[a].substitute_param(VAR_X3, Rational(0));
    r.xi_normal = cfg.xi.comp[3].substitute_param(VAR_X3, Rational(0));
    // chi = chi_a dx^a + chi_n dx^3 (components are the dx coefficients)
    const auto& chi = r.fields.at("chi");
    for (int a = 0; a < 3; ++a)
        r.chi_tangent[a] = chi.tangential.extract_odd_left(dx_gen(a));
    r.chi_normal = chi.normal;
    r.vol_boundary = r.fields.at("vol").normal;
    return r;
}

VectorField BoundaryRestriction::xi_tangent_vf() const {
    VectorField v;
    v.comp_parity = 1;
    for (int a = 0; a < 3; ++a) v.comp[a] = xi_tangent[a];
    return v;
}

// ---------------------------------------------------------------------------
// Canonical JSON serialization.  Rationals are numerator/denominator
// strings; words are letter lists; ordering is canonical throughout, so
// equal configs serialize to identical bytes.

namespace {

using nlohmann::ordered_json;

ordered_json poly_to_json(const ParamPoly& p) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : p.terms()) {
        ordered_json m = ordered_json::array();
        for (int v = 0; v < kNumPolyVars; ++v) m.push_back(mono_exp(t.mono, v));
        terms.push_back({{"m", m},
                         {"n", t.coeff.get_num().get_str()},
                         {"d", t.coeff.get_den().get_str()}});
    }
    return terms;
}

ParamPoly poly_from_json(const ordered_json& j) {
    std::vector<ParamPoly::Term> terms;
    ParamPoly out;
    for (const auto& tj : j) {
        Monomial m = 0;
        for (int v = 0; v < kNumPolyVars; ++v)
            m = mono_with_exp(m, v, tj["m"][v].get<int>());
        Rational c = rational_from_strings(tj["n"].get<std::string>(),
                                           tj["d"].get<std::string>());
        ParamPoly piece(c);
        // rebuild the monomial
        for (int v = 0; v < kNumPolyVars; ++v)
            if (int e = mono_exp(m, v); e > 0)
                piece = piece * ParamPoly::variable(v, e);
        out += piece;
    }
    return out;
}

std::vector<std::string> word_letters(OddWord w) {
    std::vector<std::string> ls;
    for (int mu = 0; mu < 4; ++mu)
        if (w & dx_gen(mu)) ls.push_back("dx" + std::to_string(mu));
    for (int i = 0; i < 4; ++i)
        if (w & u_gen(i)) ls.push_back("u" + std::to_string(i));
    for (int a = 0; a < kThetaPoolMax; ++a)
        if (w & theta_gen(a)) ls.push_back("th" + std::to_string(a));
    for (int a = 0; a < kThetaPoolMax; ++a)
        if (w & thetabar_gen(a)) ls.push_back("tb" + std::to_string(a));
    for (int j = 0; j < kMarkerPoolMax; ++j)
        if (w & marker_gen(j)) ls.push_back("ev" + std::to_string(j));
    return ls;
}

OddWord word_from_letters(const ordered_json& letters) {
    OddWord w = 0;
    for (const auto& lj : letters) {
        std::string s = lj.get<std::string>();
        if (s.rfind("dx", 0) == 0) w |= dx_gen(std::stoi(s.substr(2)));
        else if (s.rfind("ev", 0) == 0) w |= marker_gen(std::stoi(s.substr(2)));
        else if (s.rfind("u", 0) == 0) w |= u_gen(std::stoi(s.substr(1)));
        else if (s.rfind("th", 0) == 0) w |= theta_gen(std::stoi(s.substr(2)));
        else if (s.rfind("tb", 0) == 0) w |= thetabar_gen(std::stoi(s.substr(2)));
        else throw std::invalid_argument("bad word letter: " + s);
    }
    return w;
}

ordered_json element_to_json(const GradedElement& a) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : a.terms())
        terms.push_back({{"word", word_letters(t.word)}, {"poly", poly_to_json(t.poly)}});
    return terms;
}

GradedElement element_from_json(const ordered_json& j) {
    std::vector<SuperScalar::Term> terms;
    for (const auto& tj : j) {
        ParamPoly p = poly_from_json(tj["poly"]);
        if (!p.is_zero()) terms.push_back({word_from_letters(tj["word"]), std::move(p)});
    }
    return raw_terms(std::move(terms));
}

const char* support_name(Support s) {
    switch (s) {
        case Support::none: return "none";
        case Support::compact: return "compact";
        case Support::free_boundary: return "free";
    }
    return "?";
}

Support support_from_name(const std::string& s) {
    if (s == "none") return Support::none;
    if (s == "compact") return Support::compact;
    if (s == "free") return Support::free_boundary;
    throw std::invalid_argument("bad support mode: " + s);
}

} // namespace

std::string config_to_json(const FieldConfig& cfg) {
    ordered_json j;
    j["version"] = 1;
    j["seed"] = cfg.seed;
    j["degree_bound"] = cfg.degree_bound;
    j["theta_pool"] = cfg.theta_pool;
    j["support"] = support_name(cfg.support);
    ordered_json fields;
    for (const auto& [name, value] : cfg.elems) // std::map: already sorted
        fields[name] = element_to_json(value);
    ordered_json xi = ordered_json::array();
    for (int mu = 0; mu < 4; ++mu) xi.push_back(element_to_json(cfg.xi.comp[mu]));
    j["fields"] = fields;
    j["xi"] = xi;
    return j.dump(1);
}

FieldConfig config_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    FieldConfig cfg;
    cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.degree_bound = j["degree_bound"].get<int>();
    cfg.theta_pool = j["theta_pool"].get<int>();
    cfg.support = support_from_name(j["support"].get<std::string>());
    for (auto it = j["fields"].begin(); it != j["fields"].end(); ++it)
        cfg.elems[it.key()] = element_from_json(it.value());
    cfg.xi.comp_parity = 1;
    for (int mu = 0; mu < 4; ++mu) cfg.xi.comp[mu] = element_from_json(j["xi"][mu]);
    return cfg;
}

} // namespace pchbv
