#include "pchbv/noether.hpp"

#include <deque>

namespace pchbv {

namespace {

struct IbpTerm {
    ParamPoly coeff;
    std::vector<ExprPtr> factors;
    bool traced = false;
};

bool contains_variation(const ExprPtr& e) {
    if (!e) return false;
    if (e->kind == ExprKind::VariationRef) return true;
    std::function<bool(const VFExprPtr&)> vfvar = [&](const VFExprPtr& v) -> bool {
        if (!v) return false;
        if (v->kind == VFKind::VarRef) return true;
        return vfvar(v->a) || vfvar(v->b);
    };
    if (e->vf && vfvar(e->vf)) return true;
    if (contains_variation(e->conn)) return true;
    for (const auto& c : e->children)
        if (contains_variation(c)) return true;
    return false;
}

/// d applied (possibly covariantly) to a variation somewhere inside.
bool contains_bad_d(const ExprPtr& e) {
    if (!e) return false;
    if ((e->kind == ExprKind::ExtD || e->kind == ExprKind::CovD) &&
        contains_variation(e->children[0]))
        return true;
    if (contains_bad_d(e->conn)) return true;
    for (const auto& c : e->children)
        if (contains_bad_d(c)) return true;
    return false;
}

/// Push Twist through the equivariant operators until it rests on atoms.
ExprPtr push_twist(const ExprPtr& e) {
    const ExprPtr& c = e->children[0];
    switch (c->kind) {
        case ExprKind::ExtD: return ext_d(push_twist(twist_e(c->children[0])));
        case ExprKind::CovD:
            return cov_d(c->conn, push_twist(twist_e(c->children[0])));
        case ExprKind::Interior:
            return interior_e(c->vf, push_twist(twist_e(c->children[0])));
        case ExprKind::Bracket:
            return bracket_e(c->children[0], push_twist(twist_e(c->children[1])));
        case ExprKind::Scale:
            return scale(c->scale, push_twist(twist_e(c->children[0])));
        case ExprKind::Sum: {
            std::vector<ExprPtr> parts;
            for (const auto& cc : c->children) parts.push_back(push_twist(twist_e(cc)));
            return sum(std::move(parts));
        }
        default: return e; // atom
    }
}

/// Flatten an expression into a sum of wedge terms with polynomial
/// coefficients, expanding sums and scales, splitting covariant
/// derivatives on variations, and pushing twists inward.
std::vector<IbpTerm> flatten_expr(const ExprPtr& e) {
    std::vector<IbpTerm> out;
    switch (e->kind) {
        case ExprKind::Sum: {
            for (const auto& c : e->children) {
                auto sub = flatten_expr(c);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        case ExprKind::Scale: {
            ParamPoly sp;
            for (const auto& t : e->scale.terms()) sp += t.poly;
            out = flatten_expr(e->children[0]);
            for (auto& t : out) t.coeff = t.coeff * sp;
            return out;
        }
        case ExprKind::Trace: {
            out = flatten_expr(e->children[0]);
            for (auto& t : out) {
                if (t.traced) throw std::logic_error("nested trace");
                t.traced = true;
            }
            return out;
        }
        case ExprKind::Wedge: {
            out.push_back({ParamPoly(make_rational(1)), {}, false});
            for (const auto& c : e->children) {
                auto sub = flatten_expr(c);
                std::vector<IbpTerm> next;
                next.reserve(out.size() * sub.size());
                for (const auto& lhs : out) {
                    for (const auto& rhs : sub) {
                        if (rhs.traced) throw std::logic_error("trace inside wedge");
                        IbpTerm t = lhs;
                        t.coeff = t.coeff * rhs.coeff;
                        for (const auto& f : rhs.factors) t.factors.push_back(f);
                        next.push_back(std::move(t));
                    }
                }
                out = std::move(next);
            }
            return out;
        }
        case ExprKind::Twist: {
            ExprPtr pushed = push_twist(e);
            if (pushed->kind != ExprKind::Twist) return flatten_expr(pushed);
            out.push_back({ParamPoly(make_rational(1)), {pushed}, false});
            return out;
        }
        case ExprKind::CovD: {
            if (contains_variation(e->children[0])) {
                out = flatten_expr(ext_d(e->children[0]));
                auto sub = flatten_expr(bracket_e(e->conn, e->children[0]));
                out.insert(out.end(), sub.begin(), sub.end());
                return out;
            }
            break;
        }
        default:
            break;
    }
    out.push_back({ParamPoly(make_rational(1)), {e}, false});
    return out;
}

} // namespace

NoetherSplit noether_split(const ExprPtr& S_density, int slot) {
    ExprPtr varied = vary(S_density, slot);
    if (!varied) return {nullptr, nullptr};

    std::vector<IbpTerm> queue = flatten_expr(varied);

    std::vector<IbpTerm> el, boundary;
    std::deque<IbpTerm> work(queue.begin(), queue.end());
    int guard = 0;
    while (!work.empty()) {
        if (++guard > 200000) throw std::runtime_error("noether_split: rewrite runaway");
        IbpTerm term = std::move(work.front());
        work.pop_front();

        // locate a factor still carrying d(variation)
        int bad = -1;
        for (std::size_t i = 0; i < term.factors.size(); ++i) {
            if (contains_bad_d(term.factors[i])) {
                bad = static_cast<int>(i);
                break;
            }
        }
        if (bad < 0) {
            el.push_back(std::move(term));
            continue;
        }
        ExprPtr f = term.factors[bad];

        // if the offender is wrapped (twist / covd / scale / sums), renormalize
        if (f->kind == ExprKind::Twist || f->kind == ExprKind::Scale ||
            f->kind == ExprKind::Sum ||
            (f->kind == ExprKind::CovD && contains_variation(f->children[0]))) {
            for (auto& st : flatten_expr(f)) {
                IbpTerm t2 = term;
                t2.coeff = term.coeff * st.coeff;
                if (st.factors.size() == 1) {
                    t2.factors[bad] = st.factors[0];
                } else {
                    t2.factors.erase(t2.factors.begin() + bad);
                    t2.factors.insert(t2.factors.begin() + bad, st.factors.begin(),
                                      st.factors.end());
                }
                work.push_back(std::move(t2));
            }
            continue;
        }

        if (f->kind == ExprKind::ExtD) {
            // P ^ d(X) ^ S: exact piece to the boundary, d moved to the
            // other factors with Leibniz signs
            std::vector<ExprPtr> W = term.factors;
            W[bad] = f->children[0];
            std::vector<int> presum(W.size() + 1, 0);
            for (std::size_t k = 0; k < W.size(); ++k)
                presum[k + 1] = presum[k] + W[k]->shape.parity;
            int si = presum[bad] & 1;
            Rational sgn_i = si ? make_rational(-1) : make_rational(1);
            IbpTerm bterm{term.coeff * sgn_i, W, term.traced};
            boundary.push_back(std::move(bterm));
            for (std::size_t k = 0; k < W.size(); ++k) {
                if (static_cast<int>(k) == bad) continue;
                if (W[k]->shape.form >= 4) continue; // d of a top factor vanishes
                IbpTerm t2;
                t2.traced = term.traced;
                int sk = (presum[bad] + presum[k]) & 1;
                t2.coeff = term.coeff * (sk ? make_rational(1) : make_rational(-1));
                t2.factors = W;
                t2.factors[k] = ext_d(W[k]);
                work.push_back(std::move(t2));
            }
            continue;
        }

        if (f->kind == ExprKind::Interior) {
            // the contraction of a top+1 form vanishes; move iota off the
            // offending factor onto every other factor
            std::vector<ExprPtr> W = term.factors;
            W[bad] = f->children[0];
            int total_form = 0;
            for (const auto& w : W) total_form += w->shape.form;
            if (total_form != 5)
                throw std::runtime_error(
                    "noether_split: contraction rule needs a top+1 form, got " +
                    std::to_string(total_form));
            int op = (1 + f->vf->comp_parity()) & 1;
            std::vector<int> presum(W.size() + 1, 0);
            for (std::size_t k = 0; k < W.size(); ++k)
                presum[k + 1] = presum[k] + W[k]->shape.parity;
            for (std::size_t k = 0; k < W.size(); ++k) {
                if (static_cast<int>(k) == bad) continue;
                if (W[k]->shape.form == 0) continue;
                IbpTerm t2;
                t2.traced = term.traced;
                int s = op ? (presum[bad] + presum[k]) & 1 : 0;
                t2.coeff = term.coeff * (s ? make_rational(1) : make_rational(-1));
                t2.factors = W;
                t2.factors[k] = interior_e(f->vf, W[k]);
                work.push_back(std::move(t2));
            }
            continue;
        }

        throw std::runtime_error("noether_split: unsupported derivative-on-variation form: " +
                                 f->str());
    }

    for (const auto& t : boundary)
        for (const auto& f : t.factors)
            if (contains_bad_d(f))
                throw std::runtime_error(
                    "noether_split: second-derivative-on-variation pattern (unsupported)");

    auto rebuild = [](const std::vector<IbpTerm>& terms) -> ExprPtr {
        std::vector<ExprPtr> parts;
        for (const auto& t : terms) {
            ExprPtr w = t.factors.size() == 1 ? t.factors[0] : wedge(t.factors);
            if (t.traced) w = trace_e(std::move(w));
            if (!(t.coeff == ParamPoly(make_rational(1))))
                w = scale(SuperScalar(t.coeff, 0), std::move(w));
            parts.push_back(std::move(w));
        }
        return sum(std::move(parts));
    };
    return {rebuild(el), rebuild(boundary)};
}

} // namespace pchbv
