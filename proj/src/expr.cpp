#include "pchbv/expr.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace pchbv {

const std::vector<FieldSpec>& extended_specs() {
    static const std::vector<FieldSpec> extra = [] {
        std::vector<FieldSpec> v = field_registry();
        // constraint parameters
        v.push_back({"alpha", 0, 2, 1, false, false});
        v.push_back({"alpha2", 0, 2, 1, false, false});
        v.push_back({"mu", 0, 1, 1, false, false});
        v.push_back({"xi2", 0, 0, 1, true, false});
        v.push_back({"phi", 0, 0, 0, false, false}); // generic test field: shape refined per use
        // Piguet chart
        v.push_back({"eP", 1, 1, 0, false, true});
        v.push_back({"omegaP", 1, 2, 0, false, false});
        v.push_back({"thetaP", 0, 2, 1, false, false});
        v.push_back({"xiP", 0, 0, 1, true, false});
        v.push_back({"eP_dag", 3, 3, -1, false, false});
        v.push_back({"omegaP_dag", 3, 2, -1, false, false});
        v.push_back({"thetaP_dag", 4, 2, -2, false, false});
        v.push_back({"chiP", 1, 0, -2, false, false});
        v.push_back({"volP", 4, 0, 0, false, false});
        // boundary (BFV) chart; forms live on the 3d face
        v.push_back({"E", 2, 2, 0, false, false});
        v.push_back({"bomega", 1, 2, 0, false, false});
        v.push_back({"bc", 0, 2, 1, false, false});
        v.push_back({"bomega_dag", 3, 2, -1, false, false});
        v.push_back({"bxi", 0, 0, 1, true, false});
        v.push_back({"be_dag0", 3, 4, -1, false, false});
        v.push_back({"be_dag1", 3, 4, -1, false, false});
        v.push_back({"be_dag2", 3, 4, -1, false, false});
        v.push_back({"be", 1, 1, 0, false, true});
        v.push_back({"bt", 2, 3, 0, false, false});
        return v;
    }();
    return extra;
}

const FieldSpec& field_spec_ex(const std::string& name) {
    for (const auto& f : extended_specs())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown field name: " + name);
}

bool has_field_spec_ex(const std::string& name) {
    for (const auto& f : extended_specs())
        if (f.name == name) return true;
    return false;
}

// --------------------------------------------------------------------------
// VFExpr

VFExprPtr VFExpr::ref(const std::string& n) {
    auto v = std::make_shared<VFExpr>();
    v->kind = VFKind::Ref;
    v->name = n;
    if (!field_spec_ex(n).is_vector_field)
        throw std::invalid_argument("not a vector field: " + n);
    return v;
}

VFExprPtr VFExpr::var(const std::string& n, int slot) {
    auto v = std::make_shared<VFExpr>();
    v->kind = VFKind::VarRef;
    v->name = n;
    v->slot = slot;
    return v;
}

VFExprPtr VFExpr::self_bracket(VFExprPtr x) {
    auto v = std::make_shared<VFExpr>();
    v->kind = VFKind::SelfBracket;
    v->a = std::move(x);
    return v;
}

VFExprPtr VFExpr::bracket(VFExprPtr x, VFExprPtr y) {
    auto v = std::make_shared<VFExpr>();
    v->kind = VFKind::Bracket;
    v->a = std::move(x);
    v->b = std::move(y);
    return v;
}

VFExprPtr VFExpr::scaled(VFExprPtr x, Rational c) {
    auto v = std::make_shared<VFExpr>();
    v->kind = VFKind::Scaled;
    v->a = std::move(x);
    v->coeff = std::move(c);
    return v;
}

int VFExpr::ghost() const {
    switch (kind) {
        case VFKind::Ref:
        case VFKind::VarRef: return field_spec_ex(name).ghost;
        case VFKind::SelfBracket: return 2 * a->ghost();
        case VFKind::Bracket: return a->ghost() + b->ghost();
        case VFKind::Scaled: return a->ghost();
    }
    return 0;
}

int VFExpr::comp_parity() const {
    switch (kind) {
        case VFKind::Ref:
        case VFKind::VarRef: return field_spec_ex(name).ghost & 1;
        case VFKind::SelfBracket: return 0;
        case VFKind::Bracket: return (a->comp_parity() + b->comp_parity()) & 1;
        case VFKind::Scaled: return a->comp_parity();
    }
    return 0;
}

// --------------------------------------------------------------------------
// Factories

namespace {
std::shared_ptr<Expr> make(ExprKind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}
Expr* mut(const std::shared_ptr<Expr>& e) { return e.get(); }
} // namespace

ExprPtr field_ref(const std::string& name) {
    const auto& spec = field_spec_ex(name);
    if (spec.is_vector_field)
        throw std::invalid_argument("vector field used as element: " + name);
    auto e = make(ExprKind::FieldRef);
    mut(e)->field = name;
    mut(e)->shape = {spec.form_degree, spec.internal_degree, spec.parity()};
    return e;
}

ExprPtr variation_ref(const std::string& name, int slot) {
    const auto& spec = field_spec_ex(name);
    if (spec.is_vector_field)
        throw std::invalid_argument("vector field variation used as element: " + name);
    auto e = make(ExprKind::VariationRef);
    mut(e)->field = name;
    mut(e)->slot = slot;
    mut(e)->shape = {spec.form_degree, spec.internal_degree, spec.parity()};
    return e;
}

ExprPtr wedge(std::vector<ExprPtr> children) {
    std::vector<ExprPtr> flat;
    for (auto& c : children) {
        if (!c) continue;
        if (c->kind == ExprKind::Wedge) {
            for (const auto& cc : c->children) flat.push_back(cc);
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.empty()) throw std::invalid_argument("empty wedge");
    if (flat.size() == 1) return flat[0];
    auto e = make(ExprKind::Wedge);
    ExprShape s{0, 0, 0};
    for (const auto& c : flat) {
        s.form += c->shape.form;
        s.internal += c->shape.internal;
        s.parity = (s.parity + c->shape.parity) & 1;
    }
    if (s.form > 4)
        throw std::invalid_argument("wedge exceeds top form degree");
    mut(e)->children = std::move(flat);
    mut(e)->shape = s;
    return e;
}

ExprPtr sum(std::vector<ExprPtr> children) {
    std::vector<ExprPtr> flat;
    for (auto& c : children) {
        if (!c) continue;
        if (c->kind == ExprKind::Sum) {
            for (const auto& cc : c->children) flat.push_back(cc);
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.empty()) return nullptr;
    if (flat.size() == 1) return flat[0];
    auto e = make(ExprKind::Sum);
    ExprShape s = flat[0]->shape;
    for (const auto& c : flat) {
        if (c->shape.form != s.form || c->shape.internal != s.internal ||
            c->shape.parity != s.parity)
            throw std::invalid_argument("sum of mixed shapes: " + flat[0]->str() +
                                        " vs " + c->str());
    }
    mut(e)->children = std::move(flat);
    mut(e)->shape = s;
    return e;
}

ExprPtr scale(Rational c, ExprPtr child) { return scale(SuperScalar(std::move(c)), std::move(child)); }

ExprPtr scale(SuperScalar c, ExprPtr child) {
    if (!child) return nullptr;
    for (const auto& t : c.terms())
        if (t.word != 0)
            throw std::invalid_argument("scale must be an even constant");
    if (c.is_zero()) return nullptr;
    auto e = make(ExprKind::Scale);
    mut(e)->scale = std::move(c);
    mut(e)->shape = child->shape;
    mut(e)->children = {std::move(child)};
    return e;
}

ExprPtr ext_d(ExprPtr child) {
    if (!child) return nullptr;
    auto e = make(ExprKind::ExtD);
    mut(e)->shape = {child->shape.form + 1, child->shape.internal,
                     (child->shape.parity + 1) & 1};
    mut(e)->children = {std::move(child)};
    return e;
}

ExprPtr cov_d(ExprPtr conn, ExprPtr child) {
    if (!child) return nullptr;
    if (conn->shape.internal != 2)
        throw std::invalid_argument("connection must have internal degree 2");
    auto e = make(ExprKind::CovD);
    mut(e)->shape = {child->shape.form + 1, child->shape.internal,
                     (child->shape.parity + 1) & 1};
    mut(e)->conn = std::move(conn);
    mut(e)->children = {std::move(child)};
    return e;
}

ExprPtr interior_e(VFExprPtr vf, ExprPtr child) {
    if (!child || !vf) return nullptr;
    if (child->shape.form < 1)
        throw std::invalid_argument("interior of a 0-form: " + child->str());
    auto e = make(ExprKind::Interior);
    int op = (1 + vf->comp_parity()) & 1;
    mut(e)->shape = {child->shape.form - 1, child->shape.internal,
                     (child->shape.parity + op) & 1};
    mut(e)->vf = std::move(vf);
    mut(e)->children = {std::move(child)};
    return e;
}

ExprPtr bracket_e(ExprPtr a, ExprPtr b) {
    if (!a || !b) return nullptr;
    if (a->shape.internal != 2)
        throw std::invalid_argument("bracket: first argument must have internal degree 2");
    auto e = make(ExprKind::Bracket);
    mut(e)->shape = {a->shape.form + b->shape.form, b->shape.internal,
                     (a->shape.parity + b->shape.parity) & 1};
    mut(e)->children = {std::move(a), std::move(b)};
    return e;
}

ExprPtr curvature_e(ExprPtr conn) {
    if (conn->shape.internal != 2)
        throw std::invalid_argument("curvature: connection internal degree must be 2");
    auto e = make(ExprKind::Curvature);
    mut(e)->shape = {conn->shape.form + 1, 2, (conn->shape.parity + 1) & 1};
    mut(e)->conn = std::move(conn);
    return e;
}

ExprPtr trace_e(ExprPtr child) {
    if (!child) return nullptr;
    if (child->shape.internal != 4)
        throw std::invalid_argument("trace: internal degree must be 4: " + child->str());
    auto e = make(ExprKind::Trace);
    mut(e)->shape = {child->shape.form, 0, child->shape.parity};
    mut(e)->children = {std::move(child)};
    return e;
}

ExprPtr twist_e(ExprPtr child) {
    if (!child) return nullptr;
    if (child->shape.internal != 2)
        throw std::invalid_argument("twist: internal degree must be 2: " + child->str());
    auto e = make(ExprKind::Twist);
    mut(e)->shape = child->shape;
    mut(e)->children = {std::move(child)};
    return e;
}

// --------------------------------------------------------------------------
// Evaluation

Payload markerize(const Payload& p, OddWord marker) {
    Payload out;
    SuperScalar m = SuperScalar::generator(marker);
    for (const auto& [k, v] : p.elems) out.elems[k] = m * v;
    for (const auto& [k, v] : p.vfs) {
        VectorField w;
        w.comp_parity = (v.comp_parity + 1) & 1;
        for (int mu = 0; mu < 4; ++mu) w.comp[mu] = m * v.comp[mu];
        out.vfs[k] = std::move(w);
    }
    return out;
}

Payload markerize_even(const Payload& p, int var) {
    Payload out;
    ParamPoly t = ParamPoly::variable(var);
    for (const auto& [k, v] : p.elems) out.elems[k] = v * t;
    for (const auto& [k, v] : p.vfs) {
        VectorField w;
        w.comp_parity = v.comp_parity;
        for (int mu = 0; mu < 4; ++mu) w.comp[mu] = v.comp[mu] * t;
        out.vfs[k] = std::move(w);
    }
    return out;
}

GradedElement EvalEnv::field_value(const std::string& name) const {
    GradedElement v;
    bool found = false;
    if (base) {
        auto it = base->elems.find(name);
        if (it != base->elems.end()) {
            v = it->second;
            found = true;
        }
    }
    for (const auto& s : slots) {
        auto it = s.markerized.elems.find(name);
        if (it != s.markerized.elems.end()) {
            v += it->second;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("no value for field: " + name);
    return v;
}

VectorField EvalEnv::vf_value(const std::string& name) const {
    VectorField v;
    bool found = false;
    if (base) {
        if (name == "xi") {
            v = base->xi;
            found = true;
        } else {
            auto it = base->vfs.find(name);
            if (it != base->vfs.end()) {
                v = it->second;
                found = true;
            }
        }
    }
    for (const auto& s : slots) {
        auto it = s.markerized.vfs.find(name);
        if (it != s.markerized.vfs.end()) {
            v = found ? v + it->second : it->second;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("no value for vector field: " + name);
    return v;
}

GradedElement EvalEnv::variation_value(const std::string& name, int slot) const {
    GradedElement v;
    for (const auto& s : slots) {
        if (slot >= 0 ? s.slot_id != slot : s.slot_id < 1) continue;
        auto it = s.markerized.elems.find(name);
        if (it != s.markerized.elems.end()) v += it->second;
    }
    return v;
}

VectorField EvalEnv::vf_variation_value(const std::string& name, int slot) const {
    VectorField v;
    bool found = false;
    for (const auto& s : slots) {
        if (slot >= 0 ? s.slot_id != slot : s.slot_id < 1) continue;
        auto it = s.markerized.vfs.find(name);
        if (it != s.markerized.vfs.end()) {
            v = found ? v + it->second : it->second;
            found = true;
        }
    }
    return v;
}

VectorField eval_vf(const VFExprPtr& v, EvalEnv& env) {
    switch (v->kind) {
        case VFKind::Ref: return env.vf_value(v->name);
        case VFKind::VarRef: return env.vf_variation_value(v->name, v->slot);
        case VFKind::SelfBracket: {
            VectorField a = eval_vf(v->a, env);
            return vf_bracket(a, a);
        }
        case VFKind::Bracket:
            return vf_bracket(eval_vf(v->a, env), eval_vf(v->b, env));
        case VFKind::Scaled: {
            VectorField a = eval_vf(v->a, env);
            VectorField r;
            r.comp_parity = a.comp_parity;
            for (int mu = 0; mu < 4; ++mu) r.comp[mu] = a.comp[mu] * v->coeff;
            return r;
        }
    }
    throw std::logic_error("bad vf expr");
}

GradedElement eval(const ExprPtr& e, EvalEnv& env) {
    if (!e) return GradedElement();
    bool cacheable = e->kind == ExprKind::Curvature || e->kind == ExprKind::CovD ||
                     e->kind == ExprKind::Trace || e->kind == ExprKind::Wedge ||
                     e->kind == ExprKind::Sum || e->kind == ExprKind::Interior;
    if (cacheable) {
        auto it = env.cache.find(e.get());
        if (it != env.cache.end()) return it->second;
    }
    try {
        auto store = [&](GradedElement v) {
            if (cacheable) env.cache.emplace(e.get(), v);
            return v;
        };
        switch (e->kind) {
            case ExprKind::FieldRef: return env.field_value(e->field);
            case ExprKind::VariationRef: return env.variation_value(e->field, e->slot);
            case ExprKind::Wedge: {
                GradedElement v = eval(e->children[0], env);
                for (std::size_t i = 1; i < e->children.size() && !v.is_zero(); ++i)
                    v = v * eval(e->children[i], env);
                return store(std::move(v));
            }
            case ExprKind::Sum: {
                GradedElement v;
                for (const auto& c : e->children) v += eval(c, env);
                return store(std::move(v));
            }
            case ExprKind::Scale: return e->scale * eval(e->children[0], env);
            case ExprKind::ExtD: return exterior_d(eval(e->children[0], env));
            case ExprKind::CovD:
                return store(covariant_d(eval(e->conn, env), eval(e->children[0], env)));
            case ExprKind::Interior:
                return store(interior(eval_vf(e->vf, env), eval(e->children[0], env)));
            case ExprKind::Bracket:
                return so_bracket(eval(e->children[0], env), eval(e->children[1], env));
            case ExprKind::Curvature: return store(curvature(eval(e->conn, env)));
            case ExprKind::Trace: return store(trace_eps(eval(e->children[0], env)));
            case ExprKind::Twist: return holst_twist(eval(e->children[0], env));
            case ExprKind::Derive: {
                Payload images = q_images(*e->q, env);
                if (env.next_fresh_marker < 8)
                    throw std::runtime_error("marker pool exhausted");
                int m = env.next_fresh_marker--;
                env.slots.push_back({markerize(images, marker_gen(m)), 0});
                env.invalidate_cache();
                GradedElement val = eval(e->children[0], env);
                env.slots.pop_back();
                env.invalidate_cache();
                ++env.next_fresh_marker;
                return val.extract_odd(marker_gen(m));
            }
        }
    } catch (const std::exception& ex) {
        throw std::runtime_error(std::string(ex.what()) + "\n  at node " + e->str());
    }
    throw std::logic_error("bad expr kind");
}

GradedElement eval(const ExprPtr& e, const FieldConfig& cfg) {
    EvalEnv env;
    env.base = &cfg;
    return eval(e, env);
}

Payload q_images(const QAssignment& Q, EvalEnv& env) {
    Payload p;
    for (const auto& [name, img] : Q.elem_images) p.elems[name] = eval(img, env);
    for (const auto& [name, img] : Q.vf_images) p.vfs[name] = eval_vf(img, env);
    return p;
}

Payload q_images(const QAssignment& Q, const FieldConfig& cfg) {
    EvalEnv env;
    env.base = &cfg;
    return q_images(Q, env);
}

ExprPtr apply_Q(std::shared_ptr<const QAssignment> Q, const ExprPtr& e) {
    std::set<std::string> elems, vfs;
    collect_fields(e, elems, vfs);
    for (const auto& n : elems)
        if (!Q->elem_images.count(n))
            throw std::invalid_argument("apply_Q: no assignment for field " + n);
    for (const auto& n : vfs)
        if (!Q->vf_images.count(n))
            throw std::invalid_argument("apply_Q: no assignment for vector field " + n);
    auto node = make(ExprKind::Derive);
    mut(node)->q = std::move(Q);
    mut(node)->shape = {e->shape.form, e->shape.internal, (e->shape.parity + 1) & 1};
    mut(node)->children = {e};
    return node;
}

FieldConfig materialize(const EvalEnv& env) {
    FieldConfig out;
    if (env.base) {
        out = *env.base;
    }
    for (const auto& s : env.slots) {
        for (const auto& [name, v] : s.markerized.elems) {
            auto it = out.elems.find(name);
            if (it == out.elems.end()) out.elems[name] = v;
            else it->second += v;
        }
        for (const auto& [name, v] : s.markerized.vfs) {
            if (name == "xi") out.xi = out.xi.is_zero() ? v : out.xi + v;
            else {
                auto it = out.vfs.find(name);
                if (it == out.vfs.end()) out.vfs[name] = v;
                else it->second = it->second + v;
            }
        }
    }
    return out;
}

FieldConfig materialize_variation(const EvalEnv& env, int slot_id) {
    FieldConfig out;
    for (const auto& s : env.slots) {
        if (s.slot_id != slot_id) continue;
        for (const auto& [name, v] : s.markerized.elems) {
            auto it = out.elems.find(name);
            if (it == out.elems.end()) out.elems[name] = v;
            else it->second += v;
        }
        for (const auto& [name, v] : s.markerized.vfs) {
            if (name == "xi") out.xi = out.xi.is_zero() ? v : out.xi + v;
            else out.vfs[name] = v;
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Variational differential (chain rule; marker semantics carry the signs)

std::vector<std::pair<VFExprPtr, Rational>> vary_vf_terms(const VFExprPtr& v, int slot) {
    std::vector<std::pair<VFExprPtr, Rational>> out;
    switch (v->kind) {
        case VFKind::Ref:
            out.push_back({VFExpr::var(v->name, slot), make_rational(1)});
            return out;
        case VFKind::VarRef:
            return out;
        case VFKind::SelfBracket: {
            // delta [x,x] = 2 [x, delta x] for odd x (markers included in
            // the variation's parity)
            if (v->a->comp_parity() != 1)
                throw std::logic_error("self bracket variation needs odd components");
            for (auto& [d, f] : vary_vf_terms(v->a, slot))
                out.push_back({VFExpr::bracket(v->a, std::move(d)), f * 2});
            return out;
        }
        case VFKind::Bracket: {
            for (auto& [d, f] : vary_vf_terms(v->a, slot))
                out.push_back({VFExpr::bracket(std::move(d), v->b), f});
            for (auto& [d, f] : vary_vf_terms(v->b, slot))
                out.push_back({VFExpr::bracket(v->a, std::move(d)), f});
            return out;
        }
        case VFKind::Scaled: {
            for (auto& [d, f] : vary_vf_terms(v->a, slot))
                out.push_back({std::move(d), f * v->coeff});
            return out;
        }
    }
    throw std::logic_error("bad vf expr");
}

VFExprPtr vary_vf(const VFExprPtr& v, int slot) {
    auto terms = vary_vf_terms(v, slot);
    if (terms.empty()) return nullptr;
    if (terms.size() == 1 && terms[0].second == 1) return terms[0].first;
    throw std::logic_error("vary_vf: composite variation; use vary_vf_terms");
}

ExprPtr vary(const ExprPtr& e, int slot) {
    if (!e) return nullptr;
    switch (e->kind) {
        case ExprKind::FieldRef: return variation_ref(e->field, slot);
        case ExprKind::VariationRef: return nullptr;
        case ExprKind::Wedge: {
            std::vector<ExprPtr> pieces;
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                auto d = vary(e->children[i], slot);
                if (!d) continue;
                std::vector<ExprPtr> f = e->children;
                f[i] = std::move(d);
                pieces.push_back(wedge(std::move(f)));
            }
            return sum(std::move(pieces));
        }
        case ExprKind::Sum: {
            std::vector<ExprPtr> pieces;
            for (const auto& c : e->children) pieces.push_back(vary(c, slot));
            return sum(std::move(pieces));
        }
        case ExprKind::Scale: {
            auto d = vary(e->children[0], slot);
            return d ? scale(e->scale, std::move(d)) : nullptr;
        }
        case ExprKind::ExtD: {
            auto d = vary(e->children[0], slot);
            return d ? ext_d(std::move(d)) : nullptr;
        }
        case ExprKind::CovD: {
            auto dchild = vary(e->children[0], slot);
            auto dconn = vary(e->conn, slot);
            std::vector<ExprPtr> pieces;
            if (dchild) pieces.push_back(cov_d(e->conn, std::move(dchild)));
            if (dconn) pieces.push_back(bracket_e(std::move(dconn), e->children[0]));
            return sum(std::move(pieces));
        }
        case ExprKind::Interior: {
            std::vector<ExprPtr> pieces;
            for (auto& [dvf, f] : vary_vf_terms(e->vf, slot)) {
                ExprPtr t = interior_e(std::move(dvf), e->children[0]);
                if (f != 1) t = scale(f, std::move(t));
                pieces.push_back(std::move(t));
            }
            auto dchild = vary(e->children[0], slot);
            if (dchild) pieces.push_back(interior_e(e->vf, std::move(dchild)));
            return sum(std::move(pieces));
        }
        case ExprKind::Bracket: {
            std::vector<ExprPtr> pieces;
            auto da = vary(e->children[0], slot);
            auto db = vary(e->children[1], slot);
            if (da) pieces.push_back(bracket_e(std::move(da), e->children[1]));
            if (db) pieces.push_back(bracket_e(e->children[0], std::move(db)));
            return sum(std::move(pieces));
        }
        case ExprKind::Curvature: {
            auto dconn = vary(e->conn, slot);
            return dconn ? cov_d(e->conn, std::move(dconn)) : nullptr;
        }
        case ExprKind::Trace: {
            auto d = vary(e->children[0], slot);
            return d ? trace_e(std::move(d)) : nullptr;
        }
        case ExprKind::Twist: {
            auto d = vary(e->children[0], slot);
            return d ? twist_e(std::move(d)) : nullptr;
        }
    }
    throw std::logic_error("bad expr kind");
}

void collect_fields(const ExprPtr& e, std::set<std::string>& elems,
                    std::set<std::string>& vfs) {
    if (!e) return;
    std::function<void(const VFExprPtr&)> walk_vf = [&](const VFExprPtr& v) {
        if (!v) return;
        if (v->kind == VFKind::Ref || v->kind == VFKind::VarRef) vfs.insert(v->name);
        walk_vf(v->a);
        walk_vf(v->b);
    };
    if (e->kind == ExprKind::FieldRef || e->kind == ExprKind::VariationRef)
        elems.insert(e->field);
    walk_vf(e->vf);
    collect_fields(e->conn, elems, vfs);
    for (const auto& c : e->children) collect_fields(c, elems, vfs);
}

// --------------------------------------------------------------------------
// Printer

std::string Expr::str() const {
    std::ostringstream os;
    switch (kind) {
        case ExprKind::FieldRef: os << field; break;
        case ExprKind::VariationRef:
            os << "d(" << field;
            if (slot >= 0) os << ";" << slot;
            os << ")";
            break;
        case ExprKind::Wedge: {
            bool first = true;
            for (const auto& c : children) {
                if (!first) os << " ";
                bool paren = c->kind == ExprKind::Sum || c->kind == ExprKind::Scale;
                os << (paren ? "(" : "") << c->str() << (paren ? ")" : "");
                first = false;
            }
            break;
        }
        case ExprKind::Sum: {
            bool first = true;
            for (const auto& c : children) {
                if (!first) os << " + ";
                os << c->str();
                first = false;
            }
            break;
        }
        case ExprKind::Scale:
            os << scale.str() << "*" << "(" << children[0]->str() << ")";
            break;
        case ExprKind::ExtD: os << "d[" << children[0]->str() << "]"; break;
        case ExprKind::CovD:
            os << "D{" << conn->str() << "}[" << children[0]->str() << "]";
            break;
        case ExprKind::Interior: {
            os << "i{";
            std::function<void(const VFExpr&)> pv = [&](const VFExpr& v) {
                switch (v.kind) {
                    case VFKind::Ref: os << v.name; break;
                    case VFKind::VarRef: os << "d(" << v.name << ")"; break;
                    case VFKind::SelfBracket:
                        os << "[";
                        pv(*v.a);
                        os << ",";
                        pv(*v.a);
                        os << "]";
                        break;
                    case VFKind::Bracket:
                        os << "[";
                        pv(*v.a);
                        os << ",";
                        pv(*v.b);
                        os << "]";
                        break;
                    case VFKind::Scaled:
                        os << v.coeff.get_str() << "*";
                        pv(*v.a);
                        break;
                }
            };
            pv(*vf);
            os << "}[" << children[0]->str() << "]";
            break;
        }
        case ExprKind::Bracket:
            os << "[" << children[0]->str() << ", " << children[1]->str() << "]";
            break;
        case ExprKind::Curvature: os << "F{" << conn->str() << "}"; break;
        case ExprKind::Trace: os << "Tr[" << children[0]->str() << "]"; break;
        case ExprKind::Twist: os << "Tw[" << children[0]->str() << "]"; break;
        case ExprKind::Derive: os << "Q(" << children[0]->str() << ")"; break;
    }
    return os.str();
}

} // namespace pchbv
