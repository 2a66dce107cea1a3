#include "pchbv/actions.hpp"

namespace pchbv {

ExprPtr cov_lie_e(VFExprPtr vf, ExprPtr conn, ExprPtr child) {
    int op = (1 + vf->comp_parity()) & 1;
    ExprPtr first = interior_e(vf, cov_d(conn, child));
    ExprPtr second = cov_d(conn, interior_e(vf, child));
    return op ? sum(first, second) : sum(first, scale(make_rational(-1), second));
}

ExprPtr lie_e(VFExprPtr vf, ExprPtr child) {
    int op = (1 + vf->comp_parity()) & 1;
    ExprPtr first = interior_e(vf, ext_d(child));
    ExprPtr second = ext_d(interior_e(vf, child));
    return op ? sum(first, second) : sum(first, scale(make_rational(-1), second));
}

namespace {

SuperScalar lambda_cc() { return SuperScalar(ParamPoly::variable(VAR_LAMBDA), 0); }

std::shared_ptr<const QAssignment> make_pch_q() {
    auto Q = std::make_shared<QAssignment>();
    auto om = field_ref("omega");
    auto e = field_ref("e");
    auto c = field_ref("c");
    auto xi = VFExpr::ref("xi");
    auto F = curvature_e(om);
    // Q omega = iota_xi F - d_omega c
    Q->elem_images["omega"] = sum(interior_e(xi, F), scale(make_rational(-1), cov_d(om, c)));
    // Q e = L^omega_xi e - [c, e]
    Q->elem_images["e"] = sum(cov_lie_e(xi, om, e), scale(make_rational(-1), bracket_e(c, e)));
    // Q c = 1/2 iota_xi iota_xi F - 1/2 [c, c]
    Q->elem_images["c"] = sum(scale(make_rational(1, 2), interior_e(xi, interior_e(xi, F))),
                              scale(make_rational(-1, 2), bracket_e(c, c)));
    // Q xi = 1/2 [xi, xi]
    Q->vf_images["xi"] = VFExpr::scaled(VFExpr::self_bracket(xi), make_rational(1, 2));
    return Q;
}

} // namespace

ExprPtr build_bv_action(const ExprPtr& S0, const std::shared_ptr<const QAssignment>& Q,
                        const std::map<std::string, Rational>& signs) {
    std::vector<ExprPtr> terms{S0};
    auto sign_of = [&](const std::string& n) {
        auto it = signs.find(n);
        return it == signs.end() ? make_rational(1) : it->second;
    };
    // antifield pairings: 2-2 splits take the gamma twist on the antifield
    if (Q->elem_images.count("omega"))
        terms.push_back(scale(sign_of("omega"),
            trace_e(wedge(Q->elem_images.at("omega"), twist_e(field_ref("omega_dag"))))));
    if (Q->elem_images.count("e"))
        terms.push_back(scale(sign_of("e"),
            trace_e(wedge(Q->elem_images.at("e"), field_ref("e_dag")))));
    if (Q->elem_images.count("c"))
        terms.push_back(scale(sign_of("c"),
            trace_e(wedge(Q->elem_images.at("c"), twist_e(field_ref("c_dag"))))));
    if (Q->vf_images.count("xi")) {
        // iota_{Q xi} chi vol = 1/2 iota_[xi,xi] chi vol
        ExprPtr pair = wedge(
            interior_e(Q->vf_images.at("xi"), field_ref("chi")), field_ref("vol"));
        terms.push_back(scale(sign_of("xi"), std::move(pair)));
    }
    return sum(std::move(terms));
}

const PCHTheory& pch_theory() {
    static const PCHTheory theory = [] {
        PCHTheory t;
        auto e = field_ref("e");
        auto om = field_ref("omega");
        auto F = curvature_e(om);
        // S0 = T[1/2 e e F + Lambda/4 e^4]
        t.S0_density = sum(
            scale(make_rational(1, 2), trace_e(wedge(e, e, twist_e(F)))),
            scale(lambda_cc() * make_rational(1, 4),
                  trace_e(wedge(e, e, twist_e(wedge(e, e))))));
        t.Q = make_pch_q();
        t.S_density = build_bv_action(t.S0_density, t.Q,
                                      {{"omega", make_rational(1)},
                                       {"e", make_rational(-1)},
                                       {"c", make_rational(1)},
                                       {"xi", make_rational(1)}});
        // Omega = T[d(omega_dag) d(omega) + d(e_dag) d(e) + d(c_dag) d(c)]
        //         + iota_{d(xi)} d(xi_dag)
        auto dxi = VFExpr::var("xi", -1);
        t.Omega_density = sum(std::vector<ExprPtr>{
            trace_e(wedge(variation_ref("omega_dag"), twist_e(variation_ref("omega")))),
            trace_e(wedge(variation_ref("e_dag"), variation_ref("e"))),
            trace_e(wedge(variation_ref("c_dag"), twist_e(variation_ref("c")))),
            wedge(interior_e(dxi, variation_ref("chi")), field_ref("vol")),
            wedge(interior_e(dxi, field_ref("chi")), variation_ref("vol"))});
        return t;
    }();
    return theory;
}

const PiguetTheory& piguet_theory() {
    static const PiguetTheory theory = [] {
        PiguetTheory t;
        auto e = field_ref("eP");
        auto om = field_ref("omegaP");
        auto th = field_ref("thetaP");
        auto xi = VFExpr::ref("xiP");
        auto s = std::make_shared<QAssignment>();
        s->elem_images["eP"] = sum(lie_e(xi, e), bracket_e(th, e));
        s->elem_images["omegaP"] = sum(lie_e(xi, om), cov_d(om, th));
        s->elem_images["thetaP"] =
            sum(lie_e(xi, th), scale(make_rational(1, 2), bracket_e(th, th)));
        s->vf_images["xiP"] = VFExpr::scaled(VFExpr::self_bracket(xi), make_rational(1, 2));
        t.s = s;

        auto F = curvature_e(om);
        std::vector<ExprPtr> terms;
        terms.push_back(scale(make_rational(1, 2), trace_e(wedge(e, e, twist_e(F)))));
        terms.push_back(scale(lambda_cc() * make_rational(1, 4),
                              trace_e(wedge(e, e, twist_e(wedge(e, e))))));
        // antifields written in front, as in the primed chart
        terms.push_back(trace_e(wedge(field_ref("eP_dag"), s->elem_images.at("eP"))));
        terms.push_back(
            trace_e(wedge(field_ref("omegaP_dag"), twist_e(s->elem_images.at("omegaP")))));
        terms.push_back(
            trace_e(wedge(field_ref("thetaP_dag"), twist_e(s->elem_images.at("thetaP")))));
        terms.push_back(
            wedge(interior_e(s->vf_images.at("xiP"), field_ref("chiP")), field_ref("volP")));
        t.S_density = sum(std::move(terms));

        auto dxi = VFExpr::var("xiP", -1);
        t.Omega_density = sum(std::vector<ExprPtr>{
            trace_e(wedge(variation_ref("omegaP_dag"), twist_e(variation_ref("omegaP")))),
            trace_e(wedge(variation_ref("eP_dag"), variation_ref("eP"))),
            trace_e(wedge(variation_ref("thetaP_dag"), twist_e(variation_ref("thetaP")))),
            wedge(interior_e(dxi, variation_ref("chiP")), field_ref("volP")),
            wedge(interior_e(dxi, field_ref("chiP")), variation_ref("volP"))});
        return t;
    }();
    return theory;
}

FieldConfig phi_G_apply(const FieldConfig& cfg) {
    FieldConfig out = cfg; // keep the unprimed values available
    const GradedElement& e = cfg.at("e");
    const GradedElement& om = cfg.at("omega");
    const GradedElement& c = cfg.at("c");
    const GradedElement& cd = cfg.at("c_dag");
    out.elems["eP"] = e;
    out.elems["omegaP"] = om;
    out.elems["thetaP"] = interior(cfg.xi, om) - c;
    out.elems["eP_dag"] = cfg.at("e_dag");
    out.elems["omegaP_dag"] = cfg.at("omega_dag") - interior(cfg.xi, cd);
    out.elems["thetaP_dag"] = -cd;
    out.elems["chiP"] = cfg.at("chi");
    out.elems["volP"] = cfg.at("vol");
    out.vfs["xiP"] = cfg.xi;
    return out;
}

Payload phi_G_pushforward(const FieldConfig& cfg, const Payload& V) {
    // phi_G(cfg + eps V) = phi_G(cfg) + eps (pushforward); extract the
    // marker coefficient field by field.
    EvalEnv env;
    env.base = &cfg;
    const OddWord m = marker_gen(7);
    env.slots.push_back({markerize(V, m), -7});
    FieldConfig shifted = materialize(env);
    FieldConfig image = phi_G_apply(shifted);
    Payload out;
    for (const auto& name : piguet_elem_fields()) {
        GradedElement d = image.at(name).extract_odd(m);
        if (!d.is_zero()) out.elems[name] = std::move(d);
    }
    VectorField dxi;
    dxi.comp_parity = 0;
    bool any = false;
    for (int mu = 0; mu < 4; ++mu) {
        dxi.comp[mu] = image.vfs.at("xiP").comp[mu].extract_odd(m);
        any = any || !dxi.comp[mu].is_zero();
    }
    if (any) out.vfs["xiP"] = std::move(dxi);
    return out;
}

std::vector<std::string> piguet_elem_fields() {
    return {"eP", "omegaP", "thetaP", "eP_dag", "omegaP_dag", "thetaP_dag", "chiP", "volP"};
}

} // namespace pchbv
