#include "pchbv/variation.hpp"

namespace pchbv {

DensityFn density_of(const ExprPtr& e) {
    return [e](EvalEnv& env) { return eval(e, env); };
}

GradedElement vary_density(const DensityFn& F, const FieldConfig& cfg,
                           const Payload& V, int slot_id) {
    EvalEnv env;
    env.base = &cfg;
    const OddWord m = marker_gen(0);
    env.slots.push_back({markerize(V, m), slot_id});
    GradedElement val = F(env);
    return val.extract_odd(m);
}

GradedElement two_form_density(const DensityFn& F, const FieldConfig& cfg,
                               const Payload& V1, const Payload& V2) {
    EvalEnv env;
    env.base = &cfg;
    const OddWord m1 = marker_gen(0), m2 = marker_gen(1);
    env.slots.push_back({markerize(V1, m1), 1});
    env.slots.push_back({markerize(V2, m2), 2});
    GradedElement val = F(env);
    return val.extract_odd(m2).extract_odd(m1);
}

GradedElement one_form_density(const DensityFn& F, const FieldConfig& cfg,
                               const Payload& V1, int slot_id) {
    EvalEnv env;
    env.base = &cfg;
    const OddWord m1 = marker_gen(0);
    env.slots.push_back({markerize(V1, m1), slot_id});
    GradedElement val = F(env);
    return val.extract_odd(m1);
}

GradedElement delta_one_form_density(const DensityFn& alpha, const FieldConfig& cfg,
                                     const Payload& V1, const Payload& V2) {
    // (delta alpha)(V1, V2): V2 enters the VariationRef slot and V1 the
    // field shift; markers order the extraction.
    EvalEnv env;
    env.base = &cfg;
    const OddWord m1 = marker_gen(0), m2 = marker_gen(1);
    env.slots.push_back({markerize(V1, m1), -7});  // field shift only
    env.slots.push_back({markerize(V2, m2), 1});   // feeds VariationRef
    GradedElement val = alpha(env);
    return val.extract_odd(m2).extract_odd(m1);
}

GradedElement q_derive_density(const DensityFn& F, const QAssignment& Q,
                               const FieldConfig& cfg) {
    EvalEnv env;
    env.base = &cfg;
    Payload images = q_images(Q, cfg);
    const int mi = env.next_fresh_marker--;
    const OddWord m = marker_gen(mi);
    env.slots.push_back({markerize(images, m), 0});
    GradedElement val = F(env);
    return val.extract_odd(m);
}

GradedElement q_vary_eval(const ExprPtr& varied, const QAssignment& Q,
                          const FieldConfig& cfg, int slot_id) {
    Payload images = q_images(Q, cfg);
    return one_form_density(density_of(varied), cfg, images, slot_id);
}

GradedElement q_derive_twice_density(const DensityFn& F, const QAssignment& Q,
                                     const FieldConfig& cfg) {
    EvalEnv env;
    env.base = &cfg;
    // outer shift by Q(cfg)
    Payload outer = q_images(Q, cfg);
    const int mo = env.next_fresh_marker--;
    env.slots.push_back({markerize(outer, marker_gen(mo)), 0});
    // inner shift by Q at the shifted configuration
    Payload inner = q_images(Q, env);
    const int mi = env.next_fresh_marker--;
    env.slots.push_back({markerize(inner, marker_gen(mi)), 0});
    GradedElement val = F(env);
    return val.extract_odd(marker_gen(mi)).extract_odd(marker_gen(mo));
}

GradedElement q_apply_field(const QAssignment& Q, const std::string& field,
                            const FieldConfig& cfg) {
    auto it = Q.elem_images.find(field);
    if (it == Q.elem_images.end()) throw std::invalid_argument("no Q image for " + field);
    return eval(it->second, cfg);
}

GradedElement q_apply_field_twice(const QAssignment& Q, const std::string& field,
                                  const FieldConfig& cfg) {
    return q_derive_twice_density(density_of(field_ref(field)), Q, cfg);
}

VectorField q_apply_vf_twice(const QAssignment& Q, const std::string& field,
                             const FieldConfig& cfg) {
    VectorField out;
    out.comp_parity = 1; // ghost +2 applied twice on an odd field: parity flips twice... computed below
    for (int mu = 0; mu < 4; ++mu) {
        DensityFn F = [&field, mu](EvalEnv& env) {
            return env.vf_value(field).comp[mu];
        };
        out.comp[mu] = q_derive_twice_density(F, Q, cfg);
    }
    out.comp_parity = field_spec_ex(field).ghost & 1; // Q^2 preserves parity
    return out;
}

Payload random_variation(std::mt19937_64& rng, const std::vector<std::string>& elem_fields,
                         const std::vector<std::string>& vf_fields,
                         const RandomFieldOptions& opt) {
    Payload p;
    for (const auto& name : elem_fields) {
        const auto& spec = field_spec_ex(name);
        std::vector<int> ghosts;
        for (int g : {spec.ghost - 1, spec.ghost + 1})
            if (g >= -2 && g <= 2) ghosts.push_back(g);
        std::uniform_int_distribution<std::size_t> pick(0, ghosts.size() - 1);
        int g = ghosts[pick(rng)];
        p.elems[name] =
            random_element(rng, spec.form_degree, spec.internal_degree, g, opt);
    }
    for (const auto& name : vf_fields) {
        // parity-opposite components for the odd ghost vector field:
        // even content (plain polynomials plus theta pairs)
        VectorField v;
        v.comp_parity = 0;
        ParamPoly win = window(opt.support);
        for (int mu = 0; mu < 4; ++mu) {
            GradedElement ghost0 = random_element(rng, 0, 0, 0, opt);
            GradedElement ghost2 = random_element(rng, 0, 0, 2, opt);
            v.comp[mu] = ghost0 + ghost2;
        }
        p.vfs[name] = std::move(v);
    }
    return p;
}

Payload euler_payload(const FieldConfig& cfg, const std::map<std::string, int>& weights) {
    Payload p;
    for (const auto& [name, w] : weights) {
        if (w == 0) continue;
        if (name == "xi") {
            p.vfs["xi"] = cfg.xi.scaled(SuperScalar(make_rational(w)));
        } else if (cfg.vfs.count(name)) {
            p.vfs[name] = cfg.vfs.at(name).scaled(SuperScalar(make_rational(w)));
        } else {
            p.elems[name] = cfg.at(name) * make_rational(w);
        }
    }
    return p;
}

GradedElement contract_even(const DensityFn& alpha, const FieldConfig& cfg,
                            const Payload& V, int slot_id) {
    EvalEnv env;
    env.base = &cfg;
    env.slots.push_back({markerize_even(V, VAR_T0), slot_id});
    GradedElement val = alpha(env);
    return val.extract_even(VAR_T0);
}

} // namespace pchbv
