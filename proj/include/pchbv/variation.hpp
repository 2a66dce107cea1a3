#pragma once

#include "pchbv/expr.hpp"

namespace pchbv {

/// Coefficient of the slot marker in F evaluated on the shifted config:
/// the directional derivative of the density functional F along the
/// payload.  F is any callable FieldConfig-like env -> GradedElement.
using DensityFn = std::function<GradedElement(EvalEnv&)>;

DensityFn density_of(const ExprPtr& e);

/// delta F (V): attach V as an odd slot with a fresh marker, evaluate,
/// extract.  slot_id tags VariationRef nodes that should pick V up.
GradedElement vary_density(const DensityFn& F, const FieldConfig& cfg,
                           const Payload& V, int slot_id = 1);

/// Two-slot evaluation of a density containing VariationRef nodes (a
/// field-space 2-form): slot 1 and slot 2 get odd markers; extraction
/// order is marker 2 then marker 1.
GradedElement two_form_density(const DensityFn& F, const FieldConfig& cfg,
                               const Payload& V1, const Payload& V2);

/// One-slot evaluation of a density containing VariationRef nodes (a
/// field-space 1-form).
GradedElement one_form_density(const DensityFn& F, const FieldConfig& cfg,
                               const Payload& V1, int slot_id = 1);

/// Field-space exterior derivative of a 1-form density, evaluated on two
/// constant directions: markers realize (delta alpha)(V1, V2).
GradedElement delta_one_form_density(const DensityFn& alpha, const FieldConfig& cfg,
                                     const Payload& V1, const Payload& V2);

/// Q-derivative of a density: coefficient of the fresh marker in
/// F(cfg + eps Q(cfg)).
GradedElement q_derive_density(const DensityFn& F, const QAssignment& Q,
                               const FieldConfig& cfg);

/// Same derivative through the varied expression: only terms linear in
/// the payload are ever formed, which is much cheaper on windowed
/// configurations.  `varied` must be vary(density, slot).
GradedElement q_vary_eval(const ExprPtr& varied, const QAssignment& Q,
                          const FieldConfig& cfg, int slot_id = 1);

/// Q(Q(F)) through composed marker shifts (inner marker extracted first).
GradedElement q_derive_twice_density(const DensityFn& F, const QAssignment& Q,
                                     const FieldConfig& cfg);

/// Q applied to a single field value: Q(phi) evaluated at cfg, and the
/// second application Q(Q(phi)) for nilpotency checks.
GradedElement q_apply_field(const QAssignment& Q, const std::string& field,
                            const FieldConfig& cfg);
GradedElement q_apply_field_twice(const QAssignment& Q, const std::string& field,
                                  const FieldConfig& cfg);
VectorField q_apply_vf_twice(const QAssignment& Q, const std::string& field,
                             const FieldConfig& cfg);

/// Random parity-opposite variation payload for the given fields.
Payload random_variation(std::mt19937_64& rng, const std::vector<std::string>& elem_fields,
                         const std::vector<std::string>& vf_fields,
                         const RandomFieldOptions& opt);

/// Payload consisting of the configuration's own values scaled by ghost
/// number (the graded Euler vector field); used with even markers.
Payload euler_payload(const FieldConfig& cfg, const std::map<std::string, int>& weights);

/// Contraction of a 1-form density (VariationRef-bearing) with an even
/// vector field given by a payload: uses an even marker variable.
GradedElement contract_even(const DensityFn& alpha, const FieldConfig& cfg,
                            const Payload& V, int slot_id = 1);

} // namespace pchbv
