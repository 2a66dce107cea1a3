#pragma once

#include "pchbv/variation.hpp"

namespace pchbv {

/// Covariant Lie derivative as an expression: [iota_vf, d_conn] with the
/// graded-commutator sign fixed by the contraction's operator parity.
ExprPtr cov_lie_e(VFExprPtr vf, ExprPtr conn, ExprPtr child);
/// Plain Lie derivative [iota_vf, d].
ExprPtr lie_e(VFExprPtr vf, ExprPtr child);

/// The tetrad-gravity BV package on the bulk chart.
struct PCHTheory {
    ExprPtr S0_density;   // 1/2 T[e e F] + Lambda/4 T[e^4]
    ExprPtr S_density;    // minimal BV extension
    std::shared_ptr<const QAssignment> Q; // images of (omega, e, c, xi)
    ExprPtr Omega_density; // (-1)-symplectic form density (2 variation slots)
};
const PCHTheory& pch_theory();

/// Pairing sign table of the minimal extension: S = S0 + sum_phi
/// sign(phi) T[Q(phi) ^ phi_dag]; the xi sector pairs through chi (x) vol.
ExprPtr build_bv_action(const ExprPtr& S0, const std::shared_ptr<const QAssignment>& Q,
                        const std::map<std::string, Rational>& signs);

/// The non-covariant cohomological package on the primed chart.
struct PiguetTheory {
    ExprPtr S_density;
    std::shared_ptr<const QAssignment> s; // images of (eP, omegaP, thetaP, xiP)
    ExprPtr Omega_density;
};
const PiguetTheory& piguet_theory();

/// The chart map between the two BV packages (target fields primed):
/// e'=e, omega'=omega, xi'=xi, theta'=iota_xi omega - c, e_dag'=e_dag,
/// omega_dag'=omega_dag - iota_xi c_dag, xi_dag'=xi_dag, theta_dag'=-c_dag.
/// Works on marker-shifted configurations, so pushforwards of variations
/// come out of the same map.
FieldConfig phi_G_apply(const FieldConfig& cfg);
Payload phi_G_pushforward(const FieldConfig& cfg, const Payload& V);

/// Names of the primed fields (for variation generation).
std::vector<std::string> piguet_elem_fields();

} // namespace pchbv
