#pragma once

#include "pchbv/super_scalar.hpp"

#include <array>

namespace pchbv {

/// eta = diag(-1, +1, +1, +1); epsilon_{0123} = +1.  These two choices
/// fix every sign convention downstream and are asserted in tests.
inline constexpr std::array<int, 4> kEta = {-1, 1, 1, 1};

/// Totally antisymmetric symbol on four indices.
int epsilon4(int i, int j, int k, int l);

/// A vector field on the chart: four SuperScalar components together
/// with the declared parity of the components (the parity of xi^mu, not
/// of the operator iota_xi).
struct VectorField {
    std::array<SuperScalar, 4> comp;
    int comp_parity = 1; // ghost-odd fields are the common case

    VectorField() = default;
    VectorField(std::array<SuperScalar, 4> c, int parity);

    bool is_zero() const;
    VectorField operator+(const VectorField& o) const;
    VectorField operator-() const;
    VectorField scaled(const SuperScalar& s) const; // s * comp, s parity-homogeneous
    bool operator==(const VectorField& o) const { return comp == o.comp && true; }
};

using OddVectorField = VectorField;

/// de Rham differential: odd derivation, d(c * w) = dx^mu (d_mu c) w.
GradedElement exterior_d(const GradedElement& a);

/// Interior product with a vector field.  For ghost-odd components this
/// is an even derivation (iota dx^mu = V^mu, kills x, u, theta); for
/// even components it is an odd derivation.  The operator parity is
/// 1 + comp_parity mod 2 and the Koszul signs follow from it.
GradedElement interior(const VectorField& V, const GradedElement& a);

/// Graded bracket of vector fields:
/// [A,B]^mu = A^nu d_nu B^mu - (-1)^{|A||B|} B^nu d_nu A^mu.
VectorField vf_bracket(const VectorField& A, const VectorField& B);

/// [xi,xi] for odd xi; components 2 xi^nu d_nu xi^mu, even, ghost 2.
VectorField odd_bracket_vf(const OddVectorField& xi);

/// so(3,1)-action through the identification with Lambda^2 V:
/// rho(u_i u_j) u_k = eta_{jk} u_i - eta_{ik} u_j, extended as a graded
/// derivation in the internal factor.  alpha must have internal degree 2
/// (every term carries exactly two u letters); throws otherwise.
GradedElement so_bracket(const GradedElement& alpha, const GradedElement& phi);

/// d_omega = d + [omega, .]
GradedElement covariant_d(const GradedElement& omega, const GradedElement& phi);

/// F_omega = d omega + 1/2 [omega, omega]
GradedElement curvature(const GradedElement& omega);

/// Covariant Lie derivative as the graded commutator [iota_V, d_omega]:
/// iota d_omega - (-1)^{|iota_V|} d_omega iota.  For ghost-odd V the
/// contraction is even and this is iota d - d iota.
GradedElement covariant_lie(const VectorField& V, const GradedElement& omega,
                            const GradedElement& phi);
/// Plain (flat) Lie derivative [iota_V, d].
GradedElement lie_derivative(const VectorField& V, const GradedElement& phi);

/// Hodge star on the Lambda^2 V content: *(u_i u_j) = the complementary
/// pair weighted by epsilon and inverse-eta factors; ** = -1 for
/// signature (3,1).  Requires internal degree 2.
GradedElement star2(const GradedElement& a);

/// (1 - gamma_inv * star2): the Holst deformation of one Lambda^2 factor.
/// trace_eps(A ^ holst_twist(B)) realizes the gamma-deformed pairing of
/// internal 2-2 products; pairings that admit no 2-2 split carry no
/// gamma dependence.
GradedElement holst_twist(const GradedElement& a);

/// epsilon-functional on the internal-degree-4 part: keeps terms whose
/// u-content is u0 u1 u2 u3, strips the u letters, discards the rest.
GradedElement trace_eps(const GradedElement& a);

/// The trace functional on internal-degree-4 elements.  On the canonical
/// basis this evaluates through epsilon alone (the eta-antisymmetrized
/// part of the pairing vanishes on strictly sorted words for diagonal
/// eta); the gamma-dependent sector of the theory enters through
/// holst_twist placed on one factor of each 2-2 product.
inline GradedElement holst_trace(const GradedElement& a) { return trace_eps(a); }

/// Convenience: the gamma-paired trace of a 2-2 product.
inline GradedElement trace_pair(const GradedElement& a, const GradedElement& b) {
    return trace_eps(a * holst_twist(b));
}

} // namespace pchbv
