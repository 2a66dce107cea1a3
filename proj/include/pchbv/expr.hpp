#pragma once

#include "pchbv/fields.hpp"

#include <memory>
#include <set>

namespace pchbv {

/// Extended spec lookup: registry fields plus the named parameter and
/// boundary fields used by the constraint and BFV layers.
const FieldSpec& field_spec_ex(const std::string& name);
bool has_field_spec_ex(const std::string& name);

// ---------------------------------------------------------------------------
// Expression DAG for local densities.

struct Expr;
struct VFExpr;
using ExprPtr = std::shared_ptr<const Expr>;
using VFExprPtr = std::shared_ptr<const VFExpr>;

enum class VFKind { Ref, VarRef, SelfBracket, Bracket, Scaled };

/// Vector-field-valued expressions (the xi sector).
struct VFExpr {
    VFKind kind;
    std::string name; // Ref / VarRef
    int slot = 0;     // VarRef
    Rational coeff;   // Scaled
    VFExprPtr a, b;

    static VFExprPtr ref(const std::string& n);
    static VFExprPtr var(const std::string& n, int slot);
    static VFExprPtr self_bracket(VFExprPtr x); // [x, x]
    static VFExprPtr bracket(VFExprPtr x, VFExprPtr y);
    static VFExprPtr scaled(VFExprPtr x, Rational c);
    int ghost() const;
    int comp_parity() const;
};

enum class ExprKind {
    FieldRef,     // field name
    VariationRef, // delta(field) in a numbered slot; evaluates with its marker
    Wedge,        // graded product of children
    Sum,
    Scale,        // scale (SuperScalar constant) * child
    ExtD,         // d child
    CovD,         // d child + [conn, child]
    Interior,     // iota_vf child
    Bracket,      // [a, b], a of internal degree 2
    Curvature,    // d conn + 1/2 [conn, conn]
    Trace,        // epsilon-trace of the internal-degree-4 part
    Twist,        // (1 - gamma_inv *) on a Lambda^2 factor
    Derive,       // Q-derivative of the child along an assignment
};

/// Odd vector field on field space given by its images per field.  Fields
/// not listed have zero image.
struct QAssignment {
    std::map<std::string, ExprPtr> elem_images;
    std::map<std::string, VFExprPtr> vf_images;
};

/// Static shape of an expression value; ghost numbers are not tracked
/// here (variation payloads shift them), parity and the exterior degrees
/// are what the rewriting engine needs.
struct ExprShape {
    int form = 0;
    int internal = 0;
    int parity = 0;
};

struct Expr {
    ExprKind kind;
    std::string field; // FieldRef / VariationRef
    int slot = 0;      // VariationRef (negative: any slot)
    SuperScalar scale; // Scale
    std::vector<ExprPtr> children;
    VFExprPtr vf;      // Interior
    ExprPtr conn;      // CovD / Curvature
    std::shared_ptr<const QAssignment> q; // Derive
    ExprShape shape;

    std::string str() const;
};

// Factories (they compute and check shapes).
ExprPtr field_ref(const std::string& name);
ExprPtr variation_ref(const std::string& name, int slot = -1);
ExprPtr wedge(std::vector<ExprPtr> children);
inline ExprPtr wedge(ExprPtr a, ExprPtr b) { return wedge(std::vector<ExprPtr>{std::move(a), std::move(b)}); }
inline ExprPtr wedge(ExprPtr a, ExprPtr b, ExprPtr c) {
    return wedge(std::vector<ExprPtr>{std::move(a), std::move(b), std::move(c)});
}
ExprPtr sum(std::vector<ExprPtr> children);
inline ExprPtr sum(ExprPtr a, ExprPtr b) { return sum(std::vector<ExprPtr>{std::move(a), std::move(b)}); }
ExprPtr scale(Rational c, ExprPtr child);
ExprPtr scale(SuperScalar c, ExprPtr child);
ExprPtr ext_d(ExprPtr child);
ExprPtr cov_d(ExprPtr conn, ExprPtr child);
ExprPtr interior_e(VFExprPtr vf, ExprPtr child);
ExprPtr bracket_e(ExprPtr a, ExprPtr b);
ExprPtr curvature_e(ExprPtr conn);
ExprPtr trace_e(ExprPtr child);
ExprPtr twist_e(ExprPtr child);
/// trace(a ^ twist(b)): the gamma-paired trace of a 2-2 split.
inline ExprPtr trace_pair_e(ExprPtr a, ExprPtr b) {
    return trace_e(wedge(std::move(a), twist_e(std::move(b))));
}

// ---------------------------------------------------------------------------
// Evaluation.

/// A tangent payload: values to shift or vary fields by.  Parity of every
/// entry must be opposite to the field's for odd-marker slots and equal
/// for even-marker slots (checked at attach time).
struct Payload {
    std::map<std::string, GradedElement> elems;
    std::map<std::string, VectorField> vfs;
    bool empty() const { return elems.empty() && vfs.empty(); }
};

/// One variation slot: payload already multiplied by its marker.
struct Slot {
    Payload markerized;
    int slot_id = -1; // matches VariationRef.slot; -1 never matches named slots
};

/// Evaluation environment: base configuration plus active slots.  Slots
/// contribute to FieldRef (shifted evaluation) and to VariationRef.
struct EvalEnv {
    const FieldConfig* base = nullptr;
    std::vector<Slot> slots;
    int next_fresh_marker = kMarkerPoolMax - 1; // internal derivations allocate downward
    // per-environment memo for repeated subtrees (curvatures etc.); any
    // slot change invalidates it
    mutable std::map<const Expr*, GradedElement> cache;
    void invalidate_cache() const { cache.clear(); }

    GradedElement field_value(const std::string& name) const;
    VectorField vf_value(const std::string& name) const;
    GradedElement variation_value(const std::string& name, int slot) const;
    VectorField vf_variation_value(const std::string& name, int slot) const;
};

Payload markerize(const Payload& p, OddWord marker);
Payload markerize_even(const Payload& p, int var);

GradedElement eval(const ExprPtr& e, EvalEnv& env);
VectorField eval_vf(const VFExprPtr& v, EvalEnv& env);
GradedElement eval(const ExprPtr& e, const FieldConfig& cfg);

/// Images of a field-space vector field, evaluated in an environment.
Payload q_images(const QAssignment& Q, EvalEnv& env);
Payload q_images(const QAssignment& Q, const FieldConfig& cfg);

/// Expression-level Q application: evaluates to the Q-derivative of `e`
/// (the Leibniz expansion realized by a marker shift).  Every field
/// referenced by `e` must have an image in Q.
ExprPtr apply_Q(std::shared_ptr<const QAssignment> Q, const ExprPtr& e);

/// The shifted configuration an environment describes (base values plus
/// markerized payloads), and the markerized payload of one slot.
FieldConfig materialize(const EvalEnv& env);
FieldConfig materialize_variation(const EvalEnv& env, int slot_id);

// ---------------------------------------------------------------------------
// Variational differential at the expression level.  With marker-valued
// VariationRef evaluation the chain rule needs no explicit Koszul signs;
// the equivalence with marker-shift differentiation is property-tested.
ExprPtr vary(const ExprPtr& e, int slot);
VFExprPtr vary_vf(const VFExprPtr& v, int slot); // may return nullptr (constant)
std::vector<std::pair<VFExprPtr, Rational>> vary_vf_terms(const VFExprPtr& v, int slot);

/// Fields referenced by an expression.
void collect_fields(const ExprPtr& e, std::set<std::string>& elems,
                    std::set<std::string>& vfs);

} // namespace pchbv
