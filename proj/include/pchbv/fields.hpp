#pragma once

#include "pchbv/exterior.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>

namespace pchbv {

/// Declared shape of a field on the chart.
struct FieldSpec {
    std::string name;
    int form_degree = 0;
    int internal_degree = 0;
    int ghost = 0;
    bool is_vector_field = false;  // xi
    bool nondegenerate = false;    // e
    int total_degree() const { return form_degree + internal_degree + ghost; }
    int parity() const {
        if (is_vector_field) return ghost & 1;
        return (form_degree + internal_degree + ghost) & 1;
    }
};

/// The PCH field content.  xi_dag = chi (x) vol is stored through its two
/// factors: chi a ghost -2 one-form and vol a top form.
const std::vector<FieldSpec>& field_registry();
const FieldSpec& field_spec(const std::string& name);
bool is_antifield(const std::string& name);

/// Box chart [0,1]^4 with boundary face x3 = 0; axes 0,1,2 tangential.
struct Chart {
    static constexpr int normal_axis = 3;
};

enum class Support { none, compact, free_boundary };

/// Window that vanishes to second order on all box faces.
ParamPoly window_compact();
/// Window vanishing to second order on every face except x3 = 0.
ParamPoly window_free_boundary();
ParamPoly window(Support s);

/// The standard flat coframe e = sum_mu dx^mu u_mu.
GradedElement reference_tetrad();

/// Ascending dx words of length p / u words of length k.
std::vector<OddWord> form_words(int p);
std::vector<OddWord> internal_words(int k);

/// A value is either a graded element or (for xi) a vector field.
struct FieldValue {
    GradedElement elem;
    std::optional<VectorField> vf;
    bool is_vf() const { return vf.has_value(); }
};

struct FieldConfig {
    std::map<std::string, GradedElement> elems;
    VectorField xi;
    std::map<std::string, VectorField> vfs; // named auxiliary vector fields
    std::uint64_t seed = 0;
    int degree_bound = 1;
    int theta_pool = 8;
    Support support = Support::compact;

    const GradedElement& at(const std::string& name) const;
    GradedElement& at(const std::string& name);
    /// xi_dag contraction helper: <V, xi_dag> = iota_V(chi) * vol.
    GradedElement xi_dag_pairing(const VectorField& V) const;
};

struct RandomFieldOptions {
    int degree_bound = 1;
    int theta_pool = 8;
    Support support = Support::compact;
    long coeff_num = 2;  // numerators in [-2, 2]
    long coeff_den = 2;  // denominators in [1, 2]
    int odd_terms = 2;   // theta/thetabar letters drawn per component
};

/// Random homogeneous element of tri-degree (p, k, g).  Ghost content is
/// realized with theta letters (g > 0) or thetabar letters (g < 0) from
/// the pool; coefficients are random polynomials in x of bounded degree,
/// multiplied by the support window.
GradedElement random_element(std::mt19937_64& rng, int p, int k, int g,
                             const RandomFieldOptions& opt);
VectorField random_odd_vf(std::mt19937_64& rng, const RandomFieldOptions& opt,
                          bool tangent_at_boundary = false);

/// Full random configuration.  e is reference + window * perturbation and
/// is re-verified nondegenerate on the sample grid (retrying with a
/// smaller perturbation if needed); all other fields carry the window.
FieldConfig random_config(std::uint64_t seed, const RandomFieldOptions& opt,
                          bool boundary_preserving = false);

/// 16-point rational sample grid used for nondegeneracy checks.
std::vector<std::array<Rational, 4>> sample_grid();
/// Determinant of the e-component matrix at a point.
Rational tetrad_determinant(const GradedElement& e, const std::array<Rational, 4>& pt);
bool tetrad_nondegenerate(const GradedElement& e);

/// Exact integral over the box (bulk: 4-form over [0,1]^4) or over the
/// boundary face x3 = 0 (3-form in dx0 dx1 dx2).  The density must have
/// internal degree 0 and the right form degree; offending components are
/// named in the error.
SuperScalar integrate_box(const GradedElement& density);
SuperScalar integrate_boundary(const GradedElement& density);

/// a|_{x3=0} split as tangential + dx3 ^ normal.
struct BoundarySplit {
    GradedElement tangential;
    GradedElement normal;
};
BoundarySplit boundary_split(const GradedElement& a);

/// Restriction of a full configuration to the boundary face.
struct BoundaryRestriction {
    std::map<std::string, BoundarySplit> fields; // all element-valued fields
    std::array<SuperScalar, 3> xi_tangent;       // xi^a at x3 = 0
    SuperScalar xi_normal;                       // xi^n
    std::array<SuperScalar, 3> chi_tangent;      // chi_a
    SuperScalar chi_normal;                      // chi_n
    SuperScalar vol_boundary;                    // v^del: dx3-coefficient of vol
    VectorField xi_tangent_vf() const;
};
BoundaryRestriction boundary_restrict(const FieldConfig& cfg);

/// Canonical JSON round-trip for reproducibility artifacts.
std::string config_to_json(const FieldConfig& cfg);
FieldConfig config_from_json(const std::string& json_text);

} // namespace pchbv
