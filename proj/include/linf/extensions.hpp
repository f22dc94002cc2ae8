#pragma once

#include "linf/ce.hpp"
#include "linf/linfty.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linf {

/// I -> V -> U with V = U (+) I as spaces (U basis first). xi is m_V minus
/// the product structure m_U + m_I, a derivation of V's representing algebra
/// that kills U's generators and has positive U-weight on I's generators.
struct ExtensionData {
    LInftyStructure base;
    LInftyStructure fiber;
    LInftyStructure total;
    Derivation xi;

    bool operator==(const ExtensionData& o) const;
};

/// The same L-infinity algebra written in the basis given by the columns of
/// `basis` (homogeneous, invertible).
LInftyStructure change_basis(const LInftyStructure& v, const std::vector<Vector>& basis,
                             const std::vector<std::string>& names);

bool is_ideal(const LInftyStructure& v, const std::vector<Vector>& ideal);

/// Representing algebra of U (+) I at the given cap, and the embeddings of
/// elements of U's and I's algebras into it.
AlgebraPtr total_algebra(const LInftyStructure& u, const LInftyStructure& i, int weight_cap);
Element embed_base(const Element& e, AlgebraPtr total);
Element embed_fiber(const Element& e, std::size_t base_dim, AlgebraPtr total);
/// m_U + m_I on the total algebra.
Derivation product_differential(const LInftyStructure& u, const LInftyStructure& i, AlgebraPtr total);

/// Total structure m_U + m_I + xi; xi must be MC for the product differential.
ExtensionData extension_from_mc(const LInftyStructure& u, const LInftyStructure& i, const Derivation& xi);

/// Reads off (U, I, xi) for the ideal spanned by `ideal` (U gets a basis of
/// standard vectors complementing it). IdealViolation if it is not an ideal.
ExtensionData mc_from_extension(const LInftyStructure& v, const std::vector<Vector>& ideal,
                                const std::vector<std::string>& ideal_names = {});

/// As extension_from_mc, but xi must also vanish modulo I's generators so
/// that U (+) 0 is a subalgebra. SectionViolation otherwise.
ExtensionData split_extension_from_mc(const LInftyStructure& u, const LInftyStructure& i, const Derivation& xi);
bool has_section(const ExtensionData& e);

/// Pullback along an L-infinity morphism W -> U, given as the map of
/// representing algebras (images of U's generators in W's algebra).
ExtensionData induced_extension(const ExtensionData& e, const LInftyStructure& w, const std::vector<Element>& g_star);
/// Checks that `images` (of U's generators, in W's algebra) define a
/// morphism W -> U: degrees, no constant terms, g* m_U = m_W g*.
void check_morphism(const LInftyStructure& w, const LInftyStructure& u, const std::vector<Element>& images);

/// Action of U on I and the 2-cocycle, for an ungraded Lie U and abelian I.
struct ClassicalComponents {
    /// f1[u] is the matrix of u acting on I (columns = inputs).
    std::vector<RationalMatrix> f1;
    /// f2[{u, v}] for u < v, coordinates in I.
    std::map<std::pair<std::size_t, std::size_t>, Vector> f2;
    bool action_is_lie_map = false;
    bool cocycle = false;
    /// The Lie algebra rebuilt from U, f1 and f2 equals the total.
    bool reconstructs = false;
};
ClassicalComponents classical_components(const ExtensionData& e);

/// Conjugates the extension by exp(eta), eta a degree-0 derivation of the
/// total algebra killing U's generators with positive U-weight on I's.
ExtensionData gauge_transform(const ExtensionData& e, const Derivation& eta);

/// Action of an automorphism phi of I (algebra map of I's representing
/// algebra commuting with m_I) on the MC element.
ExtensionData act_on_fiber(const ExtensionData& e, const AlgebraMap& phi, const AlgebraMap& phi_inverse);
/// Whether `other` equals the image of `e` under one of the automorphisms.
std::optional<std::size_t> free_orbit_index(const ExtensionData& e, const ExtensionData& other,
                                            const std::vector<std::pair<AlgebraMap, AlgebraMap>>& automorphisms);

struct UniversalExtension {
    ExtensionData extension;
    /// Derivation basis of I indexed like the base generators.
    std::vector<Derivation> basis;
    /// Base basis indices whose derivation is the constant d/dx_i.
    std::vector<std::size_t> suspended_fiber;
    bool m1_iso_on_suspension = false;
    /// Homological degree -> dim, for (total, m_1) and for the truncated derivation complex.
    std::map<int, std::size_t> total_homology;
    std::map<int, std::size_t> truncated_homology;
    /// The inclusion of the truncated derivation complex induces an isomorphism
    /// (onto a complement of H(I, m_1) when the base itself is truncated).
    bool quasi_isomorphism = false;
};

/// Extension over the derivation dgla of I (or its truncated part when
/// `truncated`) classified by the identity. Needs the representing algebra
/// of I to be finite-dimensional within the cap.
UniversalExtension universal_extension(const LInftyStructure& i, bool truncated = false);

}  // namespace linf
