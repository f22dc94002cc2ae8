#pragma once

#include "linf/exact_linalg.hpp"
#include "linf/graded.hpp"
#include "linf/symalg.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linf {

/// One bracket value l_n(e_{i1}, ..., e_{in}) = sum c_k e_k on V (homological
/// degrees, l_n of degree n - 2, graded antisymmetric).
struct BracketEntry {
    std::vector<std::size_t> inputs;
    std::vector<std::pair<std::size_t, Q>> output;
};

struct LinftyReport {
    bool ok = true;
    std::optional<int> first_failing_weight;
    std::string residual;
};

/// An L-infinity algebra on V, stored as the degree +1 derivation m of the
/// representing algebra on generators x_i = (s^-1 e_i)^*, |x_i| = |e_i| + 1
/// for homological |e_i|.
class LInftyStructure {
public:
    LInftyStructure() = default;

    /// V in either grading mode; internal work is homological for V and
    /// cohomological for the algebra.
    static LInftyStructure from_brackets(const GradedSpace& v, const std::vector<BracketEntry>& entries, int weight_cap);
    static LInftyStructure from_derivation(const GradedSpace& v, Derivation m);
    static AlgebraPtr representing_algebra(const GradedSpace& v, int weight_cap);

    const GradedSpace& space() const { return space_; }
    AlgebraPtr algebra() const { return m_.algebra; }
    const Derivation& m() const { return m_; }
    std::size_t dim() const { return space_.dim(); }
    int weight_cap() const { return m_.algebra->weight_cap(); }
    /// Homological degree of e_i.
    int degree(std::size_t i) const { return space_[i].degree; }

    /// Sorted-input bracket table reproducing m exactly.
    std::vector<BracketEntry> to_brackets() const;

    /// l_n on basis elements, for any order of inputs.
    Vector bracket(const std::vector<std::size_t>& inputs) const;

    /// m_1 as a matrix on V (columns = inputs).
    RationalMatrix differential() const;
    bool is_minimal() const;

    LInftyStructure with_cap(int weight_cap) const;
    bool operator==(const LInftyStructure& o) const;

private:
    GradedSpace space_;
    Derivation m_;
};

/// Image of the unit bracket entry on the sorted tuple `inputs`: the element
/// E with m(x_k) += c * E when l(e_inputs) has coefficient c on e_k.
Element bracket_image(const FreeCommAlgebra& alg, const std::vector<int>& v_degrees, const std::vector<std::size_t>& inputs);

/// [m, m] = 0 up to the weight cap.
LinftyReport check_linfty(const Derivation& m);
inline LinftyReport check_linfty(const LInftyStructure& v) { return check_linfty(v.m()); }

/// MC in the dgla (Der, [m,-], commutator): [m, xi] + 1/2 [xi, xi] = 0.
Derivation mc_residual(const Derivation& m, const Derivation& xi);
bool is_mc(const Derivation& m, const Derivation& xi);
/// The twisted differential d^xi = [m + xi, -]; returned as m + xi.
Derivation twist(const Derivation& m, const Derivation& xi);

/// x_i -> x_i + shift_i, shifts of degree |x_i| (typically built from
/// nilpotent parameter generators).
AlgebraMap translation(AlgebraPtr alg, const std::vector<Element>& shifts);
/// m twisted at the point xi: T m T^{-1} for the translation T by xi.
Derivation twist_at_point(const Derivation& m, const std::vector<Element>& xi);
/// L-infinity MC: the twisted m has no weight-0 term.
bool is_mc_point(const Derivation& m, const std::vector<Element>& xi);

/// Homology of (V, m_1): homological degree -> dim.
std::map<int, std::size_t> tangent_cohomology(const LInftyStructure& v);

/// Restriction to the subspace spanned by `vectors` (coordinates in V's
/// basis), which must be closed under all brackets. Throws NotASubspace.
LInftyStructure restrict_structure(const LInftyStructure& v, const std::vector<Vector>& vectors,
                                   const std::vector<std::string>& names);

/// n-connected cover: degrees > n, plus ker m_1 in degree n.
LInftyStructure connected_cover(const LInftyStructure& v, int n);

/// Ungraded Lie algebra by structure constants, used for classical
/// cross-checks. bracket_[i][j] holds the coordinates of [e_i, e_j].
class LieAlgebra {
public:
    LieAlgebra(std::vector<std::string> names, const std::vector<BracketEntry>& entries);

    std::size_t dim() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const Vector& bracket(std::size_t i, std::size_t j) const { return table_[i][j]; }
    Vector bracket(const Vector& a, const Vector& b) const;

    /// First basis triple with nonzero Jacobiator.
    std::optional<std::array<std::size_t, 3>> jacobi_violation() const;
    LInftyStructure to_linfty(int weight_cap) const;
    GradedSpace space() const;
    std::vector<BracketEntry> entries() const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<Vector>> table_;
};

}  // namespace linf
