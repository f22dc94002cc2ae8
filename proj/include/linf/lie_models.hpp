#pragma once

#include "linf/ce.hpp"
#include "linf/exact_linalg.hpp"
#include "linf/graded.hpp"
#include "linf/linfty.hpp"
#include "linf/nilpotent_base.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linf {

using Word = std::vector<std::size_t>;

/// Element of the tensor algebra T(V); free Lie algebras live inside it.
using TensorPoly = std::map<Word, Q>;

void add_into(TensorPoly& into, const TensorPoly& p, const Q& c = 1);
TensorPoly length_component(const TensorPoly& p, std::size_t length);
std::size_t max_length(const TensorPoly& p);

/// Free graded Lie algebra on named generators (homological degrees).
class FreeLie {
public:
    FreeLie() = default;
    explicit FreeLie(std::vector<BasisElement> generators);

    std::size_t generators() const { return gens_.size(); }
    const BasisElement& generator(std::size_t i) const { return gens_[i]; }
    std::optional<std::size_t> index_of(const std::string& name) const;

    int degree(const Word& w) const;
    TensorPoly gen(std::size_t i) const;
    /// [a, b] = ab - (-1)^{|a||b|} ba for homogeneous a, b.
    TensorPoly bracket(const TensorPoly& a, const TensorPoly& b) const;

    /// Lyndon words of the given length, in lexicographic order.
    std::vector<Word> lyndon_words(std::size_t length) const;
    /// Standard bracketing of a Lyndon word.
    TensorPoly standard_bracketing(const Word& w) const;

    struct BasisElementImage {
        std::string label;
        int degree;
        TensorPoly image;
    };
    /// Lyndon brackets of the given length plus the squares [b(u), b(u)] of odd
    /// Lyndon brackets of half the length.
    std::vector<BasisElementImage> basis(std::size_t length) const;

    /// Extends values on generators to a derivation of degree `degree`
    /// (homological) and applies it.
    TensorPoly apply_derivation(const std::vector<TensorPoly>& values, int degree, const TensorPoly& p) const;

    /// Parses sums like "[p,q] - 2*[p,[p,q]]" or "1/2*[x,x]".
    TensorPoly parse(const std::string& text) const;
    std::string format(const TensorPoly& p) const;

private:
    std::vector<BasisElement> gens_;
};

/// Finite dimensional dg Lie algebra (homological degrees, |d| = -1).
/// If it comes from a presentation, `presentation` records it.
struct GradedLie {
    struct Presentation {
        FreeLie free;
        std::vector<TensorPoly> relations;
        std::vector<TensorPoly> differential;  // values of d on generators
        std::size_t length_cap = 0;
        std::optional<int> degree_cap;
        std::vector<TensorPoly> basis_images;
        std::vector<std::size_t> basis_lengths;
        /// True when nothing survives in length cap + 1, so the presented
        /// algebra is finite and the truncation is exact.
        bool exact = false;
        // Per length l (index l): words of length l and the map from word
        // coordinates of a Lie element to quotient coordinates.
        std::vector<std::map<Word, std::size_t>> word_index;
        std::vector<RationalMatrix> reducer;
        std::vector<std::size_t> offset;
    };

    std::vector<BasisElement> basis;
    std::vector<std::vector<Vector>> brackets;  // brackets[i][j] = [b_i, b_j]
    std::vector<Vector> differential;
    std::optional<Presentation> presentation;

    std::size_t dim() const { return basis.size(); }
    int degree(std::size_t i) const { return basis[i].degree; }
    Vector bracket(const Vector& a, const Vector& b) const;
    Vector apply_d(const Vector& a) const;
    /// Coordinates of a tensor polynomial that is a Lie element of the
    /// presented algebra; terms above the length cap are dropped.
    Vector reduce(const TensorPoly& p) const;

    /// Antisymmetry, Jacobi, d^2 = 0 and Leibniz; throws ValidationError.
    void validate() const;
    /// Whether the truncation keeps every element of the untruncated
    /// presented algebra in this homological degree.
    bool complete_in_degree(int degree) const;

    LInftyStructure to_linfty(int weight_cap) const;
};

GradedLie presented_dgla(const FreeLie& free, const std::vector<TensorPoly>& relations,
                         const std::vector<TensorPoly>& differential, std::size_t length_cap);
/// Degree-capped version: needs generator degrees that are nonzero and of one
/// sign (InfinitePerDegree otherwise).
GradedLie presented_dgla_degree_cap(const FreeLie& free, const std::vector<TensorPoly>& relations,
                                    const std::vector<TensorPoly>& differential, int degree_cap);
GradedLie free_lie(const std::vector<BasisElement>& generators, std::size_t length_cap);
GradedLie abelian_lie(const std::vector<BasisElement>& generators);

/// Quillen model L(A): free on s_r with |s_r| = |a_r| - 1 (homological), and
/// d fixed by requiring sum a_r (x) s_r to be Maurer-Cartan in A (x) L(A).
GradedLie quillen_model(const NilpotentBase& a, std::size_t length_cap);

/// Derivations of g of cohomological degree k (maps g_i -> g_{i-k}), as
/// matrices on the basis of g.
std::vector<RationalMatrix> lie_derivations(const GradedLie& g, int k);

/// Der(g) with differential [d, -] over cohomological degrees [lo, hi].
CochainWindow lie_derivation_window(const GradedLie& g, int lo, int hi);

/// g<tau>: tau adjoined freely with |tau| = -1 (homological),
/// d(x) = dx + [tau, x] on g and d(tau) = 1/2 [tau, tau].
struct TauExtension {
    FreeLie free;  // generators of g followed by tau
    std::vector<TensorPoly> relations;
    std::vector<TensorPoly> differential;
    std::size_t tau = 0;
    std::size_t length_cap = 0;  // cap on the length in the generators of g
    bool square_zero = false;    // d^2 vanishes on all generators
    bool well_defined = false;   // d maps relations into the ideal
};

TauExtension adjoin_tau(const GradedLie& g);

/// Der_tau(g<tau>) in degree k: derivations with values in g on all
/// generators. Coordinates: the matrix of theta on g (column-major,
/// dim x dim) followed by theta(tau) in g.
struct TauDerivations {
    std::vector<RationalMatrix> der_part;
    std::vector<Vector> tau_part;
};
TauDerivations tau_derivations(const GradedLie& g, int k);

/// Der_tau as a complex, built as Der(g) + g with
/// delta(D, y) = ([d, D] - (-1)^k ad_y, dy).
CochainWindow tau_derivation_window(const GradedLie& g, int lo, int hi);

/// Checks on the presented g<tau>: brackets and differentials of Der_tau
/// computed as derivations agree with the semidirect formulas.
struct SemidirectCheck {
    bool brackets_match = true;
    bool differential_matches = true;
    std::size_t pairs_checked = 0;
};
SemidirectCheck check_semidirect(const GradedLie& g, int lo, int hi);

struct HarrisonTable {
    int lo = 0, hi = 0;
    std::map<int, std::size_t> truncated;  // H of Der(L(A)) by derivation degree
    std::map<int, std::size_t> full;       // H of Der_tau(L(A)<tau>)
    std::map<int, std::size_t> lie_homology;  // H of L(A), by cohomological degree
    std::vector<int> unsafe;
    /// dims of full agree with the long exact sequence of
    /// 0 -> Der -> Der_tau -> g[shift] -> 0 and its connecting map.
    bool les_consistent = true;
};

HarrisonTable harrison_cohomology(const GradedLie& l, int lo, int hi);
HarrisonTable harrison_cohomology(const NilpotentBase& a, int lo, int hi, std::size_t length_cap);

/// L(M) = free Lie on p_1, q_1, ..., p_N, q_N (degree n - 1) modulo
/// w = [p_1,q_1] + ... + [p_N,q_N], for n odd.
GradedLie wedge_model(std::size_t pairs, int n, int degree_cap);

/// Windowed CE cohomology of L(M) with itself, resolved by arity (the weight
/// of the coefficient monomial). All generators of the representing algebra
/// have degree n, so a cochain of derivation degree k has arity (k + n) / n.
struct WedgeReport {
    GradedLie model;
    WhiteheadTable table;
    std::map<int, std::size_t> dims;      // by derivation degree, safe rows only
    std::map<int, std::size_t> by_arity;  // summed over safe rows
    std::vector<int> unsafe;
    bool vanishes_above_two = true;
    std::optional<int> arity_two_degree;  // homological degree -k of the arity-2 part
    std::size_t arity_two_dim = 0;
};

WedgeReport wedge_cohomology(std::size_t pairs, int n, int degree_cap, int lo, int hi);

}  // namespace linf
