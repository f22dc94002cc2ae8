#pragma once

#include "linf/exact_linalg.hpp"
#include "linf/linfty.hpp"
#include "linf/symalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linf {

/// Basis element value * d/dx_generator of the derivation space.
struct DerBasisElement {
    std::size_t generator;
    Monomial value;
};

/// Graded pieces of Der(A) (or of the constant-term-free part when
/// `truncated`) for a free algebra A, indexed by derivation degree.
class DerivationSpace {
public:
    DerivationSpace(AlgebraPtr alg, bool truncated);

    AlgebraPtr algebra() const { return alg_; }
    bool truncated() const { return truncated_; }

    const std::vector<DerBasisElement>& basis(int degree) const;
    std::size_t dim(int degree) const { return basis(degree).size(); }
    std::vector<std::string> labels(int degree) const;
    /// Every value of every basis element has weight <= cap for all its monomials.
    bool complete(int degree) const;

    Derivation element(int degree, const Vector& coords) const;
    Derivation basis_element(int degree, std::size_t i) const;
    /// Coordinates of a homogeneous derivation; throws ValidationError if some
    /// term is outside the enumerated basis.
    Vector coordinates(const Derivation& d, int degree) const;

private:
    AlgebraPtr alg_;
    bool truncated_;
    mutable std::map<int, std::vector<DerBasisElement>> cache_;
    mutable std::map<int, std::map<std::pair<std::size_t, Monomial>, std::size_t>> index_;
};

std::string derivation_label(const FreeCommAlgebra& alg, const DerBasisElement& b);

/// Matrix of theta -> [m, theta] from derivation degree k to k + 1.
RationalMatrix ad_matrix(const DerivationSpace& space, const Derivation& m, int k);

/// The derivation complex window over derivation degrees [lo, hi], differential [m, -].
CochainWindow derivation_window(const DerivationSpace& space, const Derivation& m, int lo, int hi);

struct CERow {
    int derivation_degree = 0;
    int ce_degree = 0;  // derivation degree + 1, since C_CE is the desuspension of Der
    std::size_t dim = 0;
    std::size_t chain_dim = 0;
    bool safe = true;
    std::vector<Derivation> representatives;
};

struct BracketValue {
    int left_degree;
    std::size_t left;
    int right_degree;
    std::size_t right;
    int result_degree;
    /// Coordinates of the class of [left, right] in the result row, or
    /// nullopt when the result degree is outside the table or unsafe.
    std::optional<Vector> value;
};

/// Cohomology of a derivation dgla per degree plus brackets of representatives.
struct WhiteheadTable {
    bool truncated = false;
    int weight_cap = 0;
    std::vector<CERow> rows;
    std::vector<BracketValue> brackets;

    const CERow* row(int derivation_degree) const;
    std::vector<int> unsafe_degrees() const;
};

struct CEOptions {
    bool truncated = false;
    bool auto_raise_cap = true;
    int max_auto_cap = 12;
    bool strict = false;  // throw UnsafeWindow instead of flagging
    bool brackets = true;
};

/// Windowed cohomology of C_CE(V,V) (or the truncated complex) over derivation degrees [lo, hi].
WhiteheadTable ce_cohomology(const LInftyStructure& v, int lo, int hi, const CEOptions& opts = {});

/// Weight cap at which every degree needed for [lo, hi] is complete, if finite.
std::optional<int> required_cap(const LInftyStructure& v, int lo, int hi);

/// Gerstenhaber bracket of CE cochains given as derivations (the commutator).
Derivation gerstenhaber_bracket(const Derivation& a, const Derivation& b);
/// d_CE(a) = [m, a].
Derivation ce_differential(const LInftyStructure& v, const Derivation& a);

struct ActionRow {
    std::size_t h1_index;
    int target_degree;
    std::size_t target_index;
    Vector value;  // class of [h, target] in the target row
};

/// Whitehead table of the connected cover Sigma C_CE(V,V)<n> (homological
/// degree j = -derivation degree), plus the bracket action of the degree-0
/// classes (CE degree 1) on it.
struct BautModel {
    WhiteheadTable full;
    int n = 1;
    std::vector<CERow> cover_rows;
    std::vector<ActionRow> action;
};

BautModel baut_model(const LInftyStructure& v, int lo, int hi, int n = 1, const CEOptions& opts = {});

}  // namespace linf
