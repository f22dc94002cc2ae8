#pragma once

#include "linf/ce.hpp"
#include "linf/exact_linalg.hpp"
#include "linf/linfty.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace linf {

/// Element of (representing algebra of V) (x) U: coefficient of p (x) u_k.
using TensorKey = std::pair<Monomial, std::size_t>;
using TensorElement = std::map<TensorKey, Q>;

void add_term(TensorElement& t, const TensorKey& k, const Q& c);
TensorElement scaled(const TensorElement& t, const Q& c);
TensorElement sum(const TensorElement& a, const TensorElement& b);

/// The dgla A_V (x) U for a dgla U (brackets of arity <= 2), optionally
/// twisted by an MC element f:
///   [p a, q b] = (-1)^{|a||q|} pq [a,b],  d(p a) = m(p) a + (-1)^{|p|} p da,
///   d^f = d + [f, -].
/// Degrees are homological: |p (x) u| = |u| - |p|.
class CoefficientComplex {
public:
    CoefficientComplex(LInftyStructure v, LInftyStructure u, bool truncated = false);

    /// sum_i x_i (x) e_i, the MC element of the identity morphism (needs U = V).
    TensorElement identity_element() const;
    /// Installs f after checking d f + 1/2 [f,f] = 0. Throws NotMaurerCartan.
    void twist(const TensorElement& f);
    const TensorElement& twisting() const { return f_; }

    const LInftyStructure& source() const { return v_; }
    const LInftyStructure& coefficients() const { return u_; }
    int degree(const TensorKey& k) const;

    TensorElement untwisted_d(const TensorElement& x) const;
    TensorElement d(const TensorElement& x) const;
    TensorElement bracket(const TensorElement& x, const TensorElement& y) const;
    TensorElement mc_residual(const TensorElement& f) const;

    const std::vector<TensorKey>& basis(int hom_degree) const;
    Vector coordinates(const TensorElement& x, int hom_degree) const;
    TensorElement element(int hom_degree, const Vector& coords) const;
    /// Window over cohomological degrees c = -hom_degree in [lo, hi].
    CochainWindow window(int lo, int hi) const;
    /// Whether all terms of the given homological degree fit under the weight cap.
    bool complete(int hom_degree) const;

    std::string format(const TensorElement& x) const;

private:
    LInftyStructure v_, u_;
    bool truncated_;
    TensorElement f_;
    mutable std::map<int, std::vector<TensorKey>> cache_;
};

/// p (x) e_i  <->  p d/dx_i for U = V.
Derivation tensor_to_derivation(const CoefficientComplex& c, const TensorElement& x, int derivation_degree);
TensorElement derivation_to_tensor(const Derivation& d);

/// Alternating cochain Lambda^n g -> g of an ungraded Lie algebra, stored on
/// sorted index tuples.
struct LieCochain {
    std::size_t arity = 0;
    std::map<std::vector<std::size_t>, Vector> values;

    Vector evaluate(const std::vector<std::size_t>& args, std::size_t dim) const;
    static LieCochain identity(std::size_t dim);
    static LieCochain bracket_cochain(const LieAlgebra& g);
};

/// [g u h](v_1..v_{n+m}) = 1/(n+m)! sum_sigma sgn(sigma) [g(v_sigma...), h(v_sigma...)].
LieCochain cup_bracket(const LieAlgebra& g, const LieCochain& a, const LieCochain& b);
/// Fast-path entry for L-infinity inputs: throws AritySupport unless V is an
/// ungraded Lie algebra.
LieAlgebra require_ungraded_lie(const LInftyStructure& v);

/// E(g) = sum_I n! g(v_I) x_I (x) -, the identification with the tensor side.
TensorElement cochain_to_tensor(const LieCochain& g, std::size_t dim);
LieCochain tensor_to_cochain(const TensorElement& t, std::size_t arity, std::size_t dim);

struct InducedBracketTable {
    std::map<int, std::size_t> dims;  // cohomological degree -> dim H
    struct Entry {
        int left_degree;
        std::size_t left;
        int right_degree;
        std::size_t right;
        Vector value;  // class in H^{left+right}
    };
    std::vector<Entry> entries;
    std::vector<int> unsafe;
    bool all_zero() const;
};

/// Cup brackets of cohomology representatives of (A_V (x) V)^{id}, reduced
/// modulo coboundaries, over cohomological degrees [lo, hi].
InducedBracketTable induced_cohomology_bracket(const LInftyStructure& v, int lo, int hi, bool truncated = false);

}  // namespace linf
