#pragma once

#include "linf/errors.hpp"
#include "linf/graded.hpp"
#include "linf/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace linf {

/// Exponent vector in the canonical generator order of its algebra.
using Monomial = std::vector<int>;

/// A sparse element of a FreeCommAlgebra. `truncated` records that some term
/// of weight above the cap was discarded while producing it.
struct Element {
    std::map<Monomial, Q> terms;
    bool truncated = false;

    bool is_zero() const { return terms.empty(); }
    void add(const Monomial& m, const Q& c);
    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element operator+(const Element& o) const { Element r = *this; return r += o; }
    Element operator-(const Element& o) const { Element r = *this; return r -= o; }
    Element operator*(const Q& c) const;
    Element operator-() const { return *this * Q(-1); }
    bool operator==(const Element& o) const { return terms == o.terms; }
};

struct Generator {
    std::string name;
    int degree = 0;
    /// Generators with weighted=false are nilpotent parameters (coefficients
    /// from a base algebra). They do not count towards the weight cap.
    bool weighted = true;
    /// 0 means unbounded; odd generators are always capped at 1.
    int max_exponent = 0;
};

/// Free graded-commutative algebra on finitely many generators, truncated at
/// weight_cap. Immutable once built.
class FreeCommAlgebra {
public:
    FreeCommAlgebra(std::vector<Generator> generators, int weight_cap);

    static std::shared_ptr<const FreeCommAlgebra> build(const GradedSpace& w, int weight_cap);

    std::size_t size() const { return gens_.size(); }
    const Generator& generator(std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }
    int weight_cap() const { return cap_; }
    std::optional<std::size_t> index_of(const std::string& name) const;

    int degree(const Monomial& m) const;
    int weight(const Monomial& m) const;
    int degree_of(const Element& e) const;  // throws DegreeMismatch if inhomogeneous
    bool is_homogeneous(const Element& e, int degree) const;

    Monomial unit() const { return Monomial(gens_.size(), 0); }
    Element one() const;
    Element gen(std::size_t i) const;
    Element gen(const std::string& name) const;
    Element constant(const Q& c) const;

    /// Product of monomials: sign and result, sign 0 if the product vanishes.
    /// `truncated` is set when the product is dropped for exceeding the weight cap.
    int multiply(const Monomial& a, const Monomial& b, Monomial& out, bool& truncated) const;
    Element mul(const Element& a, const Element& b) const;
    Element mul(const Element& a, const Monomial& b) const;
    Element pow(const Element& a, int e) const;

    /// Monomials with weight <= cap (and weight >= min_weight) in one degree.
    std::vector<Monomial> monomials(int degree, int min_weight = 0) const;

    /// Largest weight a monomial of this degree can have (ignoring the cap), or
    /// nullopt when unbounded (some weighted even generator of degree <= 0).
    std::optional<int> max_weight_in_degree(int degree) const;
    bool degree_complete(int degree) const;

    std::string format(const Monomial& m) const;
    std::string format(const Element& e) const;

    bool operator==(const FreeCommAlgebra& o) const;

private:
    std::vector<Generator> gens_;
    int cap_;
};

using AlgebraPtr = std::shared_ptr<const FreeCommAlgebra>;

/// Continuous derivation stored by its values on generators.
struct Derivation {
    AlgebraPtr algebra;
    int degree = 0;
    std::vector<Element> values;

    Derivation() = default;
    Derivation(AlgebraPtr alg, int degree);

    static Derivation from_values(AlgebraPtr alg, int degree, std::vector<Element> values);

    bool has_constant_term() const;
    bool truncated() const;
    bool is_zero() const;
    Element apply(const Monomial& m) const;
    Element apply(const Element& e) const;

    Derivation& operator+=(const Derivation& o);
    Derivation& operator-=(const Derivation& o);
    Derivation operator+(const Derivation& o) const { Derivation r = *this; return r += o; }
    Derivation operator-(const Derivation& o) const { Derivation r = *this; return r -= o; }
    Derivation operator*(const Q& c) const;
    bool operator==(const Derivation& o) const;

    /// Part of each value with exactly this weight (weighted generators only).
    Derivation weight_component(int weight) const;
    std::string format() const;
};

/// [a, b] = a b - (-1)^{|a||b|} b a.
Derivation commutator(const Derivation& a, const Derivation& b);

/// The derivation sending generator i to `value` and every other generator to 0.
Derivation elementary_derivation(AlgebraPtr alg, std::size_t generator, const Monomial& value, const Q& coeff = 1);

/// Algebra morphism between free algebras, determined by generator images.
struct AlgebraMap {
    AlgebraPtr source;
    AlgebraPtr target;
    std::vector<Element> images;

    static AlgebraMap identity(AlgebraPtr alg);
    Element apply(const Monomial& m) const;
    Element apply(const Element& e) const;
    AlgebraMap compose_after(const AlgebraMap& first) const;  // this o first
    /// Checks |images[i]| = |x_i|; throws NotAMorphism otherwise.
    void validate() const;
};

/// phi o theta o psi, a derivation of phi's target, for maps psi: B -> A and
/// phi: A -> B. With psi = phi^{-1} this is conjugation.
Derivation conjugate(const AlgebraMap& phi, const Derivation& theta, const AlgebraMap& psi);

/// exp(theta) = sum theta^k / k! as an algebra map. theta must have degree 0
/// and be locally nilpotent within the caps (checked up to max_terms powers).
AlgebraMap exponential(const Derivation& theta, int max_terms = 64);

std::size_t max_dim_guard();

}  // namespace linf
