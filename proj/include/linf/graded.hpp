#pragma once

#include "linf/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace linf {

enum class Grading { homological, cohomological };

struct BasisElement {
    std::string name;
    int degree = 0;
    bool operator==(const BasisElement&) const = default;
};

/// Finite graded space with a named basis. Degrees are stored in the space's
/// own grading mode; cohomological_degree() converts with V_i = V^{-i}.
class GradedSpace {
public:
    GradedSpace() = default;
    GradedSpace(std::vector<BasisElement> basis, Grading mode);

    Grading mode() const { return mode_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const BasisElement& operator[](std::size_t i) const { return basis_[i]; }

    std::optional<std::size_t> index_of(const std::string& name) const;
    int degree_of(const std::string& name) const;
    int cohomological_degree(std::size_t i) const;

    GradedSpace converted(Grading target) const;
    bool operator==(const GradedSpace&) const = default;

private:
    std::vector<BasisElement> basis_;
    Grading mode_ = Grading::cohomological;
};

/// Sign of reordering a word: the output word is w[perm[0]], w[perm[1]], ...
/// Each crossing of symbols of degrees p and q contributes (-1)^{pq}.
int koszul_sign(const std::vector<std::size_t>& perm, const std::vector<int>& degrees);

/// Sign of a permutation ignoring degrees.
int permutation_sign(const std::vector<std::size_t>& perm);

std::string suspend_name(const std::string& name, int k);
std::string dual_name(const std::string& name);

/// Sigma^k: homological degrees go up by k, cohomological degrees down by k.
GradedSpace suspend(const GradedSpace& v, int k);

/// V*, with the opposite grading mode and (V*)^i = (V_i)*.
GradedSpace dual(const GradedSpace& v);

struct SignedTerm {
    Q coefficient;
    std::vector<std::string> word;
};

/// Sorts a word into basis order as a graded-commutative product, returning
/// the Koszul sign (0 if an odd symbol repeats).
int normalize_commutative(std::vector<std::size_t>& word, const std::vector<int>& degrees);

}  // namespace linf
