#pragma once

#include "linf/exact_linalg.hpp"

#include <string>
#include <vector>

namespace linf {

/// Finite-dimensional graded-commutative algebra without unit, nilpotent,
/// with optional differential. Degrees are cohomological.
class NilpotentBase {
public:
    struct Product {
        std::size_t left, right;
        std::vector<std::pair<std::size_t, Q>> output;
    };

    /// Products not listed are zero; the symmetric partner of each listed
    /// product is filled in by graded commutativity. Validates everything.
    NilpotentBase(std::vector<std::string> names, std::vector<int> degrees, const std::vector<Product>& products,
                  std::vector<Vector> differential = {});

    /// t, t^2, ..., t^k with t^{k+1} = 0, |t| = degree (even).
    static NilpotentBase truncated_polynomial(int k, int degree = 0, const std::string& var = "t");

    std::size_t dim() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    int degree(std::size_t i) const { return degrees_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    const Vector& product(std::size_t i, std::size_t j) const { return table_[i][j]; }
    const Vector& differential(std::size_t i) const { return d_[i]; }
    bool has_differential() const;
    bool infinitesimal() const;
    /// Smallest N such that every N-fold product vanishes.
    int nilpotency_order() const { return order_; }

    Vector multiply(const Vector& a, const Vector& b) const;
    Vector apply_d(const Vector& a) const;

    /// Basis indices spanning the ideal A^k (requires the basis to be adapted
    /// to the power filtration, which holds for monomial bases).
    std::vector<std::size_t> power_ideal(int k) const;
    /// Largest k with basis element i in A^k.
    int filtration_level(std::size_t i) const { return level_[i]; }

private:
    std::vector<std::string> names_;
    std::vector<int> degrees_;
    std::vector<std::vector<Vector>> table_;
    std::vector<Vector> d_;
    int order_ = 1;
    std::vector<int> level_;
};

}  // namespace linf
