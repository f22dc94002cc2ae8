#pragma once

#include "linf/errors.hpp"
#include "linf/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace linf {

using Vector = std::vector<Q>;

/// Dense matrix over Q. Desk-scale sizes (a few thousand columns at most).
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Q& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Q& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector column(std::size_t c) const;
    Vector apply(const Vector& v) const;
    RationalMatrix operator*(const RationalMatrix& other) const;
    bool is_zero() const;
    bool operator==(const RationalMatrix& other) const = default;

    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_columns(std::size_t rows, const std::vector<Vector>& columns);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Q> data_;
};

/// Reduced row echelon form, computed in place on a copy.
struct EchelonForm {
    RationalMatrix reduced;
    std::vector<std::size_t> pivot_columns;
};

EchelonForm row_echelon(RationalMatrix m);

struct RankKernel {
    std::size_t rank = 0;
    std::vector<Vector> kernel_basis;
};

/// rank + kernel_basis.size() == cols, and every kernel vector is exactly in the kernel.
RankKernel rank_kernel(const RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

/// Some x with m x = b, or nullopt when b is outside the column space.
std::optional<Vector> solve(const RationalMatrix& m, const Vector& b);

/// Indices of a maximal independent subset of `vectors`, chosen greedily in order.
std::vector<std::size_t> independent_subset(std::size_t dim, const std::vector<Vector>& vectors);

/// Finite slice [lo, hi] of a cochain complex. differential(k) maps degree k
/// to degree k+1 and exists for lo <= k < hi.
class CochainWindow {
public:
    CochainWindow(int lo, int hi);

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool contains(int k) const { return k >= lo_ && k <= hi_; }

    void set_basis(int k, std::vector<std::string> labels);
    const std::vector<std::string>& basis(int k) const;
    std::size_t dim(int k) const { return contains(k) ? basis(k).size() : 0; }

    void set_differential(int k, RationalMatrix d);
    const RationalMatrix& differential(int k) const;

    /// Degrees k with lo <= k < hi-1 where d(k+1) d(k) is not the zero matrix.
    std::vector<int> square_failures() const;

private:
    std::size_t index(int k) const { return static_cast<std::size_t>(k - lo_); }
    int lo_;
    int hi_;
    std::vector<std::vector<std::string>> bases_;
    std::vector<RationalMatrix> differentials_;
};

/// Cohomology at one degree. At the window boundary only a partial answer is
/// possible; it is returned with truncation_suspect set.
struct CohomologyGroup {
    int degree = 0;
    std::size_t dim = 0;
    std::size_t cocycle_dim = 0;
    std::size_t coboundary_dim = 0;
    bool truncation_suspect = false;
    std::vector<Vector> representatives;
    std::vector<Vector> coboundaries;

    /// Coordinates of a cocycle in the representative basis modulo coboundaries.
    /// nullopt if v is not in span(representatives) + span(coboundaries).
    std::optional<Vector> class_of(const Vector& v) const;
};

/// dim = dim ker d_k - rank d_{k-1}. Throws DegreeOutsideWindow when k is a
/// boundary degree and allow_boundary is false.
CohomologyGroup cohomology(const CochainWindow& w, int k, bool allow_boundary = false);

std::string format_vector(const Vector& v);

}  // namespace linf
