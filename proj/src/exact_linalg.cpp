#include "linf/exact_linalg.hpp"

#include <cassert>

namespace linf {

Vector RationalMatrix::column(std::size_t c) const
{
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        v[r] = (*this)(r, c);
    return v;
}

Vector RationalMatrix::apply(const Vector& v) const
{
    assert(v.size() == cols_);
    Vector out(rows_);
    for (std::size_t c = 0; c < cols_; ++c) {
        if (linf::is_zero(v[c]))
            continue;
        for (std::size_t r = 0; r < rows_; ++r) {
            const Q& a = (*this)(r, c);
            if (!linf::is_zero(a))
                out[r] += a * v[c];
        }
    }
    return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const
{
    assert(cols_ == other.rows_);
    RationalMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Q& a = (*this)(i, k);
            if (linf::is_zero(a))
                continue;
            for (std::size_t j = 0; j < other.cols_; ++j) {
                const Q& b = other(k, j);
                if (!linf::is_zero(b))
                    out(i, j) += a * b;
            }
        }
    return out;
}

bool RationalMatrix::is_zero() const
{
    for (const auto& q : data_)
        if (!linf::is_zero(q))
            return false;
    return true;
}

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_columns(std::size_t rows, const std::vector<Vector>& columns)
{
    RationalMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        assert(columns[c].size() == rows);
        for (std::size_t r = 0; r < rows; ++r)
            m(r, c) = columns[c][r];
    }
    return m;
}

EchelonForm row_echelon(RationalMatrix m)
{
    EchelonForm out;
    std::size_t pivot_row = 0;
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        std::size_t r = pivot_row;
        while (r < rows && is_zero(m(r, c)))
            ++r;
        if (r == rows)
            continue;
        if (r != pivot_row)
            for (std::size_t j = c; j < cols; ++j)
                swap(m(r, j), m(pivot_row, j));
        Q inv = 1 / m(pivot_row, c);
        for (std::size_t j = c; j < cols; ++j)
            m(pivot_row, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == pivot_row || is_zero(m(i, c)))
                continue;
            Q f = m(i, c);
            for (std::size_t j = c; j < cols; ++j)
                if (!is_zero(m(pivot_row, j)))
                    m(i, j) -= f * m(pivot_row, j);
        }
        out.pivot_columns.push_back(c);
        ++pivot_row;
    }
    out.reduced = std::move(m);
    return out;
}

RankKernel rank_kernel(const RationalMatrix& m)
{
    RankKernel out;
    EchelonForm e = row_echelon(m);
    out.rank = e.pivot_columns.size();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivot_columns)
        is_pivot[c] = true;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        Vector v(m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < e.pivot_columns.size(); ++i)
            v[e.pivot_columns[i]] = -e.reduced(i, free);
        out.kernel_basis.push_back(std::move(v));
    }
    return out;
}

std::size_t rank(const RationalMatrix& m) { return row_echelon(m).pivot_columns.size(); }

std::optional<Vector> solve(const RationalMatrix& m, const Vector& b)
{
    assert(b.size() == m.rows());
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    EchelonForm e = row_echelon(std::move(aug));
    if (!e.pivot_columns.empty() && e.pivot_columns.back() == m.cols())
        return std::nullopt;
    Vector x(m.cols());
    for (std::size_t i = 0; i < e.pivot_columns.size(); ++i)
        x[e.pivot_columns[i]] = e.reduced(i, m.cols());
    return x;
}

std::vector<std::size_t> independent_subset(std::size_t dim, const std::vector<Vector>& vectors)
{
    if (vectors.empty())
        return {};
    EchelonForm e = row_echelon(RationalMatrix::from_columns(dim, vectors));
    return e.pivot_columns;
}

CochainWindow::CochainWindow(int lo, int hi) : lo_(lo), hi_(hi)
{
    assert(lo <= hi);
    bases_.resize(static_cast<std::size_t>(hi - lo + 1));
    differentials_.resize(static_cast<std::size_t>(hi - lo + 1));
}

void CochainWindow::set_basis(int k, std::vector<std::string> labels)
{
    assert(contains(k));
    bases_[index(k)] = std::move(labels);
}

const std::vector<std::string>& CochainWindow::basis(int k) const
{
    assert(contains(k));
    return bases_[index(k)];
}

void CochainWindow::set_differential(int k, RationalMatrix d)
{
    assert(contains(k) && k < hi_);
    assert(d.cols() == dim(k) && d.rows() == dim(k + 1));
    differentials_[index(k)] = std::move(d);
}

const RationalMatrix& CochainWindow::differential(int k) const
{
    assert(contains(k) && k < hi_);
    return differentials_[index(k)];
}

std::vector<int> CochainWindow::square_failures() const
{
    std::vector<int> bad;
    for (int k = lo_; k + 1 < hi_; ++k) {
        const auto& a = differential(k);
        const auto& b = differential(k + 1);
        if (a.cols() == 0 || b.rows() == 0)
            continue;
        if (!(b * a).is_zero())
            bad.push_back(k);
    }
    return bad;
}

std::optional<Vector> CohomologyGroup::class_of(const Vector& v) const
{
    std::vector<Vector> cols = representatives;
    cols.insert(cols.end(), coboundaries.begin(), coboundaries.end());
    if (cols.empty()) {
        for (const auto& q : v)
            if (!is_zero(q))
                return std::nullopt;
        return Vector{};
    }
    auto x = solve(RationalMatrix::from_columns(v.size(), cols), v);
    if (!x)
        return std::nullopt;
    x->resize(representatives.size());
    return x;
}

CohomologyGroup cohomology(const CochainWindow& w, int k, bool allow_boundary)
{
    if (!w.contains(k))
        throw DegreeOutsideWindow(k, w.lo(), w.hi());
    const bool has_in = k > w.lo();
    const bool has_out = k < w.hi();
    if ((!has_in || !has_out) && !allow_boundary)
        throw DegreeOutsideWindow(k, w.lo(), w.hi());

    CohomologyGroup g;
    g.degree = k;
    g.truncation_suspect = !has_in || !has_out;
    const std::size_t n = w.dim(k);

    std::vector<Vector> cocycles;
    if (has_out) {
        cocycles = rank_kernel(w.differential(k)).kernel_basis;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            Vector e(n);
            e[i] = 1;
            cocycles.push_back(std::move(e));
        }
    }
    g.cocycle_dim = cocycles.size();

    if (has_in && w.dim(k - 1) > 0 && n > 0) {
        const auto& d = w.differential(k - 1);
        std::vector<Vector> images;
        for (std::size_t c = 0; c < d.cols(); ++c)
            images.push_back(d.column(c));
        for (auto i : independent_subset(n, images))
            g.coboundaries.push_back(images[i]);
    }
    g.coboundary_dim = g.coboundaries.size();

    std::vector<Vector> all = g.coboundaries;
    all.insert(all.end(), cocycles.begin(), cocycles.end());
    for (auto i : independent_subset(n, all))
        if (i >= g.coboundaries.size())
            g.representatives.push_back(all[i]);
    g.dim = g.representatives.size();
    assert(g.dim == g.cocycle_dim - g.coboundary_dim);
    return g;
}

std::string format_vector(const Vector& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += to_string(v[i]);
    }
    return s + ")";
}

}  // namespace linf
