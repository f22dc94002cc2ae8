#include "linf/nilpotent_base.hpp"

#include "linf/errors.hpp"

#include <algorithm>

namespace linf {

namespace {

bool zero_vector(const Vector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Q& q) { return is_zero(q); });
}

}  // namespace

NilpotentBase::NilpotentBase(std::vector<std::string> names, std::vector<int> degrees,
                             const std::vector<Product>& products, std::vector<Vector> differential)
    : names_(std::move(names)), degrees_(std::move(degrees))
{
    const std::size_t n = names_.size();
    if (degrees_.size() != n)
        throw LengthMismatch("one degree per base element");
    table_.assign(n, std::vector<Vector>(n, Vector(n)));
    std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
    for (const auto& p : products) {
        if (p.left >= n || p.right >= n)
            throw ValidationError("product index out of range");
        Vector v(n);
        for (const auto& [k, c] : p.output) {
            if (k >= n)
                throw ValidationError("product index out of range");
            if (!is_zero(c) && degrees_[k] != degrees_[p.left] + degrees_[p.right])
                throw DegreeMismatch(names_[p.left] + "*" + names_[p.right] + " cannot contain " + names_[k]);
            v[k] += c;
        }
        const Q s = parity_sign(static_cast<long long>(degrees_[p.left]) * degrees_[p.right]);
        Vector sv = v;
        for (auto& q : sv)
            q *= s;
        auto set = [&](std::size_t i, std::size_t j, const Vector& val) {
            if (given[i][j] && table_[i][j] != val)
                throw ValidationError("product " + names_[i] + "*" + names_[j] + " violates graded commutativity");
            table_[i][j] = val;
            given[i][j] = true;
        };
        set(p.left, p.right, v);
        set(p.right, p.left, sv);
    }
    d_ = differential.empty() ? std::vector<Vector>(n, Vector(n)) : std::move(differential);
    if (d_.size() != n)
        throw LengthMismatch("one differential value per base element");
    for (std::size_t i = 0; i < n; ++i) {
        if (d_[i].size() != n)
            throw LengthMismatch("differential value length");
        for (std::size_t k = 0; k < n; ++k)
            if (!is_zero(d_[i][k]) && degrees_[k] != degrees_[i] + 1)
                throw DegreeMismatch("d(" + names_[i] + ") cannot contain " + names_[k]);
    }

    auto unit = [n](std::size_t i) {
        Vector e(n);
        e[i] = 1;
        return e;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!zero_vector(apply_d(d_[i])))
            throw ValidationError("d^2 != 0 on " + names_[i]);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                Vector l = multiply(table_[i][j], unit(k));
                Vector r = multiply(unit(i), table_[j][k]);
                if (l != r)
                    throw ValidationError("associativity fails on (" + names_[i] + "," + names_[j] + "," + names_[k] + ")");
            }
            // d(ab) = da b + (-1)^{|a|} a db
            Vector lhs = apply_d(table_[i][j]);
            Vector rhs = multiply(d_[i], unit(j));
            Vector t = multiply(unit(i), d_[j]);
            for (std::size_t k = 0; k < n; ++k)
                rhs[k] += parity_sign(degrees_[i]) * t[k];
            if (lhs != rhs)
                throw ValidationError("Leibniz rule fails on (" + names_[i] + "," + names_[j] + ")");
        }
    }

    // powers A^k as spans; nilpotency and filtration levels
    level_.assign(n, 1);
    std::vector<Vector> power;
    for (std::size_t i = 0; i < n; ++i)
        power.push_back(unit(i));
    order_ = 1;
    for (int k = 2; !power.empty(); ++k) {
        if (k > static_cast<int>(n) + 2)
            throw ValidationError("base algebra is not nilpotent");
        std::vector<Vector> next;
        for (const auto& p : power)
            for (std::size_t i = 0; i < n; ++i) {
                Vector v = multiply(p, unit(i));
                if (!zero_vector(v))
                    next.push_back(v);
            }
        std::vector<Vector> basis;
        for (auto idx : independent_subset(n, next))
            basis.push_back(next[idx]);
        power = basis;
        order_ = k - 1;
        for (std::size_t i = 0; i < n; ++i)
            if (!basis.empty() && solve(RationalMatrix::from_columns(n, basis), unit(i)))
                level_[i] = k;
        if (power.empty())
            order_ = k;
    }
}

NilpotentBase NilpotentBase::truncated_polynomial(int k, int degree, const std::string& var)
{
    if (degree % 2 != 0)
        throw ValidationError("truncated polynomial variable must be even");
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (int i = 1; i <= k; ++i) {
        names.push_back(i == 1 ? var : var + "^" + std::to_string(i));
        degrees.push_back(i * degree);
    }
    std::vector<Product> prods;
    for (int i = 1; i <= k; ++i)
        for (int j = i; j <= k; ++j)
            if (i + j <= k)
                prods.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                                 {{static_cast<std::size_t>(i + j - 1), Q(1)}}});
    return NilpotentBase(names, degrees, prods);
}

bool NilpotentBase::has_differential() const
{
    return std::any_of(d_.begin(), d_.end(), [](const Vector& v) { return !zero_vector(v); });
}

bool NilpotentBase::infinitesimal() const
{
    for (const auto& row : table_)
        for (const auto& v : row)
            if (!zero_vector(v))
                return false;
    return true;
}

Vector NilpotentBase::multiply(const Vector& a, const Vector& b) const
{
    const std::size_t n = dim();
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (is_zero(a[i]))
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (is_zero(b[j]))
                continue;
            const Vector& p = table_[i][j];
            for (std::size_t k = 0; k < n; ++k)
                if (!is_zero(p[k]))
                    out[k] += a[i] * b[j] * p[k];
        }
    }
    return out;
}

Vector NilpotentBase::apply_d(const Vector& a) const
{
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i)
        if (!is_zero(a[i]))
            for (std::size_t k = 0; k < dim(); ++k)
                out[k] += a[i] * d_[i][k];
    return out;
}

std::vector<std::size_t> NilpotentBase::power_ideal(int k) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim(); ++i)
        if (level_[i] >= k)
            out.push_back(i);
    return out;
}

}  // namespace linf
