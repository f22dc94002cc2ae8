#include "linf/coefficient.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace linf {

void add_term(TensorElement& t, const TensorKey& k, const Q& c)
{
    if (is_zero(c))
        return;
    auto [it, inserted] = t.emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (is_zero(it->second))
            t.erase(it);
    }
}

TensorElement scaled(const TensorElement& t, const Q& c)
{
    TensorElement r;
    for (const auto& [k, v] : t)
        add_term(r, k, v * c);
    return r;
}

TensorElement sum(const TensorElement& a, const TensorElement& b)
{
    TensorElement r = a;
    for (const auto& [k, v] : b)
        add_term(r, k, v);
    return r;
}

CoefficientComplex::CoefficientComplex(LInftyStructure v, LInftyStructure u, bool truncated)
    : v_(std::move(v)), u_(std::move(u)), truncated_(truncated)
{
    for (const auto& e : u_.to_brackets())
        if (e.inputs.size() > 2)
            throw AritySupport("coefficient algebra has a bracket of arity " + std::to_string(e.inputs.size()) +
                               "; only dglas are supported as coefficients");
}

int CoefficientComplex::degree(const TensorKey& k) const
{
    return u_.degree(k.second) - v_.algebra()->degree(k.first);
}

TensorElement CoefficientComplex::identity_element() const
{
    if (!(v_.space() == u_.space()))
        throw ValidationError("the identity element needs U = V");
    TensorElement f;
    const auto& alg = *v_.algebra();
    for (std::size_t i = 0; i < v_.dim(); ++i) {
        Monomial m = alg.unit();
        m[i] = 1;
        add_term(f, {m, i}, 1);
    }
    return f;
}

TensorElement CoefficientComplex::untwisted_d(const TensorElement& x) const
{
    TensorElement r;
    const auto& alg = *v_.algebra();
    for (const auto& [key, c] : x) {
        const auto& [p, a] = key;
        for (const auto& [q, k] : v_.m().apply(p).terms)
            add_term(r, {q, a}, c * k);
        Vector da = u_.bracket({a});
        Q s = parity_sign(alg.degree(p)) * c;
        for (std::size_t b = 0; b < da.size(); ++b)
            if (!is_zero(da[b]))
                add_term(r, {p, b}, s * da[b]);
    }
    return r;
}

TensorElement CoefficientComplex::d(const TensorElement& x) const
{
    return sum(untwisted_d(x), bracket(f_, x));
}

TensorElement CoefficientComplex::bracket(const TensorElement& x, const TensorElement& y) const
{
    TensorElement r;
    const auto& alg = *v_.algebra();
    Monomial pq;
    for (const auto& [kx, cx] : x)
        for (const auto& [ky, cy] : y) {
            const auto& [p, a] = kx;
            const auto& [q, b] = ky;
            Vector ab = u_.bracket({a, b});
            if (std::all_of(ab.begin(), ab.end(), [](const Q& z) { return is_zero(z); }))
                continue;
            bool truncated = false;
            int s = alg.multiply(p, q, pq, truncated);
            if (s == 0)
                continue;
            s *= parity_sign(static_cast<long long>(u_.degree(a)) * alg.degree(q));
            for (std::size_t k = 0; k < ab.size(); ++k)
                if (!is_zero(ab[k]))
                    add_term(r, {pq, k}, cx * cy * ab[k] * s);
        }
    return r;
}

TensorElement CoefficientComplex::mc_residual(const TensorElement& f) const
{
    return sum(untwisted_d(f), scaled(bracket(f, f), frac(1, 2)));
}

void CoefficientComplex::twist(const TensorElement& f)
{
    for (const auto& [k, c] : f)
        if (degree(k) != -1)
            throw DegreeMismatch("MC elements of the coefficient dgla have degree -1");
    TensorElement r = mc_residual(f);
    if (!r.empty())
        throw NotMaurerCartan(format(r));
    f_ = f;
}

const std::vector<TensorKey>& CoefficientComplex::basis(int k) const
{
    auto it = cache_.find(k);
    if (it != cache_.end())
        return it->second;
    std::vector<TensorKey> out;
    for (std::size_t u = 0; u < u_.dim(); ++u)
        for (auto& m : v_.algebra()->monomials(u_.degree(u) - k, truncated_ ? 1 : 0))
            out.push_back({std::move(m), u});
    std::sort(out.begin(), out.end(), [this](const TensorKey& a, const TensorKey& b) {
        int wa = v_.algebra()->weight(a.first), wb = v_.algebra()->weight(b.first);
        if (wa != wb)
            return wa < wb;
        return a < b;
    });
    return cache_.emplace(k, std::move(out)).first->second;
}

Vector CoefficientComplex::coordinates(const TensorElement& x, int k) const
{
    const auto& b = basis(k);
    Vector v(b.size());
    for (const auto& [key, c] : x) {
        auto it = std::find(b.begin(), b.end(), key);
        if (it == b.end())
            throw ValidationError("tensor term outside the basis of degree " + std::to_string(k));
        v[static_cast<std::size_t>(it - b.begin())] = c;
    }
    return v;
}

TensorElement CoefficientComplex::element(int k, const Vector& coords) const
{
    const auto& b = basis(k);
    TensorElement t;
    for (std::size_t i = 0; i < b.size(); ++i)
        add_term(t, b[i], coords[i]);
    return t;
}

CochainWindow CoefficientComplex::window(int lo, int hi) const
{
    CochainWindow w(lo, hi);
    for (int c = lo; c <= hi; ++c) {
        std::vector<std::string> labels;
        for (const auto& key : basis(-c))
            labels.push_back(v_.algebra()->format(key.first) + " (x) " + u_.space()[key.second].name);
        w.set_basis(c, labels);
    }
    for (int c = lo; c < hi; ++c) {
        const auto& src = basis(-c);
        RationalMatrix m(w.dim(c + 1), src.size());
        for (std::size_t j = 0; j < src.size(); ++j) {
            TensorElement e;
            add_term(e, src[j], 1);
            Vector col = coordinates(d(e), -c - 1);
            for (std::size_t i = 0; i < col.size(); ++i)
                m(i, j) = col[i];
        }
        w.set_differential(c, m);
    }
    return w;
}

bool CoefficientComplex::complete(int k) const
{
    for (std::size_t u = 0; u < u_.dim(); ++u)
        if (!v_.algebra()->degree_complete(u_.degree(u) - k))
            return false;
    return true;
}

std::string CoefficientComplex::format(const TensorElement& x) const
{
    if (x.empty())
        return "0";
    std::string s;
    for (const auto& [key, c] : x) {
        if (!s.empty())
            s += " + ";
        s += "(" + to_string(c) + ") " + v_.algebra()->format(key.first) + " (x) " + u_.space()[key.second].name;
    }
    return s;
}

Derivation tensor_to_derivation(const CoefficientComplex& c, const TensorElement& x, int derivation_degree)
{
    Derivation d(c.source().algebra(), derivation_degree);
    for (const auto& [key, q] : x)
        d.values[key.second].add(key.first, q);
    return d;
}

TensorElement derivation_to_tensor(const Derivation& d)
{
    TensorElement t;
    for (std::size_t i = 0; i < d.values.size(); ++i)
        for (const auto& [m, q] : d.values[i].terms)
            add_term(t, {m, i}, q);
    return t;
}

Vector LieCochain::evaluate(const std::vector<std::size_t>& args, std::size_t dim) const
{
    std::vector<std::size_t> s = args;
    int sign = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
        for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
            std::swap(s[j - 1], s[j]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] == s[i - 1])
            return Vector(dim);
    auto it = values.find(s);
    if (it == values.end())
        return Vector(dim);
    Vector v = it->second;
    if (sign < 0)
        for (auto& q : v)
            q = -q;
    return v;
}

LieCochain LieCochain::identity(std::size_t dim)
{
    LieCochain c;
    c.arity = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        Vector e(dim);
        e[i] = 1;
        c.values[{i}] = e;
    }
    return c;
}

LieCochain LieCochain::bracket_cochain(const LieAlgebra& g)
{
    LieCochain c;
    c.arity = 2;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j)
            c.values[{i, j}] = g.bracket(i, j);
    return c;
}

LieCochain cup_bracket(const LieAlgebra& g, const LieCochain& a, const LieCochain& b)
{
    const std::size_t n = a.arity, m = b.arity, dim = g.dim();
    LieCochain out;
    out.arity = n + m;
    if (n + m > dim)
        return out;
    std::vector<std::size_t> subset(n + m);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == n + m) {
            Vector total(dim);
            std::vector<std::size_t> perm(n + m);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<std::size_t> left, right;
                for (std::size_t i = 0; i < n; ++i)
                    left.push_back(subset[perm[i]]);
                for (std::size_t i = n; i < n + m; ++i)
                    right.push_back(subset[perm[i]]);
                Vector br = g.bracket(a.evaluate(left, dim), b.evaluate(right, dim));
                int s = permutation_sign(perm);
                for (std::size_t k = 0; k < dim; ++k)
                    total[k] += s * br[k];
            } while (std::next_permutation(perm.begin(), perm.end()));
            Q f = Q(1) / factorial(static_cast<int>(n + m));
            bool nonzero = false;
            for (auto& q : total) {
                q *= f;
                nonzero = nonzero || !is_zero(q);
            }
            if (nonzero)
                out.values[subset] = total;
            return;
        }
        for (std::size_t i = start; i < dim; ++i) {
            subset[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return out;
}

LieAlgebra require_ungraded_lie(const LInftyStructure& v)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v.degree(i) != 0)
            throw AritySupport("closed cup formula needs an ungraded Lie algebra; " + v.space()[i].name +
                               " has degree " + std::to_string(v.degree(i)));
        names.push_back(v.space()[i].name);
    }
    auto entries = v.to_brackets();
    for (const auto& e : entries)
        if (e.inputs.size() != 2)
            throw AritySupport("closed cup formula needs binary brackets only");
    return LieAlgebra(names, entries);
}

TensorElement cochain_to_tensor(const LieCochain& g, std::size_t dim)
{
    TensorElement t;
    Q scale = factorial(static_cast<int>(g.arity));
    for (const auto& [idx, v] : g.values) {
        Monomial m(dim, 0);
        for (auto i : idx)
            m[i] = 1;
        for (std::size_t k = 0; k < dim; ++k)
            add_term(t, {m, k}, v[k] * scale);
    }
    return t;
}

LieCochain tensor_to_cochain(const TensorElement& t, std::size_t arity, std::size_t dim)
{
    LieCochain g;
    g.arity = arity;
    Q scale = Q(1) / factorial(static_cast<int>(arity));
    for (const auto& [key, c] : t) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < key.first.size(); ++i)
            if (key.first[i])
                idx.push_back(i);
        if (idx.size() != arity)
            throw ValidationError("tensor term of the wrong arity");
        auto& v = g.values[idx];
        v.resize(dim);
        v[key.second] += c * scale;
    }
    return g;
}

bool InducedBracketTable::all_zero() const
{
    for (const auto& e : entries)
        for (const auto& q : e.value)
            if (!is_zero(q))
                return false;
    return true;
}

InducedBracketTable induced_cohomology_bracket(const LInftyStructure& v, int lo, int hi, bool truncated)
{
    CoefficientComplex c(v, v, truncated);
    c.twist(c.identity_element());
    CochainWindow w = c.window(lo - 1, hi + 1);
    InducedBracketTable t;
    std::map<int, CohomologyGroup> groups;
    for (int k = lo; k <= hi; ++k) {
        if (!c.complete(-k + 1) || !c.complete(-k) || !c.complete(-k - 1))
            t.unsafe.push_back(k);
        groups.emplace(k, cohomology(w, k));
        t.dims[k] = groups.at(k).dim;
    }
    for (int a = lo; a <= hi; ++a)
        for (int b = a; b <= hi; ++b) {
            if (a + b < lo || a + b > hi)
                continue;
            const auto& ga = groups.at(a);
            const auto& gb = groups.at(b);
            for (std::size_t i = 0; i < ga.representatives.size(); ++i)
                for (std::size_t j = 0; j < gb.representatives.size(); ++j) {
                    if (a == b && j < i)
                        continue;
                    TensorElement x = c.element(-a, ga.representatives[i]);
                    TensorElement y = c.element(-b, gb.representatives[j]);
                    auto cls = groups.at(a + b).class_of(c.coordinates(c.bracket(x, y), -(a + b)));
                    if (!cls)
                        throw ValidationError("cup bracket of cocycles is not a cocycle");
                    t.entries.push_back({a, i, b, j, *cls});
                }
        }
    return t;
}

}  // namespace linf
