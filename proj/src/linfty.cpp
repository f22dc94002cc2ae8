#include "linf/linfty.hpp"

#include <algorithm>

namespace linf {

namespace {

std::vector<int> homological_degrees(const GradedSpace& v)
{
    std::vector<int> d;
    for (std::size_t i = 0; i < v.dim(); ++i)
        d.push_back(-v.cohomological_degree(i));
    return d;
}

/// Sorts inputs, returning the sign relating l(original) to l(sorted), or 0
/// when graded antisymmetry forces the bracket to vanish.
int sort_antisymmetric(std::vector<std::size_t>& s, const std::vector<int>& deg)
{
    int sign = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
        for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
            if (deg[s[j - 1]] % 2 == 0 || deg[s[j]] % 2 == 0)
                sign = -sign;
            std::swap(s[j - 1], s[j]);
        }
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] == s[i - 1] && deg[s[i]] % 2 == 0)
            return 0;
    return sign;
}

Monomial monomial_of(const std::vector<std::size_t>& sorted, std::size_t n)
{
    Monomial m(n, 0);
    for (auto i : sorted)
        ++m[i];
    return m;
}

std::vector<std::size_t> tuple_of(const Monomial& m)
{
    std::vector<std::size_t> t;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (int k = 0; k < m[i]; ++k)
            t.push_back(i);
    return t;
}

Q image_coefficient(const FreeCommAlgebra& alg, const std::vector<int>& deg, const std::vector<std::size_t>& sorted)
{
    Element e = bracket_image(alg, deg, sorted);
    auto it = e.terms.find(monomial_of(sorted, alg.size()));
    return it == e.terms.end() ? Q(0) : it->second;
}

}  // namespace

Element bracket_image(const FreeCommAlgebra& alg, const std::vector<int>& deg, const std::vector<std::size_t>& inputs)
{
    std::vector<std::size_t> seq = inputs;
    std::sort(seq.begin(), seq.end());
    const std::size_t n = seq.size();
    Element total;
    do {
        std::vector<std::size_t> back = seq;
        int eps = sort_antisymmetric(back, deg);
        if (eps == 0)
            continue;
        long long exponent = 0;
        for (std::size_t a = 0; a < n; ++a)
            exponent += static_cast<long long>(n) * (deg[seq[a]] + 1);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                exponent += static_cast<long long>(deg[seq[a]]) * (deg[seq[b]] + 1);
        Element prod = alg.one();
        for (auto i : seq)
            prod = alg.mul(prod, alg.gen(i));
        total += prod * Q(eps * parity_sign(exponent < 0 ? -exponent : exponent));
    } while (std::next_permutation(seq.begin(), seq.end()));
    return total * (Q(-1) / factorial(static_cast<int>(n)));
}

AlgebraPtr LInftyStructure::representing_algebra(const GradedSpace& v, int weight_cap)
{
    std::vector<Generator> gens;
    for (std::size_t i = 0; i < v.dim(); ++i)
        gens.push_back({dual_name(v[i].name), -v.cohomological_degree(i) + 1, true, 0});
    return std::make_shared<const FreeCommAlgebra>(std::move(gens), weight_cap);
}

LInftyStructure LInftyStructure::from_brackets(const GradedSpace& v_in, const std::vector<BracketEntry>& entries,
                                               int weight_cap)
{
    GradedSpace v = v_in.converted(Grading::homological);
    auto alg = representing_algebra(v, weight_cap);
    const auto deg = homological_degrees(v);
    std::map<std::vector<std::size_t>, Vector> table;
    for (const auto& e : entries) {
        if (e.inputs.empty())
            throw AritySupport("brackets of arity 0 (curvature) are not supported");
        if (static_cast<int>(e.inputs.size()) > weight_cap)
            throw AritySupport("bracket of arity " + std::to_string(e.inputs.size()) + " exceeds weight cap " +
                               std::to_string(weight_cap));
        std::vector<std::size_t> s = e.inputs;
        for (auto i : s)
            if (i >= v.dim())
                throw ValidationError("bracket input index out of range");
        int expected = static_cast<int>(s.size()) - 2;
        for (auto i : s)
            expected += deg[i];
        int eps = sort_antisymmetric(s, deg);
        auto [it, inserted] = table.emplace(s, Vector(v.dim()));
        if (!inserted)
            throw ValidationError("bracket on the same inputs given twice");
        for (const auto& [k, c] : e.output) {
            if (k >= v.dim())
                throw ValidationError("bracket output index out of range");
            if (is_zero(c))
                continue;
            if (deg[k] != expected)
                throw DegreeMismatch("bracket output " + v[k].name + " has degree " + std::to_string(deg[k]) +
                                     ", expected " + std::to_string(expected));
            if (eps == 0)
                throw ValidationError("bracket forced to vanish by graded antisymmetry has a nonzero value");
            it->second[k] += c * eps;
        }
    }
    Derivation m(alg, 1);
    for (const auto& [inputs, out] : table) {
        Element img = bracket_image(*alg, deg, inputs);
        for (std::size_t k = 0; k < out.size(); ++k)
            if (!is_zero(out[k]))
                m.values[k] += img * out[k];
    }
    LInftyStructure s;
    s.space_ = v;
    s.m_ = std::move(m);
    return s;
}

LInftyStructure LInftyStructure::from_derivation(const GradedSpace& v_in, Derivation m)
{
    GradedSpace v = v_in.converted(Grading::homological);
    if (m.algebra->size() != v.dim())
        throw AlgebraMismatch("derivation algebra does not match the space");
    for (std::size_t i = 0; i < v.dim(); ++i)
        if (m.algebra->generator(i).degree != v[i].degree + 1)
            throw DegreeMismatch("generator " + m.algebra->generator(i).name + " has the wrong degree");
    if (!m.is_zero() && m.degree != 1)
        throw DegreeMismatch("an L-infinity structure has degree +1");
    m.degree = 1;
    if (m.has_constant_term())
        throw ValidationError("an L-infinity structure has no constant term");
    LInftyStructure s;
    s.space_ = v;
    s.m_ = std::move(m);
    return s;
}

std::vector<BracketEntry> LInftyStructure::to_brackets() const
{
    const auto deg = homological_degrees(space_);
    std::map<std::vector<std::size_t>, std::vector<std::pair<std::size_t, Q>>> table;
    std::map<std::vector<std::size_t>, Q> lambda;
    for (std::size_t k = 0; k < dim(); ++k)
        for (const auto& [mono, c] : m_.values[k].terms) {
            auto t = tuple_of(mono);
            auto it = lambda.find(t);
            if (it == lambda.end())
                it = lambda.emplace(t, image_coefficient(*m_.algebra, deg, t)).first;
            if (is_zero(it->second))
                throw ValidationError("derivation term " + m_.algebra->format(mono) + " has no bracket reading");
            table[t].emplace_back(k, c / it->second);
        }
    std::vector<BracketEntry> out;
    for (auto& [t, o] : table)
        out.push_back({t, o});
    return out;
}

Vector LInftyStructure::bracket(const std::vector<std::size_t>& inputs) const
{
    const auto deg = homological_degrees(space_);
    std::vector<std::size_t> s = inputs;
    Vector out(dim());
    int eps = sort_antisymmetric(s, deg);
    if (eps == 0)
        return out;
    Q lambda = image_coefficient(*m_.algebra, deg, s);
    if (is_zero(lambda))
        return out;
    Monomial mono = monomial_of(s, dim());
    for (std::size_t k = 0; k < dim(); ++k) {
        auto it = m_.values[k].terms.find(mono);
        if (it != m_.values[k].terms.end())
            out[k] = it->second / lambda * eps;
    }
    return out;
}

RationalMatrix LInftyStructure::differential() const
{
    RationalMatrix d(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        Vector col = bracket({j});
        for (std::size_t k = 0; k < dim(); ++k)
            d(k, j) = col[k];
    }
    return d;
}

bool LInftyStructure::is_minimal() const { return differential().is_zero(); }

LInftyStructure LInftyStructure::with_cap(int weight_cap) const
{
    auto alg = representing_algebra(space_, weight_cap);
    Derivation m(alg, 1);
    for (std::size_t k = 0; k < dim(); ++k)
        for (const auto& [mono, c] : m_.values[k].terms)
            if (alg->weight(mono) <= weight_cap)
                m.values[k].add(mono, c);
    LInftyStructure s;
    s.space_ = space_;
    s.m_ = std::move(m);
    return s;
}

bool LInftyStructure::operator==(const LInftyStructure& o) const
{
    return space_ == o.space_ && *m_.algebra == *o.m_.algebra && m_ == o.m_;
}

LinftyReport check_linfty(const Derivation& m)
{
    LinftyReport r;
    Derivation sq = commutator(m, m);
    if (sq.is_zero())
        return r;
    r.ok = false;
    int lowest = -1;
    for (const auto& v : sq.values)
        for (const auto& [mono, c] : v.terms) {
            int w = m.algebra->weight(mono);
            if (lowest < 0 || w < lowest)
                lowest = w;
        }
    r.first_failing_weight = lowest;
    r.residual = sq.weight_component(lowest).format();
    return r;
}

Derivation mc_residual(const Derivation& m, const Derivation& xi)
{
    if (xi.degree != 1 && !xi.is_zero())
        throw DegreeMismatch("MC elements of a derivation dgla have derivation degree 1, got " +
                             std::to_string(xi.degree));
    Derivation x = xi;
    x.degree = 1;
    return commutator(m, x) + commutator(x, x) * frac(1, 2);
}

bool is_mc(const Derivation& m, const Derivation& xi) { return mc_residual(m, xi).is_zero(); }

Derivation twist(const Derivation& m, const Derivation& xi)
{
    Derivation r = mc_residual(m, xi);
    if (!r.is_zero())
        throw NotMaurerCartan(r.format());
    Derivation x = xi;
    x.degree = 1;
    return m + x;
}

AlgebraMap translation(AlgebraPtr alg, const std::vector<Element>& shifts)
{
    if (shifts.size() != alg->size())
        throw LengthMismatch("translation needs one shift per generator");
    AlgebraMap t = AlgebraMap::identity(alg);
    for (std::size_t i = 0; i < shifts.size(); ++i)
        t.images[i] += shifts[i];
    t.validate();
    return t;
}

Derivation twist_at_point(const Derivation& m, const std::vector<Element>& xi)
{
    std::vector<Element> neg;
    for (const auto& e : xi)
        neg.push_back(-e);
    return conjugate(translation(m.algebra, xi), m, translation(m.algebra, neg));
}

bool is_mc_point(const Derivation& m, const std::vector<Element>& xi)
{
    Derivation t = twist_at_point(m, xi);
    for (const auto& v : t.values)
        for (const auto& [mono, c] : v.terms)
            if (m.algebra->weight(mono) == 0)
                return false;
    return true;
}

std::map<int, std::size_t> tangent_cohomology(const LInftyStructure& v)
{
    std::map<int, std::size_t> out;
    if (v.dim() == 0)
        return out;
    int lo = 0, hi = 0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        lo = std::min(lo, -v.degree(i));
        hi = std::max(hi, -v.degree(i));
    }
    CochainWindow w(lo - 1, hi + 1);
    std::map<int, std::vector<std::size_t>> idx;
    for (std::size_t i = 0; i < v.dim(); ++i)
        idx[-v.degree(i)].push_back(i);
    for (int c = lo - 1; c <= hi + 1; ++c) {
        std::vector<std::string> labels;
        for (auto i : idx[c])
            labels.push_back(v.space()[i].name);
        w.set_basis(c, labels);
    }
    RationalMatrix d = v.differential();
    for (int c = lo - 1; c <= hi; ++c) {
        RationalMatrix block(w.dim(c + 1), w.dim(c));
        for (std::size_t r = 0; r < idx[c + 1].size(); ++r)
            for (std::size_t s = 0; s < idx[c].size(); ++s)
                block(r, s) = d(idx[c + 1][r], idx[c][s]);
        w.set_differential(c, block);
    }
    for (int c = lo; c <= hi; ++c)
        if (!idx[c].empty())
            out[-c] = cohomology(w, c).dim;
    return out;
}

LInftyStructure restrict_structure(const LInftyStructure& v, const std::vector<Vector>& vectors,
                                   const std::vector<std::string>& names)
{
    const std::size_t n = v.dim();
    const std::size_t k = vectors.size();
    if (names.size() != k)
        throw LengthMismatch("one name per subspace vector");
    std::vector<BasisElement> basis;
    for (std::size_t a = 0; a < k; ++a) {
        std::optional<int> d;
        for (std::size_t i = 0; i < n; ++i)
            if (!is_zero(vectors[a][i])) {
                if (d && *d != v.degree(i))
                    throw NotASubspace("vector " + names[a] + " is not homogeneous");
                d = v.degree(i);
            }
        if (!d)
            throw NotASubspace("zero vector " + names[a]);
        basis.push_back({names[a], *d});
    }
    if (independent_subset(n, vectors).size() != k)
        throw NotASubspace("vectors are linearly dependent");
    GradedSpace w(basis, Grading::homological);
    auto walg = LInftyStructure::representing_algebra(w, v.weight_cap());
    auto valg = v.algebra();

    // left inverse P with P * iota = 1, supported on independent rows of iota
    RationalMatrix iota = RationalMatrix::from_columns(n, vectors);
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < n; ++i) {
        Vector r(k);
        for (std::size_t a = 0; a < k; ++a)
            r[a] = iota(i, a);
        rows.push_back(r);
    }
    auto chosen = independent_subset(k, rows);
    RationalMatrix square(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t a = 0; a < k; ++a)
            square(r, a) = iota(chosen[r], a);
    RationalMatrix p(k, n);
    for (std::size_t a = 0; a < k; ++a) {
        Vector e(k);
        e[a] = 1;
        // column a of square^{-1}: solve square * x = e_a, then P(b, chosen[r]) = inv(b, r)
        auto x = solve(square, e);
        for (std::size_t b = 0; b < k; ++b)
            p(b, chosen[a]) = (*x)[b];
    }

    AlgebraMap iota_star{valg, walg, {}};
    for (std::size_t i = 0; i < n; ++i) {
        Element img;
        for (std::size_t a = 0; a < k; ++a)
            if (!is_zero(iota(i, a)))
                img += walg->gen(a) * iota(i, a);
        iota_star.images.push_back(img);
    }
    AlgebraMap pi_star{walg, valg, {}};
    for (std::size_t a = 0; a < k; ++a) {
        Element img;
        for (std::size_t i = 0; i < n; ++i)
            if (!is_zero(p(a, i)))
                img += valg->gen(i) * p(a, i);
        pi_star.images.push_back(img);
    }
    Derivation mw = conjugate(iota_star, v.m(), pi_star);
    mw.degree = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Element lhs = iota_star.apply(v.m().values[i]);
        Element rhs = mw.apply(iota_star.images[i]);
        if (!(lhs == rhs))
            throw NotASubspace("subspace is not closed under the brackets (checked on " + valg->generator(i).name + ")");
    }
    return LInftyStructure::from_derivation(w, mw);
}

LInftyStructure connected_cover(const LInftyStructure& v, int n)
{
    std::vector<Vector> vectors;
    std::vector<std::string> names;
    std::vector<std::size_t> at_n, below;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v.degree(i) > n) {
            Vector e(v.dim());
            e[i] = 1;
            vectors.push_back(e);
            names.push_back(v.space()[i].name);
        } else if (v.degree(i) == n) {
            at_n.push_back(i);
        } else if (v.degree(i) == n - 1) {
            below.push_back(i);
        }
    }
    RationalMatrix d = v.differential();
    RationalMatrix block(below.size(), at_n.size());
    for (std::size_t r = 0; r < below.size(); ++r)
        for (std::size_t s = 0; s < at_n.size(); ++s)
            block(r, s) = d(below[r], at_n[s]);
    auto ker = rank_kernel(block).kernel_basis;
    for (std::size_t j = 0; j < ker.size(); ++j) {
        Vector e(v.dim());
        std::size_t support = 0, last = 0;
        for (std::size_t s = 0; s < at_n.size(); ++s)
            if (!is_zero(ker[j][s])) {
                e[at_n[s]] = ker[j][s];
                ++support;
                last = at_n[s];
            }
        vectors.push_back(e);
        names.push_back(support == 1 && e[last] == 1 ? v.space()[last].name : "k" + std::to_string(j));
    }
    return restrict_structure(v, vectors, names);
}

LieAlgebra::LieAlgebra(std::vector<std::string> names, const std::vector<BracketEntry>& entries)
    : names_(std::move(names)), table_(names_.size(), std::vector<Vector>(names_.size(), Vector(names_.size())))
{
    for (const auto& e : entries) {
        if (e.inputs.size() != 2)
            throw AritySupport("Lie brackets are binary");
        auto [i, j] = std::pair(e.inputs[0], e.inputs[1]);
        if (i >= dim() || j >= dim())
            throw ValidationError("bracket index out of range");
        for (const auto& [k, c] : e.output) {
            if (i == j && !is_zero(c))
                throw ValidationError("[" + names_[i] + "," + names_[i] + "] must vanish");
            table_[i][j][k] += c;
            table_[j][i][k] -= c;
        }
    }
}

Vector LieAlgebra::bracket(const Vector& a, const Vector& b) const
{
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (is_zero(a[i]))
            continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (is_zero(b[j]))
                continue;
            Q f = a[i] * b[j];
            for (std::size_t k = 0; k < dim(); ++k)
                if (!is_zero(table_[i][j][k]))
                    out[k] += f * table_[i][j][k];
        }
    }
    return out;
}

std::optional<std::array<std::size_t, 3>> LieAlgebra::jacobi_violation() const
{
    auto unit = [this](std::size_t i) {
        Vector e(dim());
        e[i] = 1;
        return e;
    };
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j)
            for (std::size_t k = j + 1; k < dim(); ++k) {
                Vector s = bracket(unit(i), table_[j][k]);
                Vector t = bracket(unit(j), table_[k][i]);
                Vector u = bracket(unit(k), table_[i][j]);
                for (std::size_t c = 0; c < dim(); ++c)
                    if (!is_zero(s[c] + t[c] + u[c]))
                        return std::array<std::size_t, 3>{i, j, k};
            }
    return std::nullopt;
}

GradedSpace LieAlgebra::space() const
{
    std::vector<BasisElement> b;
    for (const auto& n : names_)
        b.push_back({n, 0});
    return GradedSpace(b, Grading::homological);
}

std::vector<BracketEntry> LieAlgebra::entries() const
{
    std::vector<BracketEntry> out;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j) {
            BracketEntry e{{i, j}, {}};
            for (std::size_t k = 0; k < dim(); ++k)
                if (!is_zero(table_[i][j][k]))
                    e.output.emplace_back(k, table_[i][j][k]);
            if (!e.output.empty())
                out.push_back(e);
        }
    return out;
}

LInftyStructure LieAlgebra::to_linfty(int weight_cap) const
{
    return LInftyStructure::from_brackets(space(), entries(), std::max(weight_cap, 2));
}

}  // namespace linf
