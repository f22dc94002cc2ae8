#include "linf/extensions.hpp"

#include "linf/errors.hpp"

#include <algorithm>
#include <set>

namespace linf {

namespace {

int homogeneous_degree(const LInftyStructure& v, const Vector& vec, const std::string& name)
{
    std::optional<int> d;
    for (std::size_t i = 0; i < v.dim(); ++i)
        if (!is_zero(vec[i])) {
            if (d && *d != v.degree(i))
                throw NotASubspace("vector " + name + " is not homogeneous");
            d = v.degree(i);
        }
    if (!d)
        throw NotASubspace("zero vector " + name);
    return *d;
}

Element shifted(const Element& e, std::size_t before, std::size_t after, const FreeCommAlgebra& target)
{
    Element out;
    out.truncated = e.truncated;
    for (const auto& [mono, c] : e.terms) {
        Monomial n(before, 0);
        n.insert(n.end(), mono.begin(), mono.end());
        n.resize(n.size() + after, 0);
        if (target.weight(n) > target.weight_cap())
            out.truncated = true;
        else
            out.add(n, c);
    }
    return out;
}

/// Exponent sums over [lo, hi) of a monomial.
int part_weight(const Monomial& m, std::size_t lo, std::size_t hi)
{
    int w = 0;
    for (std::size_t k = lo; k < hi; ++k)
        w += m[k];
    return w;
}

Element project(const Element& e, std::size_t lo, std::size_t hi)
{
    Element out;
    for (const auto& [mono, c] : e.terms)
        out.add(Monomial(mono.begin() + static_cast<long>(lo), mono.begin() + static_cast<long>(hi)), c);
    return out;
}

Vector unit_vector(std::size_t n, std::size_t i)
{
    Vector e(n);
    e[i] = 1;
    return e;
}

bool is_unit_vector(const Vector& v, std::size_t& which)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) {
            ++count;
            which = i;
        }
    return count == 1 && v[which] == 1;
}

struct Adapted {
    LInftyStructure v;
    std::size_t base_dim;
};

Adapted adapted(const LInftyStructure& v, const std::vector<Vector>& ideal, const std::vector<std::string>& ideal_names)
{
    const std::size_t n = v.dim();
    for (const auto& x : ideal)
        if (x.size() != n)
            throw NotASubspace("ideal vector has the wrong length");
    std::vector<Vector> all = ideal;
    for (std::size_t i = 0; i < n; ++i)
        all.push_back(unit_vector(n, i));
    auto chosen = independent_subset(n, all);
    if (std::count_if(chosen.begin(), chosen.end(), [&](std::size_t c) { return c < ideal.size(); }) !=
        static_cast<long>(ideal.size()))
        throw NotASubspace("ideal vectors are linearly dependent");
    std::vector<Vector> basis;
    std::vector<std::string> names;
    for (auto c : chosen)
        if (c >= ideal.size()) {
            basis.push_back(all[c]);
            names.push_back(v.space()[c - ideal.size()].name);
        }
    const std::size_t base_dim = basis.size();
    for (std::size_t k = 0; k < ideal.size(); ++k) {
        basis.push_back(ideal[k]);
        std::size_t which = 0;
        if (k < ideal_names.size())
            names.push_back(ideal_names[k]);
        else if (is_unit_vector(ideal[k], which))
            names.push_back(v.space()[which].name);
        else
            names.push_back("i" + std::to_string(k + 1));
    }
    return {change_basis(v, basis, names), base_dim};
}

bool ideal_in_adapted(const Adapted& a)
{
    const auto& m = a.v.m();
    for (std::size_t u = 0; u < a.base_dim; ++u)
        for (const auto& [mono, c] : m.values[u].terms)
            if (part_weight(mono, a.base_dim, mono.size()) > 0)
                return false;
    return true;
}

GradedSpace sum_space(const LInftyStructure& u, const LInftyStructure& i)
{
    std::vector<BasisElement> basis;
    std::set<std::string> seen;
    for (const auto* s : {&u.space(), &i.space()})
        for (std::size_t k = 0; k < s->dim(); ++k) {
            if (!seen.insert((*s)[k].name).second)
                throw ValidationError("basis name " + (*s)[k].name + " occurs in both base and fiber");
            basis.push_back((*s)[k]);
        }
    return GradedSpace(basis, Grading::homological);
}

void check_xi_shape(const Derivation& xi, std::size_t nu)
{
    if (!xi.is_zero() && xi.degree != 1)
        throw DegreeMismatch("extension cocycle must have degree 1");
    for (std::size_t k = 0; k < xi.values.size(); ++k) {
        if (k < nu && !xi.values[k].is_zero())
            throw ValidationError("extension cocycle must vanish on base generators");
        if (k >= nu)
            for (const auto& [mono, c] : xi.values[k].terms)
                if (part_weight(mono, 0, nu) == 0)
                    throw ValidationError("extension cocycle has a term of base weight 0 on " +
                                          xi.algebra->generator(k).name);
    }
}

}  // namespace

bool ExtensionData::operator==(const ExtensionData& o) const
{
    return base == o.base && fiber == o.fiber && total == o.total && xi == o.xi;
}

LInftyStructure change_basis(const LInftyStructure& v, const std::vector<Vector>& basis,
                             const std::vector<std::string>& names)
{
    const std::size_t n = v.dim();
    if (basis.size() != n || names.size() != n)
        throw LengthMismatch("a change of basis needs dim V vectors and names");
    std::vector<BasisElement> elems;
    for (std::size_t j = 0; j < n; ++j) {
        if (basis[j].size() != n)
            throw NotASubspace("basis vector has the wrong length");
        elems.push_back({names[j], homogeneous_degree(v, basis[j], names[j])});
    }
    if (independent_subset(n, basis).size() != n)
        throw NotASubspace("change of basis is not invertible");
    GradedSpace w(elems, Grading::homological);
    auto walg = LInftyStructure::representing_algebra(w, v.weight_cap());
    auto valg = v.algebra();
    RationalMatrix p = RationalMatrix::from_columns(n, basis);

    // x_k = sum_j P(k, j) x'_j and x'_j = sum_k Pinv(j, k) x_k
    AlgebraMap to_new{valg, walg, {}};
    for (std::size_t k = 0; k < n; ++k) {
        Element e;
        for (std::size_t j = 0; j < n; ++j)
            if (!is_zero(p(k, j)))
                e += walg->gen(j) * p(k, j);
        to_new.images.push_back(e);
    }
    AlgebraMap to_old{walg, valg, std::vector<Element>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        auto col = solve(p, unit_vector(n, k));  // column k of Pinv
        for (std::size_t j = 0; j < n; ++j)
            if (!is_zero((*col)[j]))
                to_old.images[j] += valg->gen(k) * (*col)[j];
    }
    return LInftyStructure::from_derivation(w, conjugate(to_new, v.m(), to_old));
}

bool is_ideal(const LInftyStructure& v, const std::vector<Vector>& ideal)
{
    return ideal_in_adapted(adapted(v, ideal, {}));
}

AlgebraPtr total_algebra(const LInftyStructure& u, const LInftyStructure& i, int weight_cap)
{
    return LInftyStructure::representing_algebra(sum_space(u, i), weight_cap);
}

Element embed_base(const Element& e, AlgebraPtr total)
{
    const std::size_t nu = e.terms.empty() ? 0 : e.terms.begin()->first.size();
    return shifted(e, 0, total->size() - nu, *total);
}

Element embed_fiber(const Element& e, std::size_t base_dim, AlgebraPtr total)
{
    return shifted(e, base_dim, 0, *total);
}

Derivation product_differential(const LInftyStructure& u, const LInftyStructure& i, AlgebraPtr total)
{
    Derivation d(total, 1);
    const std::size_t nu = u.dim();
    for (std::size_t k = 0; k < nu; ++k)
        d.values[k] = shifted(u.m().values[k], 0, i.dim(), *total);
    for (std::size_t k = 0; k < i.dim(); ++k)
        d.values[nu + k] = shifted(i.m().values[k], nu, 0, *total);
    return d;
}

ExtensionData extension_from_mc(const LInftyStructure& u, const LInftyStructure& i, const Derivation& xi)
{
    const GradedSpace space = sum_space(u, i);
    AlgebraPtr total = xi.algebra;
    if (!(*total == *LInftyStructure::representing_algebra(space, total->weight_cap())))
        throw AlgebraMismatch("extension cocycle does not live on the algebra of U (+) I");
    check_xi_shape(xi, u.dim());
    Derivation d0 = product_differential(u, i, total);
    Derivation res = mc_residual(d0, xi);
    if (!res.is_zero())
        throw NotMaurerCartan(res.format());
    Derivation x = xi;
    x.degree = 1;
    return {u, i, LInftyStructure::from_derivation(space, d0 + x), x};
}

ExtensionData mc_from_extension(const LInftyStructure& v, const std::vector<Vector>& ideal,
                                const std::vector<std::string>& ideal_names)
{
    Adapted a = adapted(v, ideal, ideal_names);
    if (!ideal_in_adapted(a))
        throw IdealViolation("subspace is not an L-infinity ideal");
    const std::size_t nu = a.base_dim;
    const std::size_t n = v.dim();
    const auto& m = a.v.m();
    const int cap = v.weight_cap();

    std::vector<BasisElement> ub, ib;
    for (std::size_t k = 0; k < n; ++k)
        (k < nu ? ub : ib).push_back(a.v.space()[k]);
    GradedSpace us(ub, Grading::homological), is(ib, Grading::homological);
    Derivation mu(LInftyStructure::representing_algebra(us, cap), 1);
    Derivation mi(LInftyStructure::representing_algebra(is, cap), 1);
    for (std::size_t k = 0; k < nu; ++k)
        mu.values[k] = project(m.values[k], 0, nu);
    for (std::size_t k = nu; k < n; ++k)
        for (const auto& [mono, c] : m.values[k].terms)
            if (part_weight(mono, 0, nu) == 0)
                mi.values[k - nu].add(Monomial(mono.begin() + static_cast<long>(nu), mono.end()), c);
    LInftyStructure u = LInftyStructure::from_derivation(us, mu);
    LInftyStructure i = LInftyStructure::from_derivation(is, mi);
    Derivation xi = m - product_differential(u, i, a.v.algebra());
    xi.degree = 1;
    return {u, i, a.v, xi};
}

bool has_section(const ExtensionData& e)
{
    const std::size_t nu = e.base.dim();
    for (std::size_t k = nu; k < e.xi.values.size(); ++k)
        for (const auto& [mono, c] : e.xi.values[k].terms)
            if (part_weight(mono, nu, mono.size()) == 0)
                return false;
    return true;
}

ExtensionData split_extension_from_mc(const LInftyStructure& u, const LInftyStructure& i, const Derivation& xi)
{
    ExtensionData e = extension_from_mc(u, i, xi);
    if (!has_section(e))
        throw SectionViolation("the base is not a subalgebra: the cocycle has terms constant in the fiber");
    return e;
}

void check_morphism(const LInftyStructure& w, const LInftyStructure& u, const std::vector<Element>& images)
{
    if (images.size() != u.dim())
        throw NotAMorphism("one image per generator of the target");
    AlgebraMap g{u.algebra(), w.algebra(), images};
    for (std::size_t k = 0; k < u.dim(); ++k) {
        if (!images[k].is_zero() && !w.algebra()->is_homogeneous(images[k], u.algebra()->generator(k).degree))
            throw NotAMorphism("image of " + u.algebra()->generator(k).name + " has the wrong degree");
        for (const auto& [mono, c] : images[k].terms)
            if (w.algebra()->weight(mono) == 0)
                throw NotAMorphism("image of " + u.algebra()->generator(k).name + " has a constant term");
    }
    for (std::size_t k = 0; k < u.dim(); ++k)
        if (!(g.apply(u.m().values[k]) == w.m().apply(images[k])))
            throw NotAMorphism("map does not commute with the differentials on " + u.algebra()->generator(k).name);
}

ExtensionData induced_extension(const ExtensionData& e, const LInftyStructure& w, const std::vector<Element>& g_star)
{
    check_morphism(w, e.base, g_star);
    const std::size_t nu = e.base.dim(), nw = w.dim(), ni = e.fiber.dim();
    AlgebraPtr target = total_algebra(w, e.fiber, e.total.weight_cap());
    AlgebraMap g{e.total.algebra(), target, {}};
    for (std::size_t k = 0; k < nu; ++k)
        g.images.push_back(shifted(g_star[k], 0, ni, *target));
    for (std::size_t k = 0; k < ni; ++k)
        g.images.push_back(target->gen(nw + k));
    Derivation xi(target, 1);
    for (std::size_t k = 0; k < ni; ++k)
        xi.values[nw + k] = g.apply(e.xi.values[nu + k]);
    return extension_from_mc(w, e.fiber, xi);
}

ClassicalComponents classical_components(const ExtensionData& e)
{
    const std::size_t nu = e.base.dim(), ni = e.fiber.dim();
    for (std::size_t k = 0; k < nu; ++k) {
        if (e.base.degree(k) != 0)
            throw AritySupport("classical components need an ungraded Lie base");
        for (const auto& [mono, c] : e.base.m().values[k].terms)
            if (e.base.algebra()->weight(mono) != 2)
                throw AritySupport("classical components need an ungraded Lie base");
    }
    for (std::size_t k = 0; k < ni; ++k)
        if (e.fiber.degree(k) != 0 || !e.fiber.m().values[k].is_zero())
            throw SupportOutsideAffine("fiber is not an abelian Lie algebra in degree 0");
    for (std::size_t k = nu; k < nu + ni; ++k)
        for (const auto& [mono, c] : e.xi.values[k].terms)
            if (part_weight(mono, nu, mono.size()) > 1)
                throw SupportOutsideAffine("cocycle is nonlinear along the fiber");

    ClassicalComponents out;
    auto fiber_part = [&](const Vector& v) { return Vector(v.begin() + static_cast<long>(nu), v.end()); };
    for (std::size_t a = 0; a < nu; ++a) {
        RationalMatrix f(ni, ni);
        for (std::size_t j = 0; j < ni; ++j) {
            Vector col = fiber_part(e.total.bracket({a, nu + j}));
            for (std::size_t r = 0; r < ni; ++r)
                f(r, j) = col[r];
        }
        out.f1.push_back(f);
        for (std::size_t b = a + 1; b < nu; ++b)
            out.f2[{a, b}] = fiber_part(e.total.bracket({a, b}));
    }

    auto f1_of = [&](const Vector& x) {
        RationalMatrix r(ni, ni);
        for (std::size_t a = 0; a < nu; ++a)
            for (std::size_t p = 0; p < ni; ++p)
                for (std::size_t q = 0; q < ni; ++q)
                    r(p, q) += x[a] * out.f1[a](p, q);
        return r;
    };
    auto f2_of = [&](const Vector& x, const Vector& y) {
        Vector r(ni);
        for (const auto& [ab, val] : out.f2)
            for (std::size_t p = 0; p < ni; ++p)
                r[p] += (x[ab.first] * y[ab.second] - x[ab.second] * y[ab.first]) * val[p];
        return r;
    };
    auto ub = [&](std::size_t a, std::size_t b) { return e.base.bracket({a, b}); };

    out.action_is_lie_map = true;
    for (std::size_t a = 0; a < nu; ++a)
        for (std::size_t b = a + 1; b < nu; ++b) {
            RationalMatrix lhs = f1_of(ub(a, b));
            RationalMatrix ab = out.f1[a] * out.f1[b];
            RationalMatrix ba = out.f1[b] * out.f1[a];
            for (std::size_t p = 0; p < ni; ++p)
                for (std::size_t q = 0; q < ni; ++q)
                    if (lhs(p, q) != ab(p, q) - ba(p, q))
                        out.action_is_lie_map = false;
        }

    // cyclic sum of f2([u,v],w) - f1(w) f2(u,v)
    out.cocycle = true;
    for (std::size_t a = 0; a < nu; ++a)
        for (std::size_t b = a + 1; b < nu; ++b)
            for (std::size_t c = b + 1; c < nu; ++c) {
                Vector total(ni);
                const std::array<std::array<std::size_t, 3>, 3> cyc{{{a, b, c}, {b, c, a}, {c, a, b}}};
                for (const auto& t : cyc) {
                    Vector f = f2_of(ub(t[0], t[1]), unit_vector(nu, t[2]));
                    Vector g = out.f1[t[2]].apply(f2_of(unit_vector(nu, t[0]), unit_vector(nu, t[1])));
                    for (std::size_t p = 0; p < ni; ++p)
                        total[p] += f[p] - g[p];
                }
                if (std::any_of(total.begin(), total.end(), [](const Q& q) { return !is_zero(q); }))
                    out.cocycle = false;
            }

    std::vector<std::string> names;
    for (std::size_t k = 0; k < nu + ni; ++k)
        names.push_back(e.total.space()[k].name);
    std::vector<BracketEntry> entries;
    auto push = [&](std::size_t x, std::size_t y, const Vector& v) {
        BracketEntry be{{x, y}, {}};
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!is_zero(v[k]))
                be.output.emplace_back(k, v[k]);
        if (!be.output.empty())
            entries.push_back(be);
    };
    for (std::size_t a = 0; a < nu; ++a) {
        for (std::size_t b = a + 1; b < nu; ++b) {
            Vector v = ub(a, b);
            v.resize(nu + ni);
            Vector f = out.f2[{a, b}];
            for (std::size_t p = 0; p < ni; ++p)
                v[nu + p] = f[p];
            push(a, b, v);
        }
        for (std::size_t j = 0; j < ni; ++j) {
            Vector v(nu + ni);
            for (std::size_t p = 0; p < ni; ++p)
                v[nu + p] = out.f1[a](p, j);
            push(a, nu + j, v);
        }
    }
    LInftyStructure rebuilt = LieAlgebra(names, entries).to_linfty(e.total.weight_cap());
    out.reconstructs = rebuilt.m().values == e.total.m().values;
    return out;
}

ExtensionData gauge_transform(const ExtensionData& e, const Derivation& eta)
{
    if (eta.degree != 0 && !eta.is_zero())
        throw DegreeMismatch("gauge parameter must have degree 0");
    Derivation shape = eta;
    shape.degree = 1;
    check_xi_shape(shape, e.base.dim());
    AlgebraMap phi = exponential(eta);
    AlgebraMap psi = exponential(eta * Q(-1));
    Derivation m = conjugate(phi, e.total.m(), psi);
    Derivation xi = m - product_differential(e.base, e.fiber, e.total.algebra());
    xi.degree = 1;
    return extension_from_mc(e.base, e.fiber, xi);
}

ExtensionData act_on_fiber(const ExtensionData& e, const AlgebraMap& phi, const AlgebraMap& phi_inverse)
{
    check_morphism(e.fiber, e.fiber, phi.images);
    AlgebraMap id = AlgebraMap::identity(e.fiber.algebra());
    if (phi.compose_after(phi_inverse).images != id.images || phi_inverse.compose_after(phi).images != id.images)
        throw NotAMorphism("automorphism and inverse do not compose to the identity");
    const std::size_t nu = e.base.dim();
    AlgebraPtr total = e.total.algebra();
    auto extend = [&](const AlgebraMap& f) {
        AlgebraMap g{total, total, {}};
        for (std::size_t k = 0; k < nu; ++k)
            g.images.push_back(total->gen(k));
        for (const auto& img : f.images)
            g.images.push_back(shifted(img, nu, 0, *total));
        return g;
    };
    Derivation xi = conjugate(extend(phi), e.xi, extend(phi_inverse));
    xi.degree = 1;
    return extension_from_mc(e.base, e.fiber, xi);
}

std::optional<std::size_t> free_orbit_index(const ExtensionData& e, const ExtensionData& other,
                                            const std::vector<std::pair<AlgebraMap, AlgebraMap>>& automorphisms)
{
    for (std::size_t k = 0; k < automorphisms.size(); ++k)
        if (act_on_fiber(e, automorphisms[k].first, automorphisms[k].second) == other)
            return k;
    return std::nullopt;
}

UniversalExtension universal_extension(const LInftyStructure& i, bool truncated)
{
    AlgebraPtr alg = i.algebra();
    const int cap = i.weight_cap();
    if (!truncated) {
        std::vector<int> bad;
        for (const auto& g : alg->generators())
            if (g.degree % 2 == 0)
                bad.push_back(g.degree);
        if (static_cast<int>(alg->size()) > cap)
            bad.push_back(cap);
        if (!bad.empty())
            throw UnsafeWindow(bad);
    }
    DerivationSpace ds(alg, truncated);

    int min_gen = 0, max_gen = 0;
    for (const auto& g : alg->generators()) {
        min_gen = std::min(min_gen, g.degree);
        max_gen = std::max(max_gen, g.degree);
    }
    const int lo = cap * min_gen - max_gen, hi = cap * max_gen - min_gen;

    UniversalExtension out;
    std::vector<BasisElement> ubasis;
    std::vector<int> der_degree;
    std::map<int, std::size_t> first_index;
    for (int d = lo; d <= hi; ++d) {
        first_index[d] = out.basis.size();
        for (std::size_t q = 0; q < ds.dim(d); ++q) {
            out.basis.push_back(ds.basis_element(d, q));
            der_degree.push_back(d);
            ubasis.push_back({"u" + std::to_string(out.basis.size()), -d});
            const auto& b = ds.basis(d)[q];
            if (alg->weight(b.value) == 0)
                out.suspended_fiber.push_back(out.basis.size() - 1);
        }
    }
    const std::size_t nu = out.basis.size(), ni = i.dim();
    const int tcap = cap + 2;
    GradedSpace us(ubasis, Grading::homological);
    LInftyStructure fiber = i.with_cap(tcap);
    LInftyStructure zero_base = LInftyStructure::from_derivation(
        us, Derivation(LInftyStructure::representing_algebra(us, tcap), 1));
    AlgebraPtr total = total_algebra(zero_base, fiber, tcap);

    Derivation xi(total, 1);
    for (std::size_t a = 0; a < nu; ++a)
        for (std::size_t j = 0; j < ni; ++j)
            for (const auto& [mono, c] : out.basis[a].values[j].terms) {
                Monomial n(nu, 0);
                n[a] = 1;
                n.insert(n.end(), mono.begin(), mono.end());
                xi.values[nu + j].add(n, c);
            }

    // m_U is forced by the MC equation: sum_a m_U(x_a) theta_a = -([m_I, xi] + 1/2 [xi, xi])
    Derivation r = mc_residual(product_differential(zero_base, fiber, total), xi);
    std::map<Monomial, std::vector<Element>> by_base;
    for (std::size_t j = 0; j < ni; ++j)
        for (const auto& [mono, c] : r.values[nu + j].terms) {
            Monomial p(mono.begin(), mono.begin() + static_cast<long>(nu));
            Monomial q(mono.begin() + static_cast<long>(nu), mono.end());
            auto& slot = by_base[p];
            slot.resize(ni);
            slot[j].add(q, c);
        }
    AlgebraPtr ualg = zero_base.algebra();
    Derivation mu(ualg, 1);
    for (const auto& [p, values] : by_base) {
        const int deg = 2 - ualg->degree(p);
        Derivation dp = Derivation::from_values(alg, deg, values);
        Vector coords = ds.coordinates(dp, deg);
        for (std::size_t q = 0; q < coords.size(); ++q)
            if (!is_zero(coords[q]))
                mu.values[first_index.at(deg) + q].add(p, -coords[q]);
    }
    LInftyStructure base = LInftyStructure::from_derivation(us, mu);
    if (!check_linfty(base).ok)
        throw ValidationError("derivation dgla structure does not square to zero within the caps");
    out.extension = extension_from_mc(base, fiber, xi);
    const LInftyStructure& v = out.extension.total;

    RationalMatrix m1 = v.differential();
    if (!truncated) {
        RationalMatrix block(ni, out.suspended_fiber.size());
        for (std::size_t r2 = 0; r2 < ni; ++r2)
            for (std::size_t c = 0; c < out.suspended_fiber.size(); ++c)
                block(r2, c) = m1(nu + r2, out.suspended_fiber[c]);
        out.m1_iso_on_suspension = block.rows() == block.cols() && rank(block) == ni;
    }

    for (const auto& [deg, dim] : tangent_cohomology(v))
        if (dim > 0)
            out.total_homology[deg] = dim;

    DerivationSpace bar(alg, true);
    CochainWindow w(lo - 1, hi + 1);
    for (int d = lo - 1; d <= hi + 1; ++d)
        w.set_basis(d, bar.labels(d));
    for (int d = lo - 1; d <= hi; ++d)
        w.set_differential(d, ad_matrix(bar, i.m(), d));

    // chain map bar -> total on basis elements, matched by derivation
    std::map<std::pair<int, std::size_t>, std::size_t> position;
    for (int d = lo; d <= hi; ++d)
        for (std::size_t q = 0; q < bar.dim(d); ++q) {
            Derivation b = bar.basis_element(d, q);
            for (std::size_t a = first_index.at(d); a < nu && der_degree[a] == d; ++a)
                if (out.basis[a] == b)
                    position[{d, q}] = a;
        }

    out.quasi_isomorphism = true;
    for (int d = lo; d <= hi; ++d) {
        auto h = cohomology(w, d);
        if (h.dim > 0)
            out.truncated_homology[-d] = h.dim;
        // images of representatives: cycles, independent modulo boundaries of total
        std::vector<Vector> boundaries;
        for (std::size_t c = 0; c < v.dim(); ++c)
            if (v.degree(c) == -d + 1)
                boundaries.push_back(m1.column(c));
        const std::size_t rb = boundaries.empty() ? 0 : independent_subset(v.dim(), boundaries).size();
        std::vector<Vector> all = boundaries;
        for (const auto& rep : h.representatives) {
            Vector img(v.dim());
            for (std::size_t q = 0; q < rep.size(); ++q)
                if (!is_zero(rep[q]))
                    img[position.at({d, q})] = rep[q];
            Vector dm = m1.apply(img);
            if (std::any_of(dm.begin(), dm.end(), [](const Q& x) { return !is_zero(x); }))
                out.quasi_isomorphism = false;
            all.push_back(img);
        }
        if ((all.empty() ? 0 : independent_subset(v.dim(), all).size()) != rb + h.representatives.size())
            out.quasi_isomorphism = false;
    }
    std::map<int, std::size_t> expected = out.truncated_homology;
    if (truncated)
        for (const auto& [deg, dim] : tangent_cohomology(i))
            if (dim > 0)
                expected[deg] += dim;
    if (out.total_homology != expected)
        out.quasi_isomorphism = false;
    return out;
}

}  // namespace linf
