#include "linf/cup_def.hpp"

#include "linf/errors.hpp"

#include <algorithm>

namespace linf {

namespace {

void accumulate(Derivation& into, const Derivation& d, const Q& c)
{
    if (d.is_zero() || is_zero(c))
        return;
    if (into.is_zero())
        into = d * c;
    else
        into += d * c;
}

void require_complete(const DerivationSpace& ds, std::vector<int> degrees)
{
    std::vector<int> bad;
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    for (int d : degrees)
        if (!ds.complete(d))
            bad.push_back(d);
    if (!bad.empty())
        throw UnsafeWindow(bad);
}

std::string format_cochain(const NilpotentBase& a, const ACochain& x)
{
    std::string s;
    for (std::size_t r = 0; r < x.size(); ++r)
        if (!x[r].is_zero())
            s += (s.empty() ? "" : " + ") + a.name(r) + "*(" + x[r].format() + ")";
    return s.empty() ? "0" : s;
}

ACochain restrict_to(const ACochain& x, const std::vector<std::size_t>& kept)
{
    ACochain out;
    for (auto k : kept)
        out.push_back(x[k]);
    return out;
}

ACochain extend_from(const ACochain& x, const std::vector<std::size_t>& kept, const ACochain& zero)
{
    ACochain out = zero;
    for (std::size_t i = 0; i < kept.size(); ++i)
        out[kept[i]] = x[i];
    return out;
}

std::vector<std::size_t> below_level(const NilpotentBase& a, int k)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a.filtration_level(i) < k)
            out.push_back(i);
    return out;
}

int max_level(const NilpotentBase& a)
{
    int l = 0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        l = std::max(l, a.filtration_level(i));
    return l;
}

}  // namespace

ACochain zero_cochain(const LInftyStructure& i, const NilpotentBase& a)
{
    return ACochain(a.dim(), Derivation(i.algebra(), 0));
}

bool is_zero(const ACochain& x)
{
    return std::all_of(x.begin(), x.end(), [](const Derivation& d) { return d.is_zero(); });
}

ACochain add(const ACochain& x, const ACochain& y, const Q& c)
{
    if (x.size() != y.size())
        throw LengthMismatch("cochains over different bases");
    ACochain out = x;
    for (std::size_t r = 0; r < x.size(); ++r)
        accumulate(out[r], y[r], c);
    return out;
}

ACochain a_bracket(const NilpotentBase& a, const ACochain& x, const ACochain& y)
{
    if (x.size() != a.dim() || y.size() != a.dim())
        throw LengthMismatch("cochain length differs from the base dimension");
    ACochain out(a.dim(), Derivation(x.empty() ? nullptr : x[0].algebra, 0));
    for (std::size_t r = 0; r < a.dim(); ++r) {
        if (x[r].is_zero())
            continue;
        for (std::size_t s = 0; s < a.dim(); ++s) {
            if (y[s].is_zero())
                continue;
            const Vector& p = a.product(r, s);
            if (std::all_of(p.begin(), p.end(), [](const Q& q) { return is_zero(q); }))
                continue;
            Derivation br = commutator(x[r], y[s]);
            const Q sign = parity_sign(static_cast<long long>(x[r].degree) * a.degree(s));
            for (std::size_t k = 0; k < a.dim(); ++k)
                if (!is_zero(p[k]))
                    accumulate(out[k], br, sign * p[k]);
        }
    }
    return out;
}

ACochain a_differential(const NilpotentBase& a, const Derivation& m, const ACochain& x)
{
    if (x.size() != a.dim())
        throw LengthMismatch("cochain length differs from the base dimension");
    ACochain out(a.dim(), Derivation(m.algebra, 0));
    for (std::size_t r = 0; r < a.dim(); ++r) {
        if (x[r].is_zero())
            continue;
        const Vector& d = a.differential(r);
        for (std::size_t k = 0; k < a.dim(); ++k)
            if (!is_zero(d[k]))
                accumulate(out[k], x[r], d[k]);
        accumulate(out[r], commutator(m, x[r]), parity_sign(a.degree(r)));
    }
    return out;
}

ACochain a_mc_residual(const NilpotentBase& a, const Derivation& m, const ACochain& xi)
{
    return add(a_differential(a, m, xi), a_bracket(a, xi, xi), frac(1, 2));
}

void check_deformation_shape(const NilpotentBase& a, const ACochain& xi, int total_degree)
{
    if (xi.size() != a.dim())
        throw LengthMismatch("cochain length differs from the base dimension");
    for (std::size_t r = 0; r < a.dim(); ++r) {
        if (xi[r].is_zero())
            continue;
        if (xi[r].degree != total_degree - a.degree(r))
            throw DegreeMismatch("component on " + a.name(r) + " has degree " + std::to_string(xi[r].degree) +
                                 ", expected " + std::to_string(total_degree - a.degree(r)));
        if (xi[r].has_constant_term())
            throw ValidationError("component on " + a.name(r) + " has a constant term");
    }
}

bool is_deformation(const LInftyStructure& i, const NilpotentBase& a, const ACochain& xi)
{
    check_deformation_shape(a, xi, 1);
    return is_zero(a_mc_residual(a, i.m(), xi));
}

ACochain gauge_action(const NilpotentBase& a, const Derivation& m, const ACochain& eta, const ACochain& xi)
{
    check_deformation_shape(a, eta, 0);
    // exp(eta).xi = xi + sum_{n>=0} ad_eta^n ([eta, xi] - D eta) / (n+1)!
    ACochain term = add(a_bracket(a, eta, xi), a_differential(a, m, eta), Q(-1));
    ACochain out = xi;
    const int bound = a.nilpotency_order() + 2;
    for (int n = 0; !is_zero(term); ++n) {
        if (n > bound)
            throw ValidationError("gauge series does not terminate");
        out = add(out, term, Q(1) / factorial(n + 1));
        term = a_bracket(a, eta, term);
    }
    return out;
}

TotalComplex total_complex(const LInftyStructure& i, const NilpotentBase& a, int lo, int hi, bool truncated)
{
    DerivationSpace ds(i.algebra(), truncated);
    TotalComplex t;
    t.window = CochainWindow(lo, hi);
    for (int deg = lo; deg <= hi; ++deg) {
        std::vector<std::pair<std::size_t, std::size_t>> idx;
        std::vector<std::string> labels;
        for (std::size_t r = 0; r < a.dim(); ++r) {
            const int dd = deg - a.degree(r);
            const auto names = ds.labels(dd);
            for (std::size_t j = 0; j < names.size(); ++j) {
                idx.emplace_back(r, j);
                labels.push_back(a.name(r) + " (x) " + names[j]);
            }
            if (!ds.complete(dd))
                t.safe = false;
        }
        t.index.push_back(std::move(idx));
        t.window.set_basis(deg, std::move(labels));
    }
    for (int deg = lo; deg < hi; ++deg) {
        const auto& cols = t.index[deg - lo];
        const auto& rows = t.index[deg + 1 - lo];
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> row_of;
        for (std::size_t k = 0; k < rows.size(); ++k)
            row_of[rows[k]] = k;
        RationalMatrix mat(rows.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            auto [r, j] = cols[c];
            ACochain x = zero_cochain(i, a);
            x[r] = ds.basis_element(deg - a.degree(r), j);
            ACochain dx = a_differential(a, i.m(), x);
            for (std::size_t k = 0; k < a.dim(); ++k) {
                if (dx[k].is_zero())
                    continue;
                Vector v = ds.coordinates(dx[k], deg + 1 - a.degree(k));
                for (std::size_t q = 0; q < v.size(); ++q)
                    if (!is_zero(v[q]))
                        mat(row_of.at({k, q}), c) = v[q];
            }
        }
        t.window.set_differential(deg, std::move(mat));
    }
    return t;
}

ACochain total_element(const LInftyStructure& i, const NilpotentBase& a, const TotalComplex& t, int degree,
                       const Vector& coords, bool truncated)
{
    DerivationSpace ds(i.algebra(), truncated);
    const auto& idx = t.index.at(degree - t.window.lo());
    if (coords.size() != idx.size())
        throw LengthMismatch("total complex coordinates");
    ACochain x = zero_cochain(i, a);
    for (std::size_t c = 0; c < idx.size(); ++c)
        if (!is_zero(coords[c]))
            accumulate(x[idx[c].first], ds.basis_element(degree - a.degree(idx[c].first), idx[c].second), coords[c]);
    return x;
}

NilpotentBase quotient_by_power(const NilpotentBase& a, int k)
{
    const auto kept = below_level(a, k);
    std::vector<std::size_t> pos(a.dim(), a.dim());
    for (std::size_t q = 0; q < kept.size(); ++q)
        pos[kept[q]] = q;
    auto project = [&](const Vector& v) {
        Vector out(kept.size());
        for (std::size_t q = 0; q < kept.size(); ++q)
            out[q] = v[kept[q]];
        return out;
    };
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::vector<Vector> d;
    for (auto r : kept) {
        names.push_back(a.name(r));
        degrees.push_back(a.degree(r));
        d.push_back(project(a.differential(r)));
    }
    std::vector<NilpotentBase::Product> products;
    for (std::size_t p = 0; p < kept.size(); ++p)
        for (std::size_t q = p; q < kept.size(); ++q) {
            Vector v = project(a.product(kept[p], kept[q]));
            NilpotentBase::Product prod{p, q, {}};
            for (std::size_t s = 0; s < v.size(); ++s)
                if (!is_zero(v[s]))
                    prod.output.emplace_back(s, v[s]);
            if (!prod.output.empty())
                products.push_back(std::move(prod));
        }
    return NilpotentBase(names, degrees, products, d);
}

LiftResult lift_square_zero(const LInftyStructure& i, const NilpotentBase& a, const std::vector<std::size_t>& kernel,
                            const ACochain& xi_b)
{
    if (a.has_differential())
        throw ValidationError("lifting is implemented for bases without differential");
    check_deformation_shape(a, xi_b, 1);
    std::vector<bool> in_k(a.dim(), false);
    for (auto k : kernel) {
        if (k >= a.dim())
            throw ValidationError("kernel index out of range");
        in_k[k] = true;
    }
    for (auto k : kernel) {
        if (!xi_b[k].is_zero())
            throw ValidationError("deformation over the quotient has a component on " + a.name(k));
        for (std::size_t r = 0; r < a.dim(); ++r) {
            const Vector& p = a.product(r, k);
            if (std::any_of(p.begin(), p.end(), [](const Q& q) { return !is_zero(q); }))
                throw IdealViolation("not a small extension: " + a.name(r) + "*" + a.name(k) + " != 0");
        }
    }
    const Derivation& m = i.m();
    ACochain res = a_mc_residual(a, m, xi_b);
    for (std::size_t r = 0; r < a.dim(); ++r)
        if (!in_k[r] && !res[r].is_zero())
            throw NotMaurerCartan(format_cochain(a, res));

    DerivationSpace ds(i.algebra(), true);
    std::vector<int> needed;
    for (auto k : kernel)
        for (int e = 1 - a.degree(k); e <= 2 - a.degree(k); ++e)
            needed.push_back(e);
    require_complete(ds, needed);

    LiftResult out;
    out.lift = xi_b;
    out.lifted = true;
    for (auto k : kernel) {
        if (res[k].is_zero())
            continue;
        const int deg = 1 - a.degree(k);
        Vector rhs = ds.coordinates(res[k], deg + 1);
        for (auto& q : rhs)
            q *= -parity_sign(a.degree(k));
        auto sol = solve(ad_matrix(ds, m, deg), rhs);
        if (sol) {
            out.lift[k] = ds.element(deg, *sol);
            continue;
        }
        out.lifted = false;
        out.obstruction.emplace_back(k, ds.coordinates(res[k], deg + 1));
    }
    if (!out.lifted)
        out.lift.clear();
    return out;
}

DefReport deformation_set(const LInftyStructure& i, const NilpotentBase& a)
{
    DefReport rep;
    rep.infinitesimal = a.infinitesimal();
    if (rep.infinitesimal) {
        TotalComplex t = total_complex(i, a, 0, 2);
        rep.safe = t.safe;
        auto h = cohomology(t.window, 1);
        rep.dimension = h.dim;
        for (const auto& v : h.representatives)
            rep.representatives.push_back(total_element(i, a, t, 1, v));
        return rep;
    }
    if (a.has_differential())
        throw ValidationError("higher-order deformations are implemented for bases without differential");
    const NilpotentBase first = quotient_by_power(a, 2);
    const auto first_kept = below_level(a, 2);
    TotalComplex t = total_complex(i, first, 0, 2);
    rep.safe = t.safe;
    auto h = cohomology(t.window, 1);
    rep.dimension = h.dim;
    const int top = max_level(a);
    for (const auto& v : h.representatives) {
        ACochain xi = extend_from(total_element(i, first, t, 1, v), first_kept, zero_cochain(i, a));
        rep.representatives.push_back(xi);
        int failed = 0;
        for (int j = 2; j <= top && failed == 0; ++j) {
            const NilpotentBase aj = quotient_by_power(a, j + 1);
            const auto kept = below_level(a, j + 1);
            std::vector<std::size_t> kernel;
            for (std::size_t q = 0; q < kept.size(); ++q)
                if (a.filtration_level(kept[q]) == j)
                    kernel.push_back(q);
            LiftResult l = lift_square_zero(i, aj, kernel, restrict_to(xi, kept));
            if (!l.lifted)
                failed = j;
            else
                xi = extend_from(l.lift, kept, zero_cochain(i, a));
        }
        rep.obstructed_at.push_back(failed);
    }
    return rep;
}

EquivalenceResult gauge_equivalent(const LInftyStructure& i, const NilpotentBase& a, const ACochain& x,
                                   const ACochain& y)
{
    if (!is_deformation(i, a, x))
        throw NotMaurerCartan(format_cochain(a, a_mc_residual(a, i.m(), x)));
    if (!is_deformation(i, a, y))
        throw NotMaurerCartan(format_cochain(a, a_mc_residual(a, i.m(), y)));
    const Derivation& m = i.m();
    DerivationSpace ds(i.algebra(), true);
    std::vector<int> needed;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (int e = -a.degree(r); e <= 1 - a.degree(r); ++e)
            needed.push_back(e);
    require_complete(ds, needed);

    EquivalenceResult out;
    bool ambiguous = false;
    ACochain current = x;
    for (int j = 1; j <= max_level(a); ++j) {
        std::vector<std::size_t> level;
        for (std::size_t r = 0; r < a.dim(); ++r)
            if (a.filtration_level(r) == j)
                level.push_back(r);
        // columns: eta components on level j; rows: degree-1 components on level j
        std::vector<std::pair<std::size_t, std::size_t>> cols;
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> row_of;
        for (auto r : level) {
            for (std::size_t q = 0; q < ds.dim(-a.degree(r)); ++q)
                cols.emplace_back(r, q);
            for (std::size_t q = 0; q < ds.dim(1 - a.degree(r)); ++q)
                row_of.emplace(std::pair(r, q), row_of.size());
        }
        RationalMatrix mat(row_of.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            ACochain eta = zero_cochain(i, a);
            eta[cols[c].first] = ds.basis_element(-a.degree(cols[c].first), cols[c].second);
            ACochain d = a_differential(a, m, eta);
            for (auto r : level) {
                if (d[r].is_zero())
                    continue;
                Vector v = ds.coordinates(d[r], 1 - a.degree(r));
                for (std::size_t q = 0; q < v.size(); ++q)
                    mat(row_of.at({r, q}), c) = -v[q];
            }
        }
        ACochain delta = add(y, current, Q(-1));
        Vector rhs(row_of.size());
        for (auto r : level) {
            if (delta[r].is_zero())
                continue;
            Vector v = ds.coordinates(delta[r], 1 - a.degree(r));
            for (std::size_t q = 0; q < v.size(); ++q)
                rhs[row_of.at({r, q})] = v[q];
        }
        auto sol = solve(mat, rhs);
        if (!sol) {
            out.verdict = ambiguous ? Verdict::undecided : Verdict::not_equivalent;
            out.steps.clear();
            return out;
        }
        if (rank(mat) < cols.size())
            ambiguous = true;
        ACochain eta = zero_cochain(i, a);
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (!is_zero((*sol)[c]))
                accumulate(eta[cols[c].first], ds.basis_element(-a.degree(cols[c].first), cols[c].second),
                           (*sol)[c]);
        if (!is_zero(eta)) {
            current = gauge_action(a, m, eta, current);
            out.steps.push_back(eta);
        }
    }
    out.verdict = is_zero(add(y, current, Q(-1))) ? Verdict::equivalent
                  : ambiguous                     ? Verdict::undecided
                                                  : Verdict::not_equivalent;
    if (out.verdict != Verdict::equivalent)
        out.steps.clear();
    return out;
}

ExpLiftCheck exp_lift(const LInftyStructure& i, const Derivation& theta, int k)
{
    if (theta.degree != 0)
        throw DegreeMismatch("infinitesimal automorphisms have degree 0");
    if (theta.has_constant_term())
        throw ValidationError("infinitesimal automorphism has a constant term");
    if (!commutator(i.m(), theta).is_zero())
        throw ValidationError("theta is not a cocycle: [m, theta] != 0");
    if (k < 1)
        throw ValidationError("lift order must be positive");

    const AlgebraPtr base = i.algebra();
    auto lifted = [&](int order) {
        std::vector<Generator> gens{{"t", 0, false, order}};
        for (const auto& g : base->generators())
            gens.push_back(g);
        auto alg = std::make_shared<const FreeCommAlgebra>(gens, base->weight_cap());
        auto move = [&](const Element& e, int t_power) {
            Element out;
            out.truncated = e.truncated;
            for (const auto& [mono, c] : e.terms) {
                Monomial n{t_power};
                n.insert(n.end(), mono.begin(), mono.end());
                out.add(n, c);
            }
            return out;
        };
        Derivation th(alg, 0), mm(alg, i.m().degree);
        for (std::size_t g = 0; g < base->size(); ++g) {
            th.values[g + 1] = move(theta.values[g], 1);
            mm.values[g + 1] = move(i.m().values[g], 0);
        }
        return std::pair(th, mm);
    };

    auto [th, mm] = lifted(k);
    const AlgebraMap phi = exponential(th);
    const AlgebraMap psi = exponential(th * Q(-1));
    const AlgebraMap id = AlgebraMap::identity(th.algebra);

    ExpLiftCheck out;
    out.automorphism = phi.compose_after(psi).images == id.images && psi.compose_after(phi).images == id.images;
    out.commutes = true;
    for (std::size_t g = 0; g < th.algebra->size(); ++g)
        if (!(phi.apply(mm.values[g]) == mm.apply(phi.images[g])))
            out.commutes = false;

    std::vector<Element> previous;
    if (k == 1) {
        previous = id.images;
    } else {
        auto [th0, mm0] = lifted(k - 1);
        previous = exponential(th0).images;
    }
    out.compatible = true;
    for (std::size_t g = 1; g < th.algebra->size(); ++g) {
        Element reduced;
        for (const auto& [mono, c] : phi.images[g].terms)
            if (mono[0] < k)
                reduced.add(mono, c);
        if (!(reduced == previous[g]))
            out.compatible = false;
    }
    return out;
}

}  // namespace linf
