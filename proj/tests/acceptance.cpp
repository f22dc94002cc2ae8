#include "oracles.hpp"

#include "linf/ce.hpp"
#include "linf/coefficient.hpp"
#include "linf/cup_def.hpp"
#include "linf/extensions.hpp"
#include "linf/lie_models.hpp"
#include "linf/model_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace linf;
using namespace testing;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

Vector unit(std::size_t n, std::size_t i)
{
    Vector e(n);
    e[i] = 1;
    return e;
}

std::string join_dims(const std::map<int, std::size_t>& m)
{
    std::ostringstream s;
    bool first = true;
    for (const auto& [k, v] : m) {
        s << (first ? "" : " ") << k << ":" << v;
        first = false;
    }
    return s.str();
}

Monomial random_monomial(const FreeCommAlgebra& a, std::mt19937& rng, int weight)
{
    for (;;) {
        Monomial m = a.unit();
        for (int k = 0; k < weight; ++k)
            ++m[rng() % a.size()];
        bool ok = true;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto& g = a.generator(i);
            int cap = g.max_exponent ? g.max_exponent : ((g.degree % 2) ? 1 : 0);
            if (cap && m[i] > cap)
                ok = false;
        }
        if (ok)
            return m;
    }
}

Outcome soundness()
{
    const std::vector<std::string> names = {"sl2", "h3", "aff1", "abelian2", "s2-model", "wedge-n3-N1"};
    std::vector<LInftyStructure> models;
    for (const auto& n : names) {
        Model m = load_model(std::string(LINF_FIXTURE_DIR) + "/" + n + ".json");
        models.push_back(*m.structure);
    }
    std::mt19937 rng(7);
    Outcome out;
    int instances = 0, failures = 0, jacobi_terms = 0, d2_checks = 0;
    auto fail = [&](const std::string& what, std::size_t model) {
        ++failures;
        if (out.detail.empty())
            out.detail = what + " on " + names[model];
    };
    while (instances < 200) {
        const std::size_t which = static_cast<std::size_t>(instances) % models.size();
        const auto& v = models[which];
        if (!check_linfty(v).ok)
            fail("m^2", which);
        AlgebraPtr alg = v.algebra();
        const int cap = v.weight_cap();
        DerivationSpace ds(alg, false);
        std::vector<int> degrees;
        for (int k = -6; k <= 6; ++k)
            if (ds.dim(k) && ds.complete(k))
                degrees.push_back(k);
        auto random_der = [&]() {
            int k = degrees[rng() % degrees.size()];
            Vector c(ds.dim(k));
            for (auto& q : c)
                q = random_q(rng, 2);
            return ds.element(k, c);
        };
        Derivation x = random_der(), y = random_der(), z = random_der();

        Q s = parity_sign(static_cast<long long>(x.degree) * y.degree);
        if (!(commutator(x, y) == commutator(y, x) * (-s)))
            fail("antisymmetry", which);

        Derivation j = commutator(x, commutator(y, z)) - commutator(commutator(x, y), z) -
                       commutator(y, commutator(x, z)) * s;
        for (int w = 0; w < cap; ++w) {
            if (!j.weight_component(w).is_zero())
                fail("Jacobi", which);
            ++jacobi_terms;
        }

        int wa = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, cap - 1)));
        Monomial ma = random_monomial(*alg, rng, std::min(wa, cap - 1));
        Monomial mb = random_monomial(*alg, rng, 1);
        Element ea, eb;
        ea.add(ma, 1);
        eb.add(mb, 1);
        Element lhs = x.apply(alg->mul(ea, eb));
        Element rhs = alg->mul(x.apply(ea), eb) +
                      alg->mul(ea, x.apply(eb)) * Q(parity_sign(static_cast<long long>(x.degree) * alg->degree(ma)));
        if (!(lhs == rhs))
            fail("Leibniz", which);

        if (ds.complete(x.degree + 1) && ds.complete(x.degree + 2)) {
            if (!ce_differential(v, ce_differential(v, x)).is_zero())
                fail("d^2", which);
            ++d2_checks;
        }
        ++instances;
    }
    out.ok = failures == 0;
    out.detail = std::to_string(instances) + " instances over " + std::to_string(models.size()) + " fixtures, " +
                 std::to_string(jacobi_terms) + " Jacobi weight components, " + std::to_string(d2_checks) +
                 " d^2 checks, " + std::to_string(failures) + " failures" + (out.detail.empty() ? "" : " (first: " + out.detail + ")");
    return out;
}

Outcome classical_oracle()
{
    Outcome out;
    int algebras = 0;
    for (const auto& [name, g] : lie_matrix()) {
        const int n = static_cast<int>(g.dim());
        auto v = g.to_linfty(std::max(2, n));
        CEOptions o;
        o.brackets = false;
        auto t = ce_cohomology(v, -1, n - 1, o);
        auto oracle = ClassicalCE(g).dims(static_cast<std::size_t>(n));
        for (int k = 0; k <= n; ++k) {
            const auto* row = t.row(k - 1);
            if (!row || !row->safe || row->dim != oracle[static_cast<std::size_t>(k)]) {
                out.ok = false;
                out.detail += " mismatch " + name + " H^" + std::to_string(k);
            }
        }
        ++algebras;
    }
    auto sl = ce_cohomology(sl2().to_linfty(3), -1, 2);
    for (const auto& r : sl.rows)
        if (r.dim) {
            out.ok = false;
            out.detail += " sl2 nonzero";
        }
    auto h = ce_cohomology(h3().to_linfty(3), -1, 2);
    if (h.row(-1)->dim != 1) {
        out.ok = false;
        out.detail += " h3 H^0 != 1";
    }
    out.detail = std::to_string(algebras) + " algebras, sl2 zero, h3 H^0 = " + std::to_string(h.row(-1)->dim) + out.detail;
    return out;
}

Outcome s2_baut()
{
    GradedSpace space({{"a", 1}, {"b", 2}}, Grading::homological);
    auto v = LInftyStructure::from_brackets(space, {BracketEntry{{0, 0}, {{1, -2}}}}, 4);
    auto t = ce_cohomology(v, -3, 3);
    std::map<int, std::size_t> dims;
    bool ok = t.unsafe_degrees().empty();
    for (const auto& r : t.rows) {
        dims[r.derivation_degree] = r.dim;
        if (r.dim != ((r.derivation_degree == -3 || r.derivation_degree == 0) ? 1u : 0u))
            ok = false;
    }
    auto b = baut_model(v, -3, 3);
    bool acts = false;
    for (const auto& a : b.action)
        if (a.target_degree == -3 && !a.value.empty() && !is_zero(a.value[0]))
            acts = true;
    return {ok && acts, "dims " + join_dims(dims) + ", Euler action on degree -3 " + (acts ? "nonzero" : "zero")};
}

std::vector<Vector> random_basis(std::mt19937& rng, std::size_t n)
{
    for (;;) {
        std::vector<Vector> b(n, Vector(n));
        for (auto& v : b)
            for (auto& q : v)
                q = random_q(rng, 2);
        if (independent_subset(n, b).size() == n)
            return b;
    }
}

Outcome extension_roundtrip()
{
    struct Case {
        LieAlgebra g;
        std::vector<Vector> ideal;
    };
    const LieAlgebra filiform({"x", "y", "z", "w"}, {entry(0, 1, {{2, 1}}), entry(0, 2, {{3, 1}})});
    std::vector<Case> cases{
        {h3(), {unit(3, 2)}},
        {aff1(), {unit(2, 1)}},
        {solvable3(-1), {unit(3, 1), unit(3, 2)}},
        {solvable3(frac(1, 2)), {unit(3, 2)}},
        {aff1_plus_line(), {unit(3, 1), unit(3, 2)}},
        {filiform, {unit(4, 2), unit(4, 3)}},
        {filiform, {unit(4, 3)}},
        {filiform, {unit(4, 1), unit(4, 2), unit(4, 3)}},
        {gl2(), {unit(4, 3)}},
        {abelian(3), {unit(3, 0), unit(3, 1)}},
    };
    std::mt19937 rng(11);
    int count = 0, good = 0;
    for (int round = 0; round < 5; ++round)
        for (const auto& c : cases) {
            const std::size_t n = c.g.dim();
            auto b = random_basis(rng, n);
            std::vector<std::string> names;
            for (std::size_t k = 0; k < n; ++k)
                names.push_back("n" + std::to_string(k + 1));
            auto v = change_basis(c.g.to_linfty(2), b, names);
            RationalMatrix p = RationalMatrix::from_columns(n, b);
            std::vector<Vector> ideal;
            for (const auto& x : c.ideal)
                ideal.push_back(*solve(p, x));
            ++count;
            if (!is_ideal(v, ideal))
                continue;
            ExtensionData e = mc_from_extension(v, ideal);
            std::vector<Vector> coords;
            for (std::size_t k = e.base.dim(); k < n; ++k)
                coords.push_back(unit(n, k));
            if (check_linfty(e.total).ok && extension_from_mc(e.base, e.fiber, e.xi) == e &&
                mc_from_extension(e.total, coords) == e)
                ++good;
        }

    auto u = LieAlgebra({"x", "y"}, {}).to_linfty(2);
    auto i = LieAlgebra({"z"}, {}).to_linfty(2);
    AlgebraPtr t = total_algebra(u, i, 2);
    Derivation xi(t, 1);
    xi.values[2].add({1, 1, 0}, -1);
    ExtensionData heis = extension_from_mc(u, i, xi);
    ClassicalComponents cc = classical_components(heis);
    bool f1_zero = std::all_of(cc.f1.begin(), cc.f1.end(), [](const auto& f) { return f.is_zero(); });
    bool f2_symplectic = cc.f2.size() == 1 && cc.f2.count({0, 1}) && cc.f2.at({0, 1}) == Vector{1};
    bool heis_ok = heis.total.m().values == h3().to_linfty(2).m().values && f1_zero && f2_symplectic && cc.cocycle &&
                   cc.reconstructs;
    return {good == 50 && count == 50 && heis_ok,
            std::to_string(good) + "/" + std::to_string(count) + " roundtrips, Heisenberg f1 " +
                (f1_zero ? "= 0" : "!= 0") + ", f2 " + (f2_symplectic ? "= x*y" : "unexpected")};
}

Outcome universal()
{
    Outcome out;
    for (const auto& [name, v] :
         std::vector<std::pair<std::string, LInftyStructure>>{{"abelian1", abelian(1).to_linfty(2)}, {"h3", h3().to_linfty(3)}}) {
        UniversalExtension u = universal_extension(v);
        bool ok = u.m1_iso_on_suspension && u.quasi_isomorphism && u.truncated_homology == u.total_homology &&
                  check_linfty(u.extension.total).ok;
        out.ok = out.ok && ok;
        out.detail += (out.detail.empty() ? "" : "; ") + name + " H " + join_dims(u.total_homology) +
                      (u.m1_iso_on_suspension ? ", m1 iso" : ", m1 not iso");
    }
    return out;
}

Outcome ceh3()
{
    Outcome out;
    const std::vector<std::pair<std::string, NilpotentBase>> bases = {
        {"point(2)", NilpotentBase({"a"}, {2}, {})},
        {"a(2)->b(3)", NilpotentBase({"a", "b"}, {2, 3}, {}, {Vector{0, 1}, Vector{0, 0}})},
    };
    for (const auto& [name, a] : bases) {
        const int lo = -2, hi = 2;
        auto l = quillen_model(a, 3);
        auto h = harrison_cohomology(l, lo, hi);
        CEOptions opts;
        opts.truncated = true;
        opts.brackets = false;
        auto ce = ce_cohomology(l.to_linfty(2), lo, hi, opts);
        int compared = 0;
        std::map<int, std::size_t> dims;
        for (int k = lo; k <= hi; ++k) {
            const auto* row = ce.row(k);
            if (!row || !row->safe || std::count(h.unsafe.begin(), h.unsafe.end(), k))
                continue;
            if (row->dim != h.truncated.at(k))
                out.ok = false;
            dims[k] = row->dim;
            ++compared;
        }
        if (compared < 3)
            out.ok = false;
        out.detail += (out.detail.empty() ? "" : "; ") + name + " " + join_dims(dims);
    }
    return out;
}

Outcome weak_d()
{
    Outcome out;
    std::string dims;
    for (const auto& [name, g] : std::vector<std::pair<std::string, LieAlgebra>>{
             {"h3", h3()}, {"r3(-1)", solvable3(-1)}, {"aff1+Q", aff1_plus_line()}}) {
        auto t = induced_cohomology_bracket(g.to_linfty(3), 0, 3);
        std::size_t total = 0;
        for (const auto& [k, d] : t.dims)
            total += d;
        if (!t.unsafe.empty() || !t.all_zero() || total == 0)
            out.ok = false;
        dims += (dims.empty() ? "" : ", ") + name + " " + std::to_string(t.entries.size()) + " brackets";
    }
    int lifts = 0, tried = 0;
    for (const auto& g : {h3(), solvable3(-1), sl2(), aff1()}) {
        auto v = g.to_linfty(3);
        DerivationSpace ds(v.algebra(), true);
        for (const auto& c : rank_kernel(ad_matrix(ds, v.m(), 0)).kernel_basis) {
            Derivation theta = ds.element(0, c);
            for (int k = 1; k <= 4; ++k) {
                ExpLiftCheck chk = exp_lift(v, theta, k);
                ++tried;
                if (chk.automorphism && chk.commutes && chk.compatible)
                    ++lifts;
            }
        }
    }
    if (tried == 0 || lifts != tried)
        out.ok = false;
    out.detail = dims + " all zero; exp lifts " + std::to_string(lifts) + "/" + std::to_string(tried);
    return out;
}

Outcome wedge()
{
    auto start = std::chrono::steady_clock::now();
    auto r = wedge_cohomology(1, 3, 10, -6, 9);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = r.vanishes_above_two && r.arity_two_degree.has_value() && secs < 60.0;
    std::ostringstream s;
    s << "H^k = 0 for k > 2" << (r.vanishes_above_two ? "" : " FAILS") << ", arity 2 in degree "
      << (r.arity_two_degree ? std::to_string(*r.arity_two_degree) : "none") << " dim " << r.arity_two_dim << ", "
      << r.unsafe.size() << " unsafe rows, " << static_cast<int>(secs * 1000) << " ms";
    return {ok, s.str()};
}

Outcome deformations()
{
    auto v = abelian(2).to_linfty(2);
    DefReport eps = deformation_set(v, NilpotentBase::truncated_polynomial(1));
    DefReport t3 = deformation_set(v, NilpotentBase::truncated_polynomial(2));
    bool lifts = t3.dimension == eps.dimension &&
                 std::all_of(t3.obstructed_at.begin(), t3.obstructed_at.end(), [](int x) { return x == 0; }) &&
                 t3.obstructed_at.size() == t3.dimension;
    return {eps.dimension == 2 && lifts && eps.safe && t3.safe,
            "Def over eps " + std::to_string(eps.dimension) + ", " + std::to_string(t3.obstructed_at.size()) +
                " first-order classes " + (lifts ? "lift" : "do not all lift") + " to t^3"};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"sign and structure soundness", soundness},
        {"classical CE oracle", classical_oracle},
        {"S2 Baut model", s2_baut},
        {"extension/MC roundtrip", extension_roundtrip},
        {"universal extension", universal},
        {"CE vs Harrison", ceh3},
        {"induced cup brackets and exp lifts", weak_d},
        {"wedge of spheres", wedge},
        {"deformation functor", deformations},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %zu: %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += o.ok ? 0 : 1;
    }
    return failed ? 1 : 0;
}
