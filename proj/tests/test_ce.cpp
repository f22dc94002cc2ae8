#include "doctest.h"
#include "oracles.hpp"

#include "linf/ce.hpp"

using namespace linf;
using namespace testing;

namespace {

LInftyStructure s2_model(int cap = 4)
{
    GradedSpace v({{"a", 1}, {"b", 2}}, Grading::homological);
    return LInftyStructure::from_brackets(v, {BracketEntry{{0, 0}, {{1, -2}}}}, cap);
}

std::vector<std::size_t> dims_of(const WhiteheadTable& t)
{
    std::vector<std::size_t> d;
    for (const auto& r : t.rows)
        d.push_back(r.dim);
    return d;
}

}  // namespace

TEST_CASE("S2 model has the Sullivan differential e3 -> e2^2")
{
    auto v = s2_model();
    const auto& alg = *v.algebra();
    CHECK(alg.generator(0).degree == 2);
    CHECK(alg.generator(1).degree == 3);
    CHECK(v.m().values[1] == alg.mul(alg.gen(0), alg.gen(0)));
    CHECK(check_linfty(v).ok);
}

TEST_CASE("derivation bases of small algebras")
{
    auto x = abelian(1).to_linfty(3);
    DerivationSpace full(x.algebra(), false), bar(x.algebra(), true);
    CHECK(full.dim(-1) == 1);
    CHECK(full.dim(0) == 1);
    CHECK(full.dim(1) == 0);
    CHECK(bar.dim(-1) == 0);
    CHECK(bar.dim(0) == 1);
    auto t = ce_cohomology(x, -1, 0);
    CHECK(dims_of(t) == std::vector<std::size_t>{1, 1});

    auto s2 = s2_model(3);
    DerivationSpace d(s2.algebra(), false);
    std::vector<std::vector<std::string>> expect = {
        {"d/db*"},          {"d/da*"},          {"a* d/db*"},           {"a* d/da*", "b* d/db*"},
        {"b* d/da*", "a*^2 d/db*"}, {"a*^2 d/da*", "a* b* d/db*"}, {"a* b* d/da*", "a*^3 d/db*"}};
    for (int k = -3; k <= 3; ++k)
        CHECK(d.labels(k) == expect[static_cast<std::size_t>(k + 3)]);
    auto m2 = ad_matrix(d, s2.m(), -2);
    CHECK(rank(m2) == 1);
    CHECK(m2(0, 0) == -2);
}

TEST_CASE("S2 model cohomology")
{
    auto v = s2_model(4);
    auto t = ce_cohomology(v, -3, 3);
    CHECK(dims_of(t) == std::vector<std::size_t>{1, 0, 0, 1, 0, 0, 0});
    CHECK(t.unsafe_degrees().empty());
    CHECK(t.row(0)->ce_degree == 1);

    CEOptions bar;
    bar.truncated = true;
    auto tb = ce_cohomology(v, -3, 3, bar);
    CHECK(dims_of(tb) == std::vector<std::size_t>{0, 0, 1, 1, 0, 0, 0});

    auto b = baut_model(v, -3, 3);
    REQUIRE(b.cover_rows.size() >= 3);
    std::size_t total = 0;
    for (const auto& r : b.cover_rows) {
        total += r.dim;
        if (r.dim)
            CHECK(r.derivation_degree == -3);
    }
    CHECK(total == 1);
    bool acts = false;
    for (const auto& a : b.action)
        if (a.target_degree == -3 && !a.value.empty() && !is_zero(a.value[0]))
            acts = true;
    CHECK(acts);

    // the Euler derivation a* d/da* + 2 b* d/db* scales d/db* by -2
    DerivationSpace d(v.algebra(), false);
    Derivation euler = d.element(0, {1, 2});
    Derivation db = d.basis_element(-3, 0);
    CHECK(commutator(euler, db) == db * Q(-2));
    CHECK(ce_differential(v, euler).is_zero());
}

TEST_CASE("classical Lie algebras: CE cohomology agrees with the direct oracle")
{
    for (const auto& [name, g] : lie_matrix()) {
        CAPTURE(name);
        const int n = static_cast<int>(g.dim());
        auto v = g.to_linfty(std::max(2, n));
        CEOptions o;
        o.brackets = false;
        auto t = ce_cohomology(v, -1, n - 1, o);
        auto oracle = ClassicalCE(g).dims(static_cast<std::size_t>(n));
        for (int k = 0; k <= n; ++k) {
            CAPTURE(k);
            CHECK(t.row(k - 1)->safe);
            CHECK(t.row(k - 1)->dim == oracle[static_cast<std::size_t>(k)]);
        }
    }
    auto sl = ce_cohomology(sl2().to_linfty(3), -1, 2);
    for (const auto& r : sl.rows)
        CHECK(r.dim == 0);
    auto h = ce_cohomology(h3().to_linfty(3), -1, 2);
    CHECK(h.row(-1)->dim == 1);
}

TEST_CASE("d_CE squares to zero and is a derivation of the bracket")
{
    std::mt19937 rng(99);
    std::vector<LInftyStructure> models = {s2_model(5), h3().to_linfty(3), solvable3(Q(2)).to_linfty(3),
                                           sl2().to_linfty(3)};
    for (const auto& v : models)
        for (bool truncated : {false, true}) {
            DerivationSpace space(v.algebra(), truncated);
            for (int t = 0; t < 6; ++t) {
                int da = static_cast<int>(rng() % 3) - 1, db = static_cast<int>(rng() % 3) - 1;
                auto rand_elem = [&](int d) {
                    Vector c(space.dim(d));
                    for (auto& q : c)
                        q = random_q(rng);
                    return space.element(d, c);
                };
                Derivation a = rand_elem(da), b = rand_elem(db);
                CHECK(ce_differential(v, ce_differential(v, a)).weight_component(1).is_zero());
                Derivation lhs = ce_differential(v, gerstenhaber_bracket(a, b));
                Derivation rhs = gerstenhaber_bracket(ce_differential(v, a), b) +
                                 gerstenhaber_bracket(a, ce_differential(v, b)) * Q(parity_sign(da));
                for (int w = 0; w <= 2; ++w)
                    CHECK((lhs - rhs).weight_component(w).is_zero());
                if (truncated) {
                    CHECK_FALSE(ce_differential(v, a).has_constant_term());
                    CHECK_FALSE(gerstenhaber_bracket(a, b).has_constant_term());
                }
            }
        }
}

TEST_CASE("d_CE squares to zero on safe windows")
{
    for (const auto& [name, g] : lie_matrix()) {
        auto v = g.to_linfty(4);
        DerivationSpace s(v.algebra(), false);
        auto w = derivation_window(s, v.m(), -1, 3);
        CHECK(w.square_failures().empty());
    }
    auto v = s2_model(6);
    DerivationSpace s(v.algebra(), false);
    CHECK(derivation_window(s, v.m(), -3, 3).square_failures().empty());
}

TEST_CASE("unsafe windows are reported")
{
    // a degree-0 even generator makes every degree unbounded
    GradedSpace v({{"t", -1}}, Grading::homological);
    auto z = LInftyStructure::from_brackets(v, {}, 3);
    CHECK(z.algebra()->generator(0).degree == 0);
    auto t = ce_cohomology(z, -1, 1);
    CHECK_FALSE(t.unsafe_degrees().empty());
    CEOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(ce_cohomology(z, -1, 1, strict), UnsafeWindow);
}

TEST_CASE("abelian V: zero differential, brackets are plain commutators")
{
    GradedSpace v({{"a", 1}, {"b", 3}}, Grading::homological);
    auto z = LInftyStructure::from_brackets(v, {}, 4);
    auto t = ce_cohomology(z, -4, 0);
    for (const auto& r : t.rows)
        CHECK(r.dim == r.chain_dim);
    // [d/da*, a* d/db*] = d/db*, so the table is not abelian
    DerivationSpace s(z.algebra(), false);
    auto alg = z.algebra();
    Derivation da = elementary_derivation(alg, 0, alg->unit());
    Derivation adb = elementary_derivation(alg, 1, {1, 0});
    CHECK(commutator(da, adb) == elementary_derivation(alg, 1, alg->unit()));
    bool nonzero = false;
    for (const auto& br : t.brackets)
        if (br.value)
            for (const auto& q : *br.value)
                nonzero = nonzero || !is_zero(q);
    CHECK(nonzero);
}
