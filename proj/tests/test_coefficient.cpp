#include "doctest.h"
#include "helpers.hpp"

#include "linf/coefficient.hpp"

using namespace linf;
using namespace testing;

namespace {

LInftyStructure s2_model(int cap)
{
    GradedSpace v({{"a", 1}, {"b", 2}}, Grading::homological);
    return LInftyStructure::from_brackets(v, {BracketEntry{{0, 0}, {{1, -2}}}}, cap);
}

TensorElement random_tensor(const CoefficientComplex& c, int k, std::mt19937& rng)
{
    Vector v(c.basis(k).size());
    for (auto& q : v)
        q = rng() % 2 ? random_q(rng) : Q(0);
    return c.element(k, v);
}

LieCochain random_cochain(std::size_t arity, std::size_t dim, std::mt19937& rng)
{
    LieCochain g;
    g.arity = arity;
    std::vector<std::size_t> idx(arity);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == arity) {
            Vector v(dim);
            for (auto& q : v)
                q = random_q(rng);
            g.values[idx] = v;
            return;
        }
        for (std::size_t i = start; i < dim; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return g;
}

bool same(const LieCochain& a, const LieCochain& b, std::size_t dim)
{
    for (const auto& [k, v] : a.values)
        if (b.evaluate(k, dim) != v)
            return false;
    for (const auto& [k, v] : b.values)
        if (a.evaluate(k, dim) != v)
            return false;
    return true;
}

}  // namespace

TEST_CASE("the identity is Maurer-Cartan in A_V (x) V")
{
    for (const auto& [name, g] : lie_matrix()) {
        CAPTURE(name);
        auto v = g.to_linfty(static_cast<int>(std::max<std::size_t>(2, g.dim())));
        CoefficientComplex c(v, v);
        CHECK(c.mc_residual(c.identity_element()).empty());
    }
    auto s2 = s2_model(4);
    CoefficientComplex c(s2, s2);
    CHECK(c.mc_residual(c.identity_element()).empty());
    // twice the identity is not MC once brackets are present
    CHECK_THROWS_AS(c.twist(scaled(c.identity_element(), 2)), NotMaurerCartan);
}

TEST_CASE("coefficient dgla identities on random elements")
{
    std::mt19937 rng(17);
    std::vector<LInftyStructure> models = {h3().to_linfty(3), sl2().to_linfty(3), solvable3(-1).to_linfty(3)};
    auto [space, entries] = tensor_dgla(aff1(), exterior2(true));
    LInftyStructure u = LInftyStructure::from_brackets(space, entries, 2);
    for (const auto& v : models)
        for (bool twisted : {false, true}) {
            CoefficientComplex c(v, twisted ? v : u);
            if (twisted)
                c.twist(c.identity_element());
            for (int t = 0; t < 8; ++t) {
                int kx = -static_cast<int>(rng() % 3), ky = -static_cast<int>(rng() % 2);
                auto x = random_tensor(c, kx, rng), y = random_tensor(c, ky, rng), z = random_tensor(c, 0, rng);
                CHECK(c.d(c.d(x)).empty());
                auto lhs = c.d(c.bracket(x, y));
                auto rhs = sum(c.bracket(c.d(x), y), scaled(c.bracket(x, c.d(y)), parity_sign(kx)));
                CHECK(sum(lhs, scaled(rhs, -1)).empty());
                Q s = parity_sign(static_cast<long long>(kx) * ky);
                CHECK(sum(c.bracket(x, y), scaled(c.bracket(y, x), s)).empty());
                // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
                auto j = sum(c.bracket(x, c.bracket(y, z)),
                             scaled(sum(c.bracket(c.bracket(x, y), z), scaled(c.bracket(y, c.bracket(x, z)), s)), -1));
                CHECK(j.empty());
            }
        }
}

TEST_CASE("twisted differential matches [m,-] under p (x) e_i <-> p d/dx_i")
{
    std::vector<LInftyStructure> models = {h3().to_linfty(3), sl2().to_linfty(3), aff1().to_linfty(2), s2_model(5)};
    for (const auto& v : models) {
        CoefficientComplex c(v, v);
        c.twist(c.identity_element());
        DerivationSpace der(v.algebra(), false);
        for (int ce = -2; ce <= 2; ++ce) {
            int dd = ce - 1;
            CHECK(der.dim(dd) == c.basis(-ce).size());
            for (std::size_t i = 0; i < der.dim(dd); ++i) {
                Derivation theta = der.basis_element(dd, i);
                TensorElement x = derivation_to_tensor(theta);
                TensorElement lhs = c.d(x);
                TensorElement rhs = derivation_to_tensor(commutator(v.m(), theta));
                CHECK(sum(lhs, scaled(rhs, -1)).empty());
            }
        }
    }
}

TEST_CASE("closed cup formula")
{
    auto g = h3();
    auto id = LieCochain::identity(3);
    CHECK(same(cup_bracket(g, id, id), LieCochain::bracket_cochain(g), 3));
    // cochains valued in the centre bracket to zero
    LieCochain proj;
    proj.arity = 1;
    proj.values[{2}] = Vector{0, 0, 1};
    CHECK(cup_bracket(g, proj, proj).values.empty());
    auto ab = abelian(3);
    std::mt19937 rng(8);
    CHECK(cup_bracket(ab, random_cochain(1, 3, rng), random_cochain(2, 3, rng)).values.empty());
    CHECK_THROWS_AS(require_ungraded_lie(s2_model(3)), AritySupport);
}

TEST_CASE("closed cup formula agrees with the tensor bracket")
{
    std::mt19937 rng(31);
    for (const auto& [name, g] : lie_matrix()) {
        if (g.dim() > 4)
            continue;
        CAPTURE(name);
        auto v = g.to_linfty(static_cast<int>(std::max<std::size_t>(2, g.dim())));
        CoefficientComplex c(v, v);
        for (std::size_t n = 1; n <= g.dim(); ++n)
            for (std::size_t m = 1; n + m <= g.dim(); ++m) {
                auto a = random_cochain(n, g.dim(), rng), b = random_cochain(m, g.dim(), rng);
                auto lhs = cochain_to_tensor(cup_bracket(g, a, b), g.dim());
                auto rhs = c.bracket(cochain_to_tensor(a, g.dim()), cochain_to_tensor(b, g.dim()));
                CHECK(sum(lhs, scaled(rhs, -1)).empty());
                // graded antisymmetry of the cup bracket
                auto ba = cup_bracket(g, b, a);
                LieCochain neg = ba;
                for (auto& [k, val] : neg.values)
                    for (auto& q : val)
                        q *= -parity_sign(static_cast<long long>(n * m));
                CHECK(same(cup_bracket(g, a, b), neg, g.dim()));
                CHECK(same(tensor_to_cochain(cochain_to_tensor(a, g.dim()), n, g.dim()), a, g.dim()));
            }
    }
}

TEST_CASE("induced cup brackets on cohomology vanish")
{
    for (const auto& g : {h3(), solvable3(-1), aff1_plus_line(), sl2()}) {
        auto v = g.to_linfty(3);
        auto t = induced_cohomology_bracket(v, 0, 3);
        CHECK(t.unsafe.empty());
        CHECK(t.all_zero());
    }
    auto t = induced_cohomology_bracket(h3().to_linfty(3), 0, 3);
    CHECK(t.dims[0] == 1);
    CHECK_FALSE(t.entries.empty());
}
