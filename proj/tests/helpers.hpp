#pragma once

#include "linf/linfty.hpp"

#include <functional>
#include <random>

namespace testing {

using namespace linf;

inline BracketEntry entry(std::size_t i, std::size_t j, std::vector<std::pair<std::size_t, Q>> out)
{
    return BracketEntry{{i, j}, std::move(out)};
}

inline LieAlgebra sl2()
{
    // e, f, h
    return LieAlgebra({"e", "f", "h"}, {entry(0, 1, {{2, 1}}), entry(2, 0, {{0, 2}}), entry(2, 1, {{1, -2}})});
}

inline LieAlgebra h3()
{
    return LieAlgebra({"x", "y", "z"}, {entry(0, 1, {{2, 1}})});
}

inline LieAlgebra aff1()
{
    return LieAlgebra({"x", "y"}, {entry(0, 1, {{1, 1}})});
}

inline LieAlgebra abelian(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("a" + std::to_string(i + 1));
    return LieAlgebra(names, {});
}

/// r3(lambda): [x,y] = y, [x,z] = lambda z.
inline LieAlgebra solvable3(const Q& lambda)
{
    return LieAlgebra({"x", "y", "z"}, {entry(0, 1, {{1, 1}}), entry(0, 2, {{2, lambda}})});
}

/// aff(1) x Q.
inline LieAlgebra aff1_plus_line()
{
    return LieAlgebra({"x", "y", "z"}, {entry(0, 1, {{1, 1}})});
}

inline LieAlgebra gl2()
{
    // e, f, h, c
    return LieAlgebra({"e", "f", "h", "c"}, {entry(0, 1, {{2, 1}}), entry(2, 0, {{0, 2}}), entry(2, 1, {{1, -2}})});
}

/// The Lie algebras of dimension <= 4 used for classical cross-checks.
inline std::vector<std::pair<std::string, LieAlgebra>> lie_matrix()
{
    return {{"abelian1", abelian(1)},      {"abelian2", abelian(2)},         {"aff1", aff1()},
            {"h3", h3()},                  {"sl2", sl2()},                   {"r3(-1)", solvable3(-1)},
            {"r3(1/2)", solvable3(frac(1, 2))}, {"aff1+Q", aff1_plus_line()},     {"gl2", gl2()},
            {"abelian3", abelian(3)}};
}

inline Q random_q(std::mt19937& rng, int range = 3)
{
    std::uniform_int_distribution<int> num(-range, range);
    std::uniform_int_distribution<int> den(1, 3);
    return frac(num(rng), den(rng));
}

}  // namespace testing

namespace testing {

/// Finite graded-commutative dg algebra with a unit, homological degrees,
/// given by structure constants on a basis whose element 0 is the unit.
struct SmallCdga {
    std::vector<std::string> names;
    std::vector<int> degrees;
    // product[i][j] = coordinates of b_i b_j
    std::vector<std::vector<Vector>> product;
    std::vector<Vector> d;  // d(b_i), homological degree -1
};

/// Lambda(u1, u2) with |u_i| = 1, optionally d u1 = 1.
inline SmallCdga exterior2(bool with_d)
{
    SmallCdga a;
    a.names = {"1", "u1", "u2", "u12"};
    a.degrees = {0, 1, 1, 2};
    a.product.assign(4, std::vector<Vector>(4, Vector(4)));
    for (std::size_t i = 0; i < 4; ++i) {
        a.product[0][i][i] = 1;
        a.product[i][0][i] = 1;
    }
    a.product[1][2][3] = 1;
    a.product[2][1][3] = -1;
    a.d.assign(4, Vector(4));
    if (with_d) {
        a.d[1][0] = 1;
        a.d[3][2] = 1;
    }
    return a;
}

/// g (x) A with [x a, y b] = [x,y] ab and d(x a) = x da, as bracket entries.
inline std::pair<GradedSpace, std::vector<BracketEntry>> tensor_dgla(const LieAlgebra& g, const SmallCdga& a)
{
    const std::size_t na = a.names.size();
    auto index = [na](std::size_t x, std::size_t p) { return x * na + p; };
    std::vector<BasisElement> basis;
    for (std::size_t x = 0; x < g.dim(); ++x)
        for (std::size_t p = 0; p < na; ++p)
            basis.push_back({g.names()[x] + "." + a.names[p], a.degrees[p]});
    std::vector<BracketEntry> entries;
    for (std::size_t x = 0; x < g.dim(); ++x)
        for (std::size_t p = 0; p < na; ++p) {
            BracketEntry e{{index(x, p)}, {}};
            for (std::size_t q = 0; q < na; ++q)
                if (!is_zero(a.d[p][q]))
                    e.output.emplace_back(index(x, q), a.d[p][q]);
            if (!e.output.empty())
                entries.push_back(e);
        }
    for (std::size_t x = 0; x < g.dim(); ++x)
        for (std::size_t p = 0; p < na; ++p)
            for (std::size_t y = 0; y < g.dim(); ++y)
                for (std::size_t q = 0; q < na; ++q) {
                    std::size_t i = index(x, p), j = index(y, q);
                    if (j < i)
                        continue;
                    BracketEntry e{{i, j}, {}};
                    const Vector& xy = g.bracket(x, y);
                    for (std::size_t z = 0; z < g.dim(); ++z)
                        for (std::size_t r = 0; r < na; ++r)
                            if (!is_zero(xy[z]) && !is_zero(a.product[p][q][r]))
                                e.output.emplace_back(index(z, r), xy[z] * a.product[p][q][r]);
                    if (!e.output.empty())
                        entries.push_back(e);
                }
    return {GradedSpace(basis, Grading::homological), entries};
}

}  // namespace testing
