#include "linf/ce.hpp"

#include <algorithm>

namespace linf {

DerivationSpace::DerivationSpace(AlgebraPtr alg, bool truncated) : alg_(std::move(alg)), truncated_(truncated) {}

const std::vector<DerBasisElement>& DerivationSpace::basis(int degree) const
{
    auto it = cache_.find(degree);
    if (it != cache_.end())
        return it->second;
    std::vector<DerBasisElement> b;
    auto& idx = index_[degree];
    const std::size_t guard = max_dim_guard();
    for (std::size_t g = 0; g < alg_->size(); ++g)
        for (auto& mono : alg_->monomials(alg_->generator(g).degree + degree, truncated_ ? 1 : 0)) {
            idx.emplace(std::pair(g, mono), b.size());
            b.push_back({g, std::move(mono)});
            if (b.size() > guard)
                throw DimensionGuard("derivation space of degree " + std::to_string(degree) + " exceeds " +
                                     std::to_string(guard) + " (raise LINFTY_MAX_DIM)");
        }
    return cache_.emplace(degree, std::move(b)).first->second;
}

std::vector<std::string> DerivationSpace::labels(int degree) const
{
    std::vector<std::string> out;
    for (const auto& b : basis(degree))
        out.push_back(derivation_label(*alg_, b));
    return out;
}

bool DerivationSpace::complete(int degree) const
{
    for (const auto& g : alg_->generators())
        if (!alg_->degree_complete(g.degree + degree))
            return false;
    return true;
}

Derivation DerivationSpace::element(int degree, const Vector& coords) const
{
    const auto& b = basis(degree);
    if (coords.size() != b.size())
        throw LengthMismatch("derivation coordinates");
    Derivation d(alg_, degree);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!is_zero(coords[i]))
            d.values[b[i].generator].add(b[i].value, coords[i]);
    return d;
}

Derivation DerivationSpace::basis_element(int degree, std::size_t i) const
{
    const auto& b = basis(degree)[i];
    Derivation d(alg_, degree);
    d.values[b.generator].add(b.value, 1);
    return d;
}

Vector DerivationSpace::coordinates(const Derivation& d, int degree) const
{
    basis(degree);
    const auto& idx = index_.at(degree);
    Vector v(dim(degree));
    for (std::size_t g = 0; g < d.values.size(); ++g)
        for (const auto& [mono, c] : d.values[g].terms) {
            auto it = idx.find(std::pair(g, mono));
            if (it == idx.end())
                throw ValidationError("term " + alg_->format(mono) + " on " + alg_->generator(g).name +
                                      " is outside the derivation basis of degree " + std::to_string(degree));
            v[it->second] = c;
        }
    return v;
}

std::string derivation_label(const FreeCommAlgebra& alg, const DerBasisElement& b)
{
    std::string v = alg.format(b.value);
    return (v == "1" ? std::string() : v + " ") + "d/d" + alg.generator(b.generator).name;
}

RationalMatrix ad_matrix(const DerivationSpace& space, const Derivation& m, int k)
{
    const std::size_t cols = space.dim(k);
    RationalMatrix out(space.dim(k + 1), cols);
    for (std::size_t c = 0; c < cols; ++c) {
        Vector v = space.coordinates(commutator(m, space.basis_element(k, c)), k + 1);
        for (std::size_t r = 0; r < v.size(); ++r)
            out(r, c) = v[r];
    }
    return out;
}

CochainWindow derivation_window(const DerivationSpace& space, const Derivation& m, int lo, int hi)
{
    CochainWindow w(lo, hi);
    for (int k = lo; k <= hi; ++k)
        w.set_basis(k, space.labels(k));
    for (int k = lo; k < hi; ++k)
        w.set_differential(k, ad_matrix(space, m, k));
    return w;
}

const CERow* WhiteheadTable::row(int d) const
{
    for (const auto& r : rows)
        if (r.derivation_degree == d)
            return &r;
    return nullptr;
}

std::vector<int> WhiteheadTable::unsafe_degrees() const
{
    std::vector<int> out;
    for (const auto& r : rows)
        if (!r.safe)
            out.push_back(r.derivation_degree);
    return out;
}

std::optional<int> required_cap(const LInftyStructure& v, int lo, int hi)
{
    const auto& alg = *v.algebra();
    int cap = v.weight_cap();
    for (int d = lo - 1; d <= hi + 1; ++d)
        for (const auto& g : alg.generators()) {
            auto w = alg.max_weight_in_degree(g.degree + d);
            if (!w)
                return std::nullopt;
            cap = std::max(cap, *w);
        }
    return cap;
}

WhiteheadTable ce_cohomology(const LInftyStructure& v_in, int lo, int hi, const CEOptions& opts)
{
    if (lo > hi)
        throw ValidationError("empty window");
    LInftyStructure v = v_in;
    if (opts.auto_raise_cap) {
        auto need = required_cap(v, lo, hi);
        if (need && *need > v.weight_cap() && *need <= opts.max_auto_cap)
            v = v.with_cap(*need);
    }
    DerivationSpace space(v.algebra(), opts.truncated);
    CochainWindow w = derivation_window(space, v.m(), lo - 1, hi + 1);

    WhiteheadTable t;
    t.truncated = opts.truncated;
    t.weight_cap = v.weight_cap();
    std::map<int, CohomologyGroup> groups;
    for (int d = lo; d <= hi; ++d) {
        CERow row;
        row.derivation_degree = d;
        row.ce_degree = d + 1;
        row.chain_dim = space.dim(d);
        row.safe = space.complete(d - 1) && space.complete(d) && space.complete(d + 1);
        auto g = cohomology(w, d);
        row.dim = g.dim;
        for (const auto& r : g.representatives)
            row.representatives.push_back(space.element(d, r));
        groups.emplace(d, std::move(g));
        t.rows.push_back(std::move(row));
    }
    if (opts.strict && !t.unsafe_degrees().empty())
        throw UnsafeWindow(t.unsafe_degrees());

    if (opts.brackets) {
        for (const auto& a : t.rows)
            for (const auto& b : t.rows) {
                if (b.derivation_degree < a.derivation_degree)
                    continue;
                for (std::size_t i = 0; i < a.representatives.size(); ++i)
                    for (std::size_t j = 0; j < b.representatives.size(); ++j) {
                        if (a.derivation_degree == b.derivation_degree && j < i)
                            continue;
                        BracketValue bv{a.derivation_degree, i, b.derivation_degree, j,
                                        a.derivation_degree + b.derivation_degree, std::nullopt};
                        const CERow* target = t.row(bv.result_degree);
                        if (target && target->safe && a.safe && b.safe) {
                            Derivation c = commutator(a.representatives[i], b.representatives[j]);
                            bv.value = groups.at(bv.result_degree).class_of(space.coordinates(c, bv.result_degree));
                            if (!bv.value)
                                throw ValidationError("bracket of cocycles is not a cocycle");
                        }
                        t.brackets.push_back(std::move(bv));
                    }
            }
    }
    return t;
}

Derivation gerstenhaber_bracket(const Derivation& a, const Derivation& b)
{
    if (a.algebra != b.algebra && !(*a.algebra == *b.algebra))
        throw ComplexMismatch("cochains belong to different complexes");
    return commutator(a, b);
}

Derivation ce_differential(const LInftyStructure& v, const Derivation& a)
{
    if (a.algebra != v.algebra() && !(*a.algebra == *v.algebra()))
        throw ComplexMismatch("cochain does not belong to this complex");
    return commutator(v.m(), a);
}

BautModel baut_model(const LInftyStructure& v_in, int lo, int hi, int n, const CEOptions& opts)
{
    BautModel out;
    out.n = n;
    const int top = -n;  // derivation degree of homological degree n
    int flo = std::min(lo, top - 1);
    int fhi = std::max(hi, 0);
    out.full = ce_cohomology(v_in, flo, fhi, opts);

    LInftyStructure v = v_in.with_cap(out.full.weight_cap);
    DerivationSpace space(v.algebra(), opts.truncated);

    // literal cover complex over derivation degrees [flo - 1, top]: full below top, ker d at top
    const int clo = flo - 1;
    RationalMatrix d_top = ad_matrix(space, v.m(), top);
    auto kernel = rank_kernel(d_top).kernel_basis;
    CochainWindow cw(clo, top + 1);
    for (int k = clo; k < top; ++k)
        cw.set_basis(k, space.labels(k));
    std::vector<std::string> klabels;
    for (std::size_t i = 0; i < kernel.size(); ++i)
        klabels.push_back("k" + std::to_string(i));
    cw.set_basis(top, klabels);
    cw.set_basis(top + 1, {});
    for (int k = clo; k < top - 1; ++k)
        cw.set_differential(k, ad_matrix(space, v.m(), k));
    RationalMatrix into = ad_matrix(space, v.m(), top - 1);
    RationalMatrix kmat = RationalMatrix::from_columns(space.dim(top), kernel);
    RationalMatrix dk(kernel.size(), into.cols());
    for (std::size_t c = 0; c < into.cols(); ++c) {
        auto x = solve(kmat, into.column(c));
        if (!x)
            throw ValidationError("image of d does not lie in the kernel");
        for (std::size_t r = 0; r < kernel.size(); ++r)
            dk(r, c) = (*x)[r];
    }
    cw.set_differential(top - 1, dk);
    cw.set_differential(top, RationalMatrix(0, kernel.size()));

    for (int d = flo; d <= top; ++d) {
        CERow row;
        row.derivation_degree = d;
        row.ce_degree = d + 1;
        row.chain_dim = cw.dim(d);
        const CERow* full = out.full.row(d);
        row.safe = full && full->safe;
        auto g = cohomology(cw, d);
        row.dim = g.dim;
        for (const auto& r : g.representatives) {
            Vector coords = d == top ? kmat.apply(r) : r;
            row.representatives.push_back(space.element(d, coords));
        }
        out.cover_rows.push_back(std::move(row));
    }

    const CERow* h1 = out.full.row(0);
    if (h1) {
        auto full_window = derivation_window(space, v.m(), flo - 1, fhi + 1);
        for (std::size_t i = 0; i < h1->representatives.size(); ++i)
            for (const auto& row : out.cover_rows) {
                if (row.derivation_degree < flo)
                    continue;
                auto g = cohomology(full_window, row.derivation_degree);
                for (std::size_t j = 0; j < row.representatives.size(); ++j) {
                    Derivation c = commutator(h1->representatives[i], row.representatives[j]);
                    std::vector<Vector> cols;
                    for (const auto& r : row.representatives)
                        cols.push_back(space.coordinates(r, row.derivation_degree));
                    for (const auto& b : g.coboundaries)
                        cols.push_back(b);
                    Vector target = space.coordinates(c, row.derivation_degree);
                    auto x = solve(RationalMatrix::from_columns(target.size(), cols), target);
                    if (!x)
                        throw ValidationError("action of a degree-0 class leaves the cover");
                    x->resize(row.representatives.size());
                    out.action.push_back({i, row.derivation_degree, j, *x});
                }
            }
    }
    return out;
}

}  // namespace linf
