#include "linf/symalg.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <functional>

namespace linf {

std::size_t max_dim_guard()
{
    if (const char* env = std::getenv("LINFTY_MAX_DIM")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && v > 0)
            return v;
    }
    return 20000;
}

void Element::add(const Monomial& m, const Q& c)
{
    if (linf::is_zero(c))
        return;
    auto [it, inserted] = terms.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (linf::is_zero(it->second))
            terms.erase(it);
    }
}

Element& Element::operator+=(const Element& o)
{
    for (const auto& [m, c] : o.terms)
        add(m, c);
    truncated = truncated || o.truncated;
    return *this;
}

Element& Element::operator-=(const Element& o)
{
    for (const auto& [m, c] : o.terms)
        add(m, -c);
    truncated = truncated || o.truncated;
    return *this;
}

Element Element::operator*(const Q& c) const
{
    Element r;
    r.truncated = truncated;
    if (linf::is_zero(c))
        return r;
    for (const auto& [m, v] : terms)
        r.terms.emplace(m, v * c);
    return r;
}

FreeCommAlgebra::FreeCommAlgebra(std::vector<Generator> generators, int weight_cap)
    : gens_(std::move(generators)), cap_(weight_cap)
{
    if (cap_ < 1)
        throw ValidationError("weight cap must be at least 1");
    for (auto& g : gens_)
        if (g.degree % 2 != 0)
            g.max_exponent = 1;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        for (std::size_t j = i + 1; j < gens_.size(); ++j)
            if (gens_[i].name == gens_[j].name)
                throw ValidationError("duplicate generator '" + gens_[i].name + "'");
}

std::shared_ptr<const FreeCommAlgebra> FreeCommAlgebra::build(const GradedSpace& w, int weight_cap)
{
    std::vector<Generator> gens;
    for (std::size_t i = 0; i < w.dim(); ++i)
        gens.push_back({w[i].name, w.cohomological_degree(i), true, 0});
    return std::make_shared<const FreeCommAlgebra>(std::move(gens), weight_cap);
}

std::optional<std::size_t> FreeCommAlgebra::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name)
            return i;
    return std::nullopt;
}

int FreeCommAlgebra::degree(const Monomial& m) const
{
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        d += m[i] * gens_[i].degree;
    return d;
}

int FreeCommAlgebra::weight(const Monomial& m) const
{
    int w = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (gens_[i].weighted)
            w += m[i];
    return w;
}

int FreeCommAlgebra::degree_of(const Element& e) const
{
    if (e.terms.empty())
        throw DegreeMismatch("zero element has no degree");
    int d = degree(e.terms.begin()->first);
    if (!is_homogeneous(e, d))
        throw DegreeMismatch("inhomogeneous element " + format(e));
    return d;
}

bool FreeCommAlgebra::is_homogeneous(const Element& e, int d) const
{
    for (const auto& [m, c] : e.terms)
        if (degree(m) != d)
            return false;
    return true;
}

Element FreeCommAlgebra::one() const
{
    Element e;
    e.add(unit(), 1);
    return e;
}

Element FreeCommAlgebra::gen(std::size_t i) const
{
    Monomial m = unit();
    m[i] = 1;
    Element e;
    e.add(m, 1);
    return e;
}

Element FreeCommAlgebra::gen(const std::string& name) const
{
    auto i = index_of(name);
    if (!i)
        throw ValidationError("unknown generator '" + name + "'");
    return gen(*i);
}

Element FreeCommAlgebra::constant(const Q& c) const
{
    Element e;
    e.add(unit(), c);
    return e;
}

int FreeCommAlgebra::multiply(const Monomial& a, const Monomial& b, Monomial& out, bool& truncated) const
{
    const std::size_t n = gens_.size();
    out.assign(n, 0);
    int w = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int e = a[i] + b[i];
        if (gens_[i].max_exponent > 0 && e > gens_[i].max_exponent)
            return 0;
        out[i] = e;
        if (gens_[i].weighted)
            w += e;
    }
    if (w > cap_) {
        truncated = true;
        return 0;
    }
    // move each odd factor of b leftwards past the odd factors of a that follow it
    int odd_a_after = 0;
    long long crossings = 0;
    for (std::size_t i = n; i-- > 0;) {
        if (gens_[i].degree % 2 == 0)
            continue;
        if (b[i])
            crossings += odd_a_after;
        if (a[i])
            ++odd_a_after;
    }
    return parity_sign(crossings);
}

Element FreeCommAlgebra::mul(const Element& a, const Element& b) const
{
    Element r;
    r.truncated = a.truncated || b.truncated;
    Monomial out;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            int s = multiply(ma, mb, out, r.truncated);
            if (s != 0)
                r.add(out, s > 0 ? Q(ca * cb) : Q(-ca * cb));
        }
    return r;
}

Element FreeCommAlgebra::mul(const Element& a, const Monomial& b) const
{
    Element r;
    r.truncated = a.truncated;
    Monomial out;
    for (const auto& [ma, ca] : a.terms) {
        int s = multiply(ma, b, out, r.truncated);
        if (s != 0)
            r.add(out, s > 0 ? ca : Q(-ca));
    }
    return r;
}

Element FreeCommAlgebra::pow(const Element& a, int e) const
{
    Element r = one();
    for (int i = 0; i < e; ++i)
        r = mul(r, a);
    return r;
}

std::vector<Monomial> FreeCommAlgebra::monomials(int target, int min_weight) const
{
    const std::size_t n = gens_.size();
    std::vector<Monomial> out;
    const std::size_t guard = max_dim_guard();
    // suffix bounds on the degree reachable per unit of weight, for pruning
    std::vector<int> suffix_min(n + 1, 0), suffix_max(n + 1, 0);
    std::vector<int> suffix_param_min(n + 1, 0), suffix_param_max(n + 1, 0);
    bool unbounded_param = false;
    for (std::size_t i = n; i-- > 0;) {
        const auto& g = gens_[i];
        suffix_min[i] = suffix_min[i + 1];
        suffix_max[i] = suffix_max[i + 1];
        suffix_param_min[i] = suffix_param_min[i + 1];
        suffix_param_max[i] = suffix_param_max[i + 1];
        if (g.weighted) {
            suffix_min[i] = std::min(suffix_min[i], g.degree);
            suffix_max[i] = std::max(suffix_max[i], g.degree);
        } else if (g.max_exponent == 0) {
            unbounded_param = true;
        } else {
            int d = g.degree * g.max_exponent;
            suffix_param_min[i] += std::min(0, d);
            suffix_param_max[i] += std::max(0, d);
        }
    }
    if (unbounded_param)
        throw InfinitePerDegree("parameter generator without exponent bound");

    Monomial cur(n, 0);
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int deg, int w) {
        int rest = target - deg;
        int budget = cap_ - w;
        int lo = suffix_param_min[i] + std::min(0, budget * suffix_min[i]);
        int hi = suffix_param_max[i] + std::max(0, budget * suffix_max[i]);
        if (rest < lo || rest > hi)
            return;
        if (i == n) {
            if (rest == 0 && w >= min_weight) {
                out.push_back(cur);
                if (out.size() > guard)
                    throw DimensionGuard("more than " + std::to_string(guard) + " monomials in degree " +
                                         std::to_string(target) + " (raise LINFTY_MAX_DIM)");
            }
            return;
        }
        const auto& g = gens_[i];
        int max_e = g.max_exponent > 0 ? g.max_exponent : INT_MAX;
        if (g.weighted)
            max_e = std::min(max_e, budget);
        for (int e = 0; e <= max_e; ++e) {
            cur[i] = e;
            rec(i + 1, deg + e * g.degree, w + (g.weighted ? e : 0));
        }
        cur[i] = 0;
    };
    rec(0, 0, 0);
    std::sort(out.begin(), out.end(), [this](const Monomial& a, const Monomial& b) {
        int wa = weight(a), wb = weight(b);
        if (wa != wb)
            return wa < wb;
        return a > b;
    });
    return out;
}

std::optional<int> FreeCommAlgebra::max_weight_in_degree(int target) const
{
    int lo = 0;
    for (const auto& g : gens_) {
        if (g.weighted && g.degree % 2 == 0 && g.degree <= 0)
            return std::nullopt;
        if (!g.weighted && g.max_exponent == 0)
            return std::nullopt;
        int count = g.weighted && g.degree % 2 == 0 ? 0 : g.max_exponent;
        if (g.degree < 0)
            lo += g.degree * count;
    }
    const int hi = target - lo;
    if (hi < lo)
        return 0;
    const int width = hi - lo + 1;
    const int none = INT_MIN / 2;
    std::vector<int> best(static_cast<std::size_t>(width), none);
    best[static_cast<std::size_t>(-lo)] = 0;
    for (const auto& g : gens_) {
        int count = g.max_exponent;
        if (count == 0)
            count = g.degree > 0 ? width / g.degree + 1 : 0;
        int w = g.weighted ? 1 : 0;
        for (int c = 0; c < count; ++c) {
            std::vector<int> next = best;
            for (int d = 0; d < width; ++d) {
                if (best[static_cast<std::size_t>(d)] == none)
                    continue;
                int nd = d + g.degree;
                if (nd < 0 || nd >= width)
                    continue;
                next[static_cast<std::size_t>(nd)] =
                    std::max(next[static_cast<std::size_t>(nd)], best[static_cast<std::size_t>(d)] + w);
            }
            if (next == best)
                break;
            best = std::move(next);
        }
    }
    int v = best[static_cast<std::size_t>(target - lo)];
    return v == none ? 0 : v;
}

bool FreeCommAlgebra::degree_complete(int d) const
{
    auto w = max_weight_in_degree(d);
    return w && *w <= cap_;
}

std::string FreeCommAlgebra::format(const Monomial& m) const
{
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0)
            continue;
        if (!s.empty())
            s += " ";
        s += gens_[i].name;
        if (m[i] > 1)
            s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

std::string FreeCommAlgebra::format(const Element& e) const
{
    if (e.terms.empty())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : e.terms) {
        Q a = abs(c);
        if (first)
            s += sgn(c) < 0 ? "-" : "";
        else
            s += sgn(c) < 0 ? " - " : " + ";
        first = false;
        bool unit_mono = weight(m) == 0 && degree(m) == 0 && std::all_of(m.begin(), m.end(), [](int x) { return x == 0; });
        if (a != 1 || unit_mono)
            s += to_string(a) + (unit_mono ? "" : " ");
        if (!unit_mono)
            s += format(m);
    }
    return s;
}

bool FreeCommAlgebra::operator==(const FreeCommAlgebra& o) const
{
    if (cap_ != o.cap_ || gens_.size() != o.gens_.size())
        return false;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const auto& a = gens_[i];
        const auto& b = o.gens_[i];
        if (a.name != b.name || a.degree != b.degree || a.weighted != b.weighted || a.max_exponent != b.max_exponent)
            return false;
    }
    return true;
}

Derivation::Derivation(AlgebraPtr alg, int deg) : algebra(std::move(alg)), degree(deg), values(algebra->size()) {}

Derivation Derivation::from_values(AlgebraPtr alg, int deg, std::vector<Element> vals)
{
    if (vals.size() != alg->size())
        throw LengthMismatch("derivation needs " + std::to_string(alg->size()) + " values, got " +
                             std::to_string(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (!alg->is_homogeneous(vals[i], alg->generator(i).degree + deg))
            throw DegreeMismatch("value on " + alg->generator(i).name + " is " + alg->format(vals[i]) +
                                 ", expected degree " + std::to_string(alg->generator(i).degree + deg));
    Derivation d(std::move(alg), deg);
    d.values = std::move(vals);
    return d;
}

bool Derivation::has_constant_term() const
{
    for (const auto& v : values)
        for (const auto& [m, c] : v.terms)
            if (algebra->weight(m) == 0)
                return true;
    return false;
}

bool Derivation::truncated() const
{
    return std::any_of(values.begin(), values.end(), [](const Element& e) { return e.truncated; });
}

bool Derivation::is_zero() const
{
    return std::all_of(values.begin(), values.end(), [](const Element& e) { return e.is_zero(); });
}

Element Derivation::apply(const Monomial& m) const
{
    const auto& alg = *algebra;
    Element r;
    int prefix_degree = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0)
            continue;
        const auto& g = alg.generator(i);
        if (!values[i].is_zero()) {
            Monomial left(m.size(), 0), right(m.size(), 0);
            for (std::size_t j = 0; j < i; ++j)
                left[j] = m[j];
            left[i] = m[i] - 1;
            for (std::size_t j = i + 1; j < m.size(); ++j)
                right[j] = m[j];
            Q coeff = parity_sign(static_cast<long long>(degree) * prefix_degree) * m[i];
            Element l;
            l.add(left, coeff);
            r += alg.mul(alg.mul(l, values[i]), right);
        }
        prefix_degree += m[i] * g.degree;
    }
    return r;
}

Element Derivation::apply(const Element& e) const
{
    Element r;
    r.truncated = e.truncated;
    for (const auto& [m, c] : e.terms)
        r += apply(m) * c;
    return r;
}

Derivation& Derivation::operator+=(const Derivation& o)
{
    if (o.algebra != algebra && !(*o.algebra == *algebra))
        throw AlgebraMismatch("adding derivations of different algebras");
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] += o.values[i];
    if (is_zero())
        degree = o.degree;
    return *this;
}

Derivation& Derivation::operator-=(const Derivation& o)
{
    return *this += o * Q(-1);
}

Derivation Derivation::operator*(const Q& c) const
{
    Derivation r = *this;
    for (auto& v : r.values)
        v = v * c;
    return r;
}

bool Derivation::operator==(const Derivation& o) const
{
    if (values != o.values)
        return false;
    return is_zero() || degree == o.degree;
}

Derivation Derivation::weight_component(int w) const
{
    Derivation r(algebra, degree);
    for (std::size_t i = 0; i < values.size(); ++i)
        for (const auto& [m, c] : values[i].terms)
            if (algebra->weight(m) == w)
                r.values[i].add(m, c);
    return r;
}

std::string Derivation::format() const
{
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].is_zero())
            continue;
        if (!s.empty())
            s += "; ";
        s += algebra->generator(i).name + " -> " + algebra->format(values[i]);
    }
    return s.empty() ? "0" : s;
}

Derivation commutator(const Derivation& a, const Derivation& b)
{
    if (a.algebra != b.algebra && !(*a.algebra == *b.algebra))
        throw AlgebraMismatch("commutator of derivations of different algebras");
    Derivation r(a.algebra, a.degree + b.degree);
    const int s = parity_sign(static_cast<long long>(a.degree) * b.degree);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        r.values[i] = a.apply(b.values[i]);
        Element ba = b.apply(a.values[i]);
        if (s > 0)
            r.values[i] -= ba;
        else
            r.values[i] += ba;
    }
    return r;
}

Derivation elementary_derivation(AlgebraPtr alg, std::size_t generator, const Monomial& value, const Q& coeff)
{
    int deg = alg->degree(value) - alg->generator(generator).degree;
    Derivation d(alg, deg);
    d.values[generator].add(value, coeff);
    return d;
}

AlgebraMap AlgebraMap::identity(AlgebraPtr alg)
{
    AlgebraMap f{alg, alg, {}};
    for (std::size_t i = 0; i < alg->size(); ++i)
        f.images.push_back(alg->gen(i));
    return f;
}

Element AlgebraMap::apply(const Monomial& m) const
{
    Element r = target->one();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (int k = 0; k < m[i]; ++k) {
            r = target->mul(r, images[i]);
            if (r.is_zero())
                return r;
        }
    return r;
}

Element AlgebraMap::apply(const Element& e) const
{
    Element r;
    r.truncated = e.truncated;
    for (const auto& [m, c] : e.terms)
        r += apply(m) * c;
    return r;
}

AlgebraMap AlgebraMap::compose_after(const AlgebraMap& first) const
{
    AlgebraMap f{first.source, target, {}};
    for (const auto& img : first.images)
        f.images.push_back(apply(img));
    return f;
}

void AlgebraMap::validate() const
{
    if (images.size() != source->size())
        throw NotAMorphism("expected " + std::to_string(source->size()) + " generator images");
    for (std::size_t i = 0; i < images.size(); ++i)
        if (!target->is_homogeneous(images[i], source->generator(i).degree))
            throw NotAMorphism("image of " + source->generator(i).name + " is " + target->format(images[i]) +
                               ", not of degree " + std::to_string(source->generator(i).degree));
}

Derivation conjugate(const AlgebraMap& phi, const Derivation& theta, const AlgebraMap& psi)
{
    Derivation r(phi.target, theta.degree);
    for (std::size_t i = 0; i < psi.images.size(); ++i)
        r.values[i] = phi.apply(theta.apply(psi.images[i]));
    return r;
}

AlgebraMap exponential(const Derivation& theta, int max_terms)
{
    if (theta.degree != 0)
        throw DegreeMismatch("exponential needs a degree-0 derivation");
    AlgebraMap f{theta.algebra, theta.algebra, {}};
    for (std::size_t i = 0; i < theta.algebra->size(); ++i) {
        Element term = theta.algebra->gen(i);
        Element sum = term;
        int k = 1;
        for (; k <= max_terms; ++k) {
            term = theta.apply(term) * (Q(1) / k);
            if (term.is_zero())
                break;
            sum += term;
        }
        if (k > max_terms)
            throw ValidationError("exponential does not terminate within " + std::to_string(max_terms) + " terms");
        f.images.push_back(std::move(sum));
    }
    return f;
}

}  // namespace linf
