#include "linf/lie_models.hpp"

#include "linf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace linf {

void add_into(TensorPoly& into, const TensorPoly& p, const Q& c)
{
    if (is_zero(c))
        return;
    for (const auto& [w, x] : p) {
        Q& slot = into[w];
        slot += c * x;
        if (is_zero(slot))
            into.erase(w);
    }
}

TensorPoly length_component(const TensorPoly& p, std::size_t length)
{
    TensorPoly out;
    for (const auto& [w, c] : p)
        if (w.size() == length)
            out.emplace(w, c);
    return out;
}

std::size_t max_length(const TensorPoly& p)
{
    std::size_t m = 0;
    for (const auto& [w, c] : p)
        m = std::max(m, w.size());
    return m;
}

FreeLie::FreeLie(std::vector<BasisElement> generators) : gens_(std::move(generators))
{
    for (std::size_t i = 0; i < gens_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (gens_[i].name == gens_[j].name)
                throw ValidationError("duplicate generator name " + gens_[i].name);
}

std::optional<std::size_t> FreeLie::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name)
            return i;
    return std::nullopt;
}

int FreeLie::degree(const Word& w) const
{
    int d = 0;
    for (auto i : w)
        d += gens_[i].degree;
    return d;
}

TensorPoly FreeLie::gen(std::size_t i) const
{
    return TensorPoly{{Word{i}, Q(1)}};
}

TensorPoly FreeLie::bracket(const TensorPoly& a, const TensorPoly& b) const
{
    TensorPoly out;
    for (const auto& [u, x] : a) {
        const int du = degree(u);
        for (const auto& [v, y] : b) {
            Word uv = u;
            uv.insert(uv.end(), v.begin(), v.end());
            Word vu = v;
            vu.insert(vu.end(), u.begin(), u.end());
            add_into(out, TensorPoly{{uv, x * y}});
            add_into(out, TensorPoly{{vu, x * y}}, -parity_sign(static_cast<long long>(du) * degree(v)));
        }
    }
    return out;
}

namespace {

bool is_lyndon(const Word& w)
{
    for (std::size_t i = 1; i < w.size(); ++i)
        if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + static_cast<long>(i), w.end()))
            return false;
    return !w.empty();
}

}  // namespace

std::vector<Word> FreeLie::lyndon_words(std::size_t length) const
{
    std::vector<Word> out;
    const std::size_t k = gens_.size();
    if (k == 0 || length == 0)
        return out;
    // Duval's generation of all Lyndon words up to `length`.
    Word w{0};
    while (!w.empty()) {
        if (w.size() == length)
            out.push_back(w);
        const std::size_t m = w.size();
        while (w.size() < length)
            w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == k - 1)
            w.pop_back();
        if (!w.empty())
            ++w.back();
    }
    return out;
}

TensorPoly FreeLie::standard_bracketing(const Word& w) const
{
    if (w.size() == 1)
        return gen(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) {
        Word v(w.begin() + static_cast<long>(i), w.end());
        if (is_lyndon(v)) {
            Word u(w.begin(), w.begin() + static_cast<long>(i));
            return bracket(standard_bracketing(u), standard_bracketing(v));
        }
    }
    throw ValidationError("standard bracketing of a non-Lyndon word");
}

namespace {

std::string bracket_label(const FreeLie& f, const Word& w)
{
    if (w.size() == 1)
        return f.generator(w[0]).name;
    for (std::size_t i = 1; i < w.size(); ++i) {
        Word v(w.begin() + static_cast<long>(i), w.end());
        if (is_lyndon(v))
            return "[" + bracket_label(f, Word(w.begin(), w.begin() + static_cast<long>(i))) + "," +
                   bracket_label(f, v) + "]";
    }
    return "?";
}

}  // namespace

std::vector<FreeLie::BasisElementImage> FreeLie::basis(std::size_t length) const
{
    std::vector<BasisElementImage> out;
    for (const auto& w : lyndon_words(length))
        out.push_back({bracket_label(*this, w), degree(w), standard_bracketing(w)});
    if (length % 2 == 0) {
        for (const auto& u : lyndon_words(length / 2)) {
            if (degree(u) % 2 == 0)
                continue;
            TensorPoly b = standard_bracketing(u);
            std::string l = bracket_label(*this, u);
            out.push_back({"[" + l + "," + l + "]", 2 * degree(u), bracket(b, b)});
        }
    }
    return out;
}

TensorPoly FreeLie::apply_derivation(const std::vector<TensorPoly>& values, int deg, const TensorPoly& p) const
{
    TensorPoly out;
    for (const auto& [w, c] : p) {
        int before = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const TensorPoly& val = values.at(w[i]);
            if (!val.empty()) {
                const Q s = c * parity_sign(static_cast<long long>(deg) * before);
                for (const auto& [v, x] : val) {
                    Word nw(w.begin(), w.begin() + static_cast<long>(i));
                    nw.insert(nw.end(), v.begin(), v.end());
                    nw.insert(nw.end(), w.begin() + static_cast<long>(i) + 1, w.end());
                    add_into(out, TensorPoly{{nw, x}}, s);
                }
            }
            before += gens_[w[i]].degree;
        }
    }
    return out;
}

namespace {

class LieParser {
public:
    LieParser(const FreeLie& f, const std::string& text) : f_(f), s_(text) {}

    TensorPoly run()
    {
        TensorPoly p = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(msg + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    TensorPoly expr()
    {
        TensorPoly out;
        Q sign = 1;
        if (eat('-'))
            sign = -1;
        else
            eat('+');
        add_into(out, term(), sign);
        while (true) {
            if (eat('+'))
                add_into(out, term());
            else if (eat('-'))
                add_into(out, term(), Q(-1));
            else
                break;
        }
        return out;
    }

    TensorPoly term()
    {
        skip();
        Q coef = 1;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
                ++pos_;
            coef = parse_rational(s_.substr(start, pos_ - start));
            if (!eat('*')) {
                skip();
                if (pos_ < s_.size() && s_[pos_] != '[' && s_[pos_] != '(')
                    fail("expected '*' after coefficient");
            }
        }
        TensorPoly a = atom();
        TensorPoly out;
        add_into(out, a, coef);
        return out;
    }

    TensorPoly atom()
    {
        if (eat('[')) {
            TensorPoly a = expr();
            if (!eat(','))
                fail("expected ','");
            TensorPoly b = expr();
            if (!eat(']'))
                fail("expected ']'");
            return f_.bracket(a, b);
        }
        if (eat('(')) {
            TensorPoly a = expr();
            if (!eat(')'))
                fail("expected ')'");
            return a;
        }
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
            ++pos_;
        if (start == pos_)
            fail("expected a generator or '['");
        std::string name = s_.substr(start, pos_ - start);
        auto idx = f_.index_of(name);
        if (!idx)
            fail("unknown generator " + name);
        return f_.gen(*idx);
    }

    const FreeLie& f_;
    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace

TensorPoly FreeLie::parse(const std::string& text) const
{
    return LieParser(*this, text).run();
}

std::string FreeLie::format(const TensorPoly& p) const
{
    if (p.empty())
        return "0";
    std::string s;
    for (const auto& [w, c] : p) {
        if (!s.empty())
            s += " + ";
        s += to_string(c) + "*";
        for (std::size_t i = 0; i < w.size(); ++i)
            s += (i ? "." : "") + gens_[w[i]].name;
    }
    return s;
}

namespace {

RationalMatrix inverse(const RationalMatrix& m)
{
    const std::size_t n = m.rows();
    RationalMatrix out(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        Vector e(n);
        e[c] = 1;
        auto x = solve(m, e);
        if (!x)
            throw ValidationError("singular matrix in a basis change");
        for (std::size_t r = 0; r < n; ++r)
            out(r, c) = (*x)[r];
    }
    return out;
}

Vector unit_vector(std::size_t n, std::size_t i)
{
    Vector v(n);
    v[i] = 1;
    return v;
}

bool zero_vector(const Vector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Q& x) { return is_zero(x); });
}

std::optional<std::pair<std::size_t, int>> homogeneity(const FreeLie& f, const TensorPoly& p)
{
    if (p.empty())
        return std::nullopt;
    const auto& w0 = p.begin()->first;
    for (const auto& [w, c] : p)
        if (w.size() != w0.size() || f.degree(w) != f.degree(w0))
            return std::nullopt;
    return std::make_pair(w0.size(), f.degree(w0));
}

GradedLie present(const FreeLie& free, const std::vector<TensorPoly>& relations,
                  std::vector<TensorPoly> differential, std::size_t length_cap, std::optional<int> degree_cap)
{
    const std::size_t n = free.generators();
    if (differential.empty())
        differential.assign(n, TensorPoly{});
    if (differential.size() != n)
        throw LengthMismatch("differential needs one value per generator");
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [w, c] : differential[i]) {
            if (w.empty())
                throw ValidationError("d of " + free.generator(i).name + " has a constant term");
            if (free.degree(w) != free.generator(i).degree - 1)
                throw DegreeMismatch("d of " + free.generator(i).name + " is not of degree -1");
        }
    }
    for (const auto& r : relations) {
        auto h = homogeneity(free, r);
        if (!h)
            throw ValidationError("relation " + free.format(r) + " is zero or not homogeneous in length and degree");
        if (h->first > length_cap || (degree_cap && std::abs(h->second) > *degree_cap))
            throw RelationOutsideCap("relation " + free.format(r) + " lies above the cap");
    }

    GradedLie g;
    GradedLie::Presentation pres;
    pres.free = free;
    pres.relations = relations;
    pres.differential = differential;
    pres.length_cap = length_cap;
    pres.degree_cap = degree_cap;
    pres.word_index.resize(length_cap + 1);
    pres.reducer.resize(length_cap + 1);
    pres.offset.assign(length_cap + 1, 0);

    std::vector<TensorPoly> ideal_prev;
    for (std::size_t len = 1; len <= length_cap + 1; ++len) {
        const auto b = free.basis(len);
        std::map<Word, std::size_t> words;
        for (const auto& e : b)
            for (const auto& [w, c] : e.image)
                words.emplace(w, 0);
        std::size_t k = 0;
        for (auto& [w, idx] : words)
            idx = k++;
        RationalMatrix m(words.size(), b.size());
        for (std::size_t j = 0; j < b.size(); ++j)
            for (const auto& [w, c] : b[j].image)
                m(words.at(w), j) = c;
        if (rank(m) != b.size())
            throw ValidationError("free Lie basis in length " + std::to_string(len) + " is dependent");

        std::vector<TensorPoly> ideal_gens;
        for (const auto& r : relations)
            if (r.begin()->first.size() == len)
                ideal_gens.push_back(r);
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& e : ideal_prev)
                ideal_gens.push_back(free.bracket(free.gen(i), e));
        if (degree_cap)
            for (const auto& e : b)
                if (std::abs(e.degree) > *degree_cap)
                    ideal_gens.push_back(e.image);

        std::vector<Vector> coords;
        std::vector<TensorPoly> polys;
        for (const auto& p : ideal_gens) {
            if (p.empty())
                continue;
            Vector v(words.size());
            for (const auto& [w, c] : p) {
                auto it = words.find(w);
                if (it == words.end())
                    throw ValidationError(free.format(p) + " is not a Lie element");
                v[it->second] = c;
            }
            auto x = solve(m, v);
            if (!x)
                throw ValidationError(free.format(p) + " is not a Lie element");
            coords.push_back(*x);
            polys.push_back(p);
        }
        std::vector<Vector> jcoords;
        ideal_prev.clear();
        for (auto i : independent_subset(b.size(), coords)) {
            jcoords.push_back(coords[i]);
            ideal_prev.push_back(polys[i]);
        }
        std::vector<Vector> combined = jcoords;
        for (std::size_t i = 0; i < b.size(); ++i)
            combined.push_back(unit_vector(b.size(), i));
        std::vector<std::size_t> quotient;
        for (auto i : independent_subset(b.size(), combined))
            if (i >= jcoords.size())
                quotient.push_back(i - jcoords.size());

        if (len == length_cap + 1) {
            pres.exact = quotient.empty();
            break;
        }

        // Left inverse of m through a maximal set of independent word rows.
        RationalMatrix mt(b.size(), words.size());
        for (std::size_t r = 0; r < words.size(); ++r)
            for (std::size_t c = 0; c < b.size(); ++c)
                mt(c, r) = m(r, c);
        const auto rows = row_echelon(mt).pivot_columns;
        RationalMatrix ms(b.size(), b.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < b.size(); ++c)
                ms(r, c) = m(rows[r], c);
        std::vector<Vector> ccols = jcoords;
        for (auto q : quotient)
            ccols.push_back(unit_vector(b.size(), q));
        RationalMatrix to_quotient =
            inverse(RationalMatrix::from_columns(b.size(), ccols)) * inverse(ms);
        RationalMatrix red(quotient.size(), words.size());
        for (std::size_t qi = 0; qi < quotient.size(); ++qi)
            for (std::size_t r = 0; r < rows.size(); ++r)
                red(qi, rows[r]) = to_quotient(jcoords.size() + qi, r);

        pres.word_index[len] = std::move(words);
        pres.reducer[len] = std::move(red);
        pres.offset[len] = g.basis.size();
        for (auto q : quotient) {
            g.basis.push_back({b[q].label, b[q].degree});
            pres.basis_images.push_back(b[q].image);
            pres.basis_lengths.push_back(len);
        }
    }

    const std::size_t dim = g.basis.size();
    g.presentation = std::move(pres);
    const auto& pr = *g.presentation;
    g.brackets.assign(dim, std::vector<Vector>(dim, Vector(dim)));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            if (pr.basis_lengths[i] + pr.basis_lengths[j] > length_cap)
                continue;
            Vector v = g.reduce(free.bracket(pr.basis_images[i], pr.basis_images[j]));
            g.brackets[i][j] = v;
            const int s = -parity_sign(static_cast<long long>(g.degree(i)) * g.degree(j));
            for (std::size_t c = 0; c < dim; ++c)
                g.brackets[j][i][c] = s * v[c];
        }
    g.differential.assign(dim, Vector(dim));
    for (std::size_t i = 0; i < dim; ++i)
        g.differential[i] = g.reduce(free.apply_derivation(differential, -1, pr.basis_images[i]));
    for (const auto& r : relations)
        if (!zero_vector(g.reduce(free.apply_derivation(differential, -1, r))))
            throw ValidationError("d does not preserve the relation " + free.format(r));
    g.validate();
    return g;
}

}  // namespace

Vector GradedLie::bracket(const Vector& a, const Vector& b) const
{
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (is_zero(a[i]))
            continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (is_zero(b[j]))
                continue;
            const Q c = a[i] * b[j];
            for (std::size_t k = 0; k < dim(); ++k)
                out[k] += c * brackets[i][j][k];
        }
    }
    return out;
}

Vector GradedLie::apply_d(const Vector& a) const
{
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i)
        if (!is_zero(a[i]))
            for (std::size_t k = 0; k < dim(); ++k)
                out[k] += a[i] * differential[i][k];
    return out;
}

Vector GradedLie::reduce(const TensorPoly& p) const
{
    if (!presentation)
        throw ValidationError("reduce needs a presented Lie algebra");
    const auto& pr = *presentation;
    Vector out(dim());
    for (std::size_t len = 0; len <= max_length(p); ++len) {
        TensorPoly comp = length_component(p, len);
        if (comp.empty())
            continue;
        if (len == 0)
            throw ValidationError("a Lie element has no constant term");
        if (len > pr.length_cap)
            continue;
        const auto& idx = pr.word_index[len];
        const auto& red = pr.reducer[len];
        Vector v(idx.size());
        for (const auto& [w, c] : comp) {
            auto it = idx.find(w);
            if (it == idx.end())
                throw ValidationError(pr.free.format(comp) + " is not a Lie element");
            v[it->second] = c;
        }
        Vector q = red.apply(v);
        for (std::size_t i = 0; i < q.size(); ++i)
            out[pr.offset[len] + i] += q[i];
    }
    return out;
}

void GradedLie::validate() const
{
    const std::size_t n = dim();
    if (brackets.size() != n || differential.size() != n)
        throw LengthMismatch("bracket table or differential has the wrong size");
    auto check_degree = [&](const Vector& v, int expected, const std::string& what) {
        for (std::size_t k = 0; k < n; ++k)
            if (!is_zero(v[k]) && degree(k) != expected)
                throw DegreeMismatch(what + " has a term of the wrong degree");
    };
    for (std::size_t i = 0; i < n; ++i) {
        check_degree(differential[i], degree(i) - 1, "d(" + basis[i].name + ")");
        if (!zero_vector(apply_d(differential[i])))
            throw ValidationError("d^2 != 0 on " + basis[i].name);
        for (std::size_t j = 0; j < n; ++j) {
            const std::string ij = "[" + basis[i].name + "," + basis[j].name + "]";
            check_degree(brackets[i][j], degree(i) + degree(j), ij);
            const int s = -parity_sign(static_cast<long long>(degree(i)) * degree(j));
            for (std::size_t k = 0; k < n; ++k)
                if (brackets[j][i][k] != s * brackets[i][j][k])
                    throw ValidationError(ij + " is not graded antisymmetric");
            Vector lhs = apply_d(brackets[i][j]);
            Vector r1 = bracket(differential[i], unit_vector(n, j));
            Vector r2 = bracket(unit_vector(n, i), differential[j]);
            for (std::size_t k = 0; k < n; ++k)
                if (lhs[k] != r1[k] + parity_sign(degree(i)) * r2[k])
                    throw ValidationError("Leibniz rule fails on " + ij);
            for (std::size_t l = 0; l < n; ++l) {
                Vector a = bracket(unit_vector(n, i), brackets[j][l]);
                Vector b = bracket(brackets[i][j], unit_vector(n, l));
                Vector c = bracket(unit_vector(n, j), brackets[i][l]);
                const int t = parity_sign(static_cast<long long>(degree(i)) * degree(j));
                for (std::size_t k = 0; k < n; ++k)
                    if (a[k] != b[k] + t * c[k])
                        throw ValidationError("Jacobi fails on (" + basis[i].name + "," + basis[j].name + "," +
                                              basis[l].name + ")");
            }
        }
    }
}

bool GradedLie::complete_in_degree(int deg) const
{
    if (!presentation || presentation->exact)
        return true;
    const auto& pr = *presentation;
    if (pr.degree_cap)
        return std::abs(deg) <= *pr.degree_cap;
    bool pos = true, neg = true;
    int least = 0;
    for (std::size_t i = 0; i < pr.free.generators(); ++i) {
        const int d = pr.free.generator(i).degree;
        pos = pos && d > 0;
        neg = neg && d < 0;
        least = (i == 0) ? std::abs(d) : std::min(least, std::abs(d));
    }
    const long long bound = static_cast<long long>(pr.length_cap + 1) * least;
    if (pos)
        return deg < bound;
    if (neg)
        return -deg < bound;
    return false;
}

LInftyStructure GradedLie::to_linfty(int weight_cap) const
{
    std::vector<BracketEntry> entries;
    auto output = [](const Vector& v) {
        std::vector<std::pair<std::size_t, Q>> out;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!is_zero(v[k]))
                out.emplace_back(k, v[k]);
        return out;
    };
    for (std::size_t i = 0; i < dim(); ++i) {
        if (!zero_vector(differential[i]))
            entries.push_back({{i}, output(differential[i])});
        for (std::size_t j = i; j < dim(); ++j)
            if (!zero_vector(brackets[i][j]))
                entries.push_back({{i, j}, output(brackets[i][j])});
    }
    return LInftyStructure::from_brackets(GradedSpace(basis, Grading::homological), entries, std::max(weight_cap, 2));
}

GradedLie presented_dgla(const FreeLie& free, const std::vector<TensorPoly>& relations,
                         const std::vector<TensorPoly>& differential, std::size_t length_cap)
{
    if (length_cap == 0)
        throw ValidationError("length cap must be positive");
    return present(free, relations, differential, length_cap, std::nullopt);
}

GradedLie presented_dgla_degree_cap(const FreeLie& free, const std::vector<TensorPoly>& relations,
                                    const std::vector<TensorPoly>& differential, int degree_cap)
{
    if (free.generators() == 0)
        return present(free, relations, differential, 1, degree_cap);
    bool pos = true, neg = true;
    int least = 0;
    for (std::size_t i = 0; i < free.generators(); ++i) {
        const int d = free.generator(i).degree;
        pos = pos && d > 0;
        neg = neg && d < 0;
        least = (i == 0) ? std::abs(d) : std::min(least, std::abs(d));
    }
    if (!pos && !neg)
        throw InfinitePerDegree("a degree cap needs generator degrees that are nonzero and of one sign");
    const std::size_t len = static_cast<std::size_t>(std::max(1, degree_cap / least));
    return present(free, relations, differential, len, degree_cap);
}

GradedLie free_lie(const std::vector<BasisElement>& generators, std::size_t length_cap)
{
    return presented_dgla(FreeLie(generators), {}, {}, length_cap);
}

GradedLie abelian_lie(const std::vector<BasisElement>& generators)
{
    FreeLie f(generators);
    std::vector<TensorPoly> rel;
    for (std::size_t i = 0; i < f.generators(); ++i)
        for (std::size_t j = i; j < f.generators(); ++j) {
            TensorPoly r = f.bracket(f.gen(i), f.gen(j));
            if (!r.empty() && (i != j || f.generator(i).degree % 2 != 0))
                rel.push_back(r);
        }
    return presented_dgla(f, rel, {}, 2);
}

GradedLie quillen_model(const NilpotentBase& a, std::size_t length_cap)
{
    const std::size_t n = a.dim();
    std::vector<BasisElement> gens;
    for (std::size_t r = 0; r < n; ++r)
        gens.push_back({"s" + a.name(r), a.degree(r) - 1});
    FreeLie f(gens);
    std::vector<TensorPoly> d(n);
    for (std::size_t r = 0; r < n; ++r) {
        TensorPoly inner;
        for (std::size_t p = 0; p < n; ++p)
            if (!is_zero(a.differential(p)[r]))
                add_into(inner, f.gen(p), a.differential(p)[r]);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                const Q& mu = a.product(p, q)[r];
                if (is_zero(mu))
                    continue;
                const int s = parity_sign(static_cast<long long>(a.degree(p) + 1) * a.degree(q));
                add_into(inner, f.bracket(f.gen(p), f.gen(q)), frac(s, 2) * mu);
            }
        add_into(d[r], inner, Q(-parity_sign(a.degree(r))));
    }
    return presented_dgla(f, {}, d, length_cap);
}

namespace {

RationalMatrix d_matrix(const GradedLie& g)
{
    return RationalMatrix::from_columns(g.dim(), g.differential);
}

RationalMatrix ad_matrix(const GradedLie& g, const Vector& y)
{
    std::vector<Vector> cols;
    for (std::size_t a = 0; a < g.dim(); ++a)
        cols.push_back(g.bracket(y, unit_vector(g.dim(), a)));
    return RationalMatrix::from_columns(g.dim(), cols);
}

Vector flatten(const RationalMatrix& m)
{
    Vector v;
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r)
            v.push_back(m(r, c));
    return v;
}

RationalMatrix unflatten(const Vector& v, std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            m(r, c) = v[c * n + r];
    return m;
}

RationalMatrix combine(const RationalMatrix& a, const RationalMatrix& b, const Q& s)
{
    RationalMatrix out = a;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out(r, c) += s * b(r, c);
    return out;
}

/// Window whose degree-k space is span(basis(k)) inside some ambient space
/// and whose differential is given on ambient vectors.
CochainWindow span_window(int lo, int hi, const std::string& prefix,
                          const std::function<std::vector<Vector>(int)>& basis,
                          const std::function<Vector(int, const Vector&)>& delta)
{
    CochainWindow w(lo, hi);
    std::map<int, std::vector<Vector>> bases;
    for (int k = lo; k <= hi; ++k) {
        bases[k] = basis(k);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < bases[k].size(); ++i)
            labels.push_back(prefix + std::to_string(k) + "_" + std::to_string(i));
        w.set_basis(k, labels);
    }
    for (int k = lo; k < hi; ++k) {
        const auto& src = bases[k];
        const auto& dst = bases[k + 1];
        RationalMatrix m(dst.size(), src.size());
        if (!src.empty() && !dst.empty()) {
            RationalMatrix cols = RationalMatrix::from_columns(dst[0].size(), dst);
            for (std::size_t j = 0; j < src.size(); ++j) {
                Vector image = delta(k, src[j]);
                auto x = solve(cols, image);
                if (!x)
                    throw ValidationError("differential leaves the derivation space in degree " + std::to_string(k + 1));
                for (std::size_t i = 0; i < dst.size(); ++i)
                    m(i, j) = (*x)[i];
            }
        } else if (!src.empty()) {
            for (const auto& v : src)
                if (!zero_vector(delta(k, v)))
                    throw ValidationError("differential leaves the derivation space in degree " + std::to_string(k + 1));
        }
        w.set_differential(k, std::move(m));
    }
    return w;
}

/// [d, D] = dD - (-1)^k Dd.
RationalMatrix der_bracket_d(const RationalMatrix& dm, const RationalMatrix& d, int k)
{
    return combine(d * dm, dm * d, Q(-parity_sign(k)));
}

}  // namespace

std::vector<RationalMatrix> lie_derivations(const GradedLie& g, int k)
{
    const std::size_t n = g.dim();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> unknown;  // (c, a) -> column
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
            if (g.degree(c) == g.degree(a) - k)
                unknown.emplace(std::make_pair(c, a), unknown.size());
    if (unknown.empty())
        return {};
    std::vector<std::vector<std::pair<std::size_t, Q>>> rows;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const int s = parity_sign(static_cast<long long>(k) * g.degree(a));
            for (std::size_t e = 0; e < n; ++e) {
                std::map<std::size_t, Q> row;
                for (std::size_t f = 0; f < n; ++f) {
                    const Q& c = g.brackets[a][b][f];
                    if (is_zero(c))
                        continue;
                    auto it = unknown.find({e, f});
                    if (it != unknown.end())
                        row[it->second] += c;
                }
                for (std::size_t c = 0; c < n; ++c) {
                    const Q& x = g.brackets[c][b][e];
                    if (!is_zero(x))
                        if (auto it = unknown.find({c, a}); it != unknown.end())
                            row[it->second] -= x;
                    const Q& y = g.brackets[a][c][e];
                    if (!is_zero(y))
                        if (auto it = unknown.find({c, b}); it != unknown.end())
                            row[it->second] -= s * y;
                }
                std::vector<std::pair<std::size_t, Q>> r;
                for (auto& [col, v] : row)
                    if (!is_zero(v))
                        r.emplace_back(col, v);
                if (!r.empty())
                    rows.push_back(std::move(r));
            }
        }
    RationalMatrix m(rows.size(), unknown.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [col, v] : rows[i])
            m(i, col) = v;
    std::vector<RationalMatrix> out;
    for (const auto& x : rank_kernel(m).kernel_basis) {
        RationalMatrix d(n, n);
        for (const auto& [ca, col] : unknown)
            d(ca.first, ca.second) = x[col];
        out.push_back(std::move(d));
    }
    return out;
}

CochainWindow lie_derivation_window(const GradedLie& g, int lo, int hi)
{
    const RationalMatrix d = d_matrix(g);
    const std::size_t n = g.dim();
    return span_window(
        lo, hi, "D",
        [&](int k) {
            std::vector<Vector> out;
            for (const auto& m : lie_derivations(g, k))
                out.push_back(flatten(m));
            return out;
        },
        [&](int k, const Vector& v) { return flatten(der_bracket_d(unflatten(v, n), d, k)); });
}

TauDerivations tau_derivations(const GradedLie& g, int k)
{
    TauDerivations t;
    t.der_part = lie_derivations(g, k);
    for (std::size_t c = 0; c < g.dim(); ++c)
        if (g.degree(c) == -(k + 1))
            t.tau_part.push_back(unit_vector(g.dim(), c));
    return t;
}

namespace {

struct TauElement {
    RationalMatrix der;
    Vector tau;
};

std::vector<TauElement> tau_basis(const GradedLie& g, int k)
{
    const std::size_t n = g.dim();
    auto t = tau_derivations(g, k);
    std::vector<TauElement> out;
    for (auto& m : t.der_part)
        out.push_back({m, Vector(n)});
    for (auto& y : t.tau_part)
        out.push_back({RationalMatrix(n, n), y});
    return out;
}

Vector tau_flatten(const TauElement& e)
{
    Vector v = flatten(e.der);
    v.insert(v.end(), e.tau.begin(), e.tau.end());
    return v;
}

TauElement tau_delta(const GradedLie& g, const TauElement& e, int k)
{
    TauElement out;
    out.der = combine(der_bracket_d(e.der, d_matrix(g), k), ad_matrix(g, e.tau), Q(-parity_sign(k)));
    out.tau = g.apply_d(e.tau);
    return out;
}

}  // namespace

CochainWindow tau_derivation_window(const GradedLie& g, int lo, int hi)
{
    const std::size_t n = g.dim();
    return span_window(
        lo, hi, "T",
        [&](int k) {
            std::vector<Vector> out;
            for (const auto& e : tau_basis(g, k))
                out.push_back(tau_flatten(e));
            return out;
        },
        [&](int k, const Vector& v) {
            TauElement e{unflatten(v, n), Vector(v.begin() + static_cast<long>(n * n), v.end())};
            return tau_flatten(tau_delta(g, e, k));
        });
}

namespace {

std::size_t tau_count(const Word& w, std::size_t tau)
{
    return static_cast<std::size_t>(std::count(w.begin(), w.end(), tau));
}

/// Splits p into its tau-free part and the rest, dropping words whose
/// length in the generators of g exceeds the cap.
std::pair<TensorPoly, TensorPoly> split_tau(const TensorPoly& p, std::size_t tau, std::size_t cap)
{
    TensorPoly free_part, rest;
    for (const auto& [w, c] : p) {
        const std::size_t t = tau_count(w, tau);
        if (w.size() - t > cap)
            continue;
        (t == 0 ? free_part : rest).emplace(w, c);
    }
    return {free_part, rest};
}

const GradedLie::Presentation& require_presentation(const GradedLie& g)
{
    if (!g.presentation)
        throw ValidationError("adjoining tau needs a presented Lie algebra");
    return *g.presentation;
}

TensorPoly to_poly(const GradedLie& g, const Vector& v)
{
    TensorPoly out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i]))
            add_into(out, g.presentation->basis_images[i], v[i]);
    return out;
}

}  // namespace

TauExtension adjoin_tau(const GradedLie& g)
{
    const auto& pr = require_presentation(g);
    std::vector<BasisElement> gens;
    for (std::size_t i = 0; i < pr.free.generators(); ++i)
        gens.push_back(pr.free.generator(i));
    std::string name = "tau";
    while (pr.free.index_of(name))
        name += "'";
    gens.push_back({name, -1});

    TauExtension t;
    t.free = FreeLie(gens);
    t.tau = gens.size() - 1;
    t.relations = pr.relations;
    t.length_cap = pr.length_cap;
    const TensorPoly tau = t.free.gen(t.tau);
    for (std::size_t i = 0; i < pr.free.generators(); ++i) {
        TensorPoly v = pr.differential[i];
        add_into(v, t.free.bracket(tau, t.free.gen(i)));
        t.differential.push_back(v);
    }
    TensorPoly dt;
    add_into(dt, t.free.bracket(tau, tau), frac(1, 2));
    t.differential.push_back(dt);

    t.square_zero = true;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto dd = t.free.apply_derivation(t.differential, -1, t.differential[i]);
        auto [free_part, rest] = split_tau(dd, t.tau, t.length_cap);
        if (!rest.empty() || !zero_vector(g.reduce(free_part)))
            t.square_zero = false;
    }
    t.well_defined = true;
    for (const auto& r : t.relations) {
        auto dr = t.free.apply_derivation(t.differential, -1, r);
        auto [free_part, rest] = split_tau(dr, t.tau, t.length_cap);
        TensorPoly expected = split_tau(t.free.bracket(tau, r), t.tau, t.length_cap).second;
        add_into(rest, expected, Q(-1));
        if (!rest.empty() || !zero_vector(g.reduce(free_part)))
            t.well_defined = false;
    }
    return t;
}

SemidirectCheck check_semidirect(const GradedLie& g, int lo, int hi)
{
    const auto& pr = require_presentation(g);
    const TauExtension t = adjoin_tau(g);
    const std::size_t n = g.dim();
    const std::size_t ngen = pr.free.generators();
    std::vector<Vector> gen_coords;
    for (std::size_t i = 0; i < ngen; ++i)
        gen_coords.push_back(g.reduce(pr.free.gen(i)));

    auto values = [&](const TauElement& e) {
        std::vector<TensorPoly> v;
        for (std::size_t i = 0; i < ngen; ++i)
            v.push_back(to_poly(g, e.der.apply(gen_coords[i])));
        v.push_back(to_poly(g, e.tau));
        return v;
    };
    // Value of a derivation of g<tau> on a generator, as an element of g.
    auto in_g = [&](const TensorPoly& p, bool& ok) {
        auto [free_part, rest] = split_tau(p, t.tau, t.length_cap);
        if (!rest.empty())
            ok = false;
        return g.reduce(free_part);
    };
    auto expected_on = [&](const TauElement& e, std::size_t i) {
        return i < ngen ? e.der.apply(gen_coords[i]) : e.tau;
    };

    SemidirectCheck out;
    std::map<int, std::vector<TauElement>> bases;
    for (int k = lo; k <= hi; ++k)
        bases[k] = tau_basis(g, k);
    for (int k1 = lo; k1 <= hi; ++k1)
        for (int k2 = lo; k2 <= hi; ++k2)
            for (const auto& e1 : bases[k1])
                for (const auto& e2 : bases[k2]) {
                    const Q s = -parity_sign(static_cast<long long>(k1) * k2);
                    TauElement formula{combine(e1.der * e2.der, e2.der * e1.der, s), e1.der.apply(e2.tau)};
                    Vector tail = e2.der.apply(e1.tau);
                    for (std::size_t c = 0; c < n; ++c)
                        formula.tau[c] += s * tail[c];
                    const auto v1 = values(e1);
                    const auto v2 = values(e2);
                    for (std::size_t i = 0; i <= ngen; ++i) {
                        TensorPoly p = t.free.apply_derivation(v1, -k1, v2[i]);
                        add_into(p, t.free.apply_derivation(v2, -k2, v1[i]), s);
                        bool ok = true;
                        if (in_g(p, ok) != expected_on(formula, i) || !ok)
                            out.brackets_match = false;
                    }
                    ++out.pairs_checked;
                }
    for (int k = lo; k <= hi; ++k)
        for (const auto& e : bases[k]) {
            const TauElement formula = tau_delta(g, e, k);
            const auto v = values(e);
            for (std::size_t i = 0; i <= ngen; ++i) {
                TensorPoly p = t.free.apply_derivation(t.differential, -1, v[i]);
                add_into(p, t.free.apply_derivation(v, -k, t.differential[i]), Q(-parity_sign(k)));
                bool ok = true;
                if (in_g(p, ok) != expected_on(formula, i) || !ok)
                    out.differential_matches = false;
            }
        }
    return out;
}

HarrisonTable harrison_cohomology(const GradedLie& l, int lo, int hi)
{
    HarrisonTable h;
    h.lo = lo;
    h.hi = hi;
    const std::size_t n = l.dim();
    const CochainWindow der = lie_derivation_window(l, lo - 1, hi + 2);
    const CochainWindow tau = tau_derivation_window(l, lo - 1, hi + 1);
    // L itself by cohomological degree c (elements of homological degree -c).
    const CochainWindow lie = span_window(
        lo - 1, hi + 2, "L",
        [&](int c) {
            std::vector<Vector> out;
            for (std::size_t i = 0; i < n; ++i)
                if (l.degree(i) == -c)
                    out.push_back(unit_vector(n, i));
            return out;
        },
        [&](int, const Vector& v) { return l.apply_d(v); });

    std::map<int, CohomologyGroup> hd, hl;
    for (int k = lo; k <= hi + 1; ++k) {
        hd.emplace(k, cohomology(der, k));
        hl.emplace(k, cohomology(lie, k));
        h.lie_homology[k] = hl.at(k).dim;
    }
    // Connecting map H^{k+1}(L) -> H^{k+1}(Der), y -> -(-1)^k ad_y.
    std::map<int, std::size_t> connecting_rank;
    for (int k = lo - 1; k <= hi; ++k) {
        std::vector<Vector> basis_full;
        for (const auto& v : lie_derivations(l, k + 1))
            basis_full.push_back(flatten(v));
        std::vector<Vector> lie_basis;
        for (std::size_t i = 0; i < n; ++i)
            if (l.degree(i) == -(k + 1))
                lie_basis.push_back(unit_vector(n, i));
        std::vector<Vector> images;
        for (const auto& rep : hl.at(k + 1).representatives) {
            Vector y(n);
            for (std::size_t i = 0; i < rep.size(); ++i)
                for (std::size_t c = 0; c < n; ++c)
                    y[c] += rep[i] * lie_basis[i][c];
            Vector ad = flatten(ad_matrix(l, y));
            for (auto& x : ad)
                x *= -parity_sign(k);
            auto coords = solve(RationalMatrix::from_columns(n * n, basis_full), ad);
            if (!coords)
                throw ValidationError("ad_y is not a derivation");
            auto cls = hd.at(k + 1).class_of(*coords);
            if (!cls)
                throw ValidationError("ad_y of a cycle is not a cocycle");
            images.push_back(*cls);
        }
        connecting_rank[k] = images.empty() ? 0 : independent_subset(images[0].size(), images).size();
    }
    for (int k = lo; k <= hi; ++k) {
        h.truncated[k] = hd.at(k).dim;
        h.full[k] = cohomology(tau, k).dim;
        const std::size_t expected =
            (hd.at(k).dim - connecting_rank[k - 1]) + (hl.at(k + 1).dim - connecting_rank[k]);
        if (expected != h.full[k])
            h.les_consistent = false;
    }
    if (l.presentation) {
        const auto& pr = *l.presentation;
        auto complete = [&](int j) {
            for (std::size_t i = 0; i < pr.free.generators(); ++i)
                if (!l.complete_in_degree(pr.free.generator(i).degree - j))
                    return false;
            return l.complete_in_degree(-(j + 1));
        };
        for (int k = lo; k <= hi; ++k)
            if (!complete(k - 1) || !complete(k) || !complete(k + 1))
                h.unsafe.push_back(k);
    }
    return h;
}

HarrisonTable harrison_cohomology(const NilpotentBase& a, int lo, int hi, std::size_t length_cap)
{
    return harrison_cohomology(quillen_model(a, length_cap), lo, hi);
}

}  // namespace linf

namespace linf {

GradedLie wedge_model(std::size_t pairs, int n, int degree_cap)
{
    if (n <= 1 || n % 2 == 0)
        throw ValidationError("the wedge model needs odd n > 1");
    if (pairs == 0)
        throw ValidationError("the wedge model needs at least one pair");
    std::vector<BasisElement> gens;
    for (std::size_t i = 1; i <= pairs; ++i) {
        gens.push_back({"p" + std::to_string(i), n - 1});
        gens.push_back({"q" + std::to_string(i), n - 1});
    }
    FreeLie f(gens);
    TensorPoly w;
    for (std::size_t i = 0; i < pairs; ++i)
        add_into(w, f.bracket(f.gen(2 * i), f.gen(2 * i + 1)));
    return presented_dgla_degree_cap(f, {w}, {}, degree_cap);
}

WedgeReport wedge_cohomology(std::size_t pairs, int n, int degree_cap, int lo, int hi)
{
    WedgeReport r;
    r.model = wedge_model(pairs, n, degree_cap);
    CEOptions opts;
    opts.brackets = false;
    r.table = ce_cohomology(r.model.to_linfty(2), lo, hi, opts);
    for (const auto& row : r.table.rows) {
        if (!row.safe) {
            r.unsafe.push_back(row.derivation_degree);
            continue;
        }
        r.dims[row.derivation_degree] = row.dim;
        const int k = row.derivation_degree;
        if ((k + n) % n != 0) {
            if (row.dim != 0)
                throw ValidationError("cohomology in a degree that is not a multiple of n");
            continue;
        }
        const int arity = (k + n) / n;
        r.by_arity[arity] += row.dim;
        if (arity > 2 && row.dim != 0)
            r.vanishes_above_two = false;
        if (arity == 2 && row.dim != 0) {
            r.arity_two_degree = -k;
            r.arity_two_dim = row.dim;
        }
    }
    return r;
}

}  // namespace linf
