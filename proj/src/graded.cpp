#include "linf/graded.hpp"

#include "linf/errors.hpp"

#include <algorithm>
#include <set>

namespace linf {

GradedSpace::GradedSpace(std::vector<BasisElement> basis, Grading mode) : basis_(std::move(basis)), mode_(mode)
{
    std::set<std::string> seen;
    for (const auto& b : basis_)
        if (!seen.insert(b.name).second)
            throw ValidationError("duplicate basis name '" + b.name + "'");
}

std::optional<std::size_t> GradedSpace::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].name == name)
            return i;
    return std::nullopt;
}

int GradedSpace::degree_of(const std::string& name) const
{
    auto i = index_of(name);
    if (!i)
        throw ValidationError("unknown basis element '" + name + "'");
    return basis_[*i].degree;
}

int GradedSpace::cohomological_degree(std::size_t i) const
{
    return mode_ == Grading::cohomological ? basis_[i].degree : -basis_[i].degree;
}

GradedSpace GradedSpace::converted(Grading target) const
{
    if (target == mode_)
        return *this;
    auto b = basis_;
    for (auto& e : b)
        e.degree = -e.degree;
    return GradedSpace(std::move(b), target);
}

int koszul_sign(const std::vector<std::size_t>& perm, const std::vector<int>& degrees)
{
    if (perm.size() != degrees.size())
        throw LengthMismatch("permutation of length " + std::to_string(perm.size()) + " against " +
                             std::to_string(degrees.size()) + " degrees");
    long long exponent = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j])
                exponent += static_cast<long long>(degrees[perm[i]]) * degrees[perm[j]];
    return parity_sign(exponent < 0 ? -exponent : exponent);
}

int permutation_sign(const std::vector<std::size_t>& perm)
{
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j])
                ++inversions;
    return parity_sign(inversions);
}

std::string suspend_name(const std::string& name, int k)
{
    std::string s = name;
    for (; k > 0; --k) {
        if (s.rfind("s^-1(", 0) == 0 && s.back() == ')')
            s = s.substr(5, s.size() - 6);
        else
            s = "s(" + s + ")";
    }
    for (; k < 0; ++k) {
        if (s.rfind("s(", 0) == 0 && s.back() == ')')
            s = s.substr(2, s.size() - 3);
        else
            s = "s^-1(" + s + ")";
    }
    return s;
}

std::string dual_name(const std::string& name)
{
    if (!name.empty() && name.back() == '*')
        return name.substr(0, name.size() - 1);
    return name + "*";
}

GradedSpace suspend(const GradedSpace& v, int k)
{
    auto b = v.basis();
    const int shift = v.mode() == Grading::homological ? k : -k;
    for (auto& e : b) {
        e.name = suspend_name(e.name, k);
        e.degree += shift;
    }
    return GradedSpace(std::move(b), v.mode());
}

GradedSpace dual(const GradedSpace& v)
{
    auto b = v.basis();
    for (auto& e : b)
        e.name = dual_name(e.name);
    return GradedSpace(std::move(b), v.mode() == Grading::homological ? Grading::cohomological : Grading::homological);
}

int normalize_commutative(std::vector<std::size_t>& word, const std::vector<int>& degrees)
{
    int sign = 1;
    for (std::size_t i = 1; i < word.size(); ++i)
        for (std::size_t j = i; j > 0 && word[j - 1] > word[j]; --j) {
            if (degrees[word[j - 1]] % 2 != 0 && degrees[word[j]] % 2 != 0)
                sign = -sign;
            std::swap(word[j - 1], word[j]);
        }
    for (std::size_t i = 1; i < word.size(); ++i)
        if (word[i] == word[i - 1] && degrees[word[i]] % 2 != 0)
            return 0;
    return sign;
}

}  // namespace linf
