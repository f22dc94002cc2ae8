#include "linf/rational.hpp"

#include "linf/errors.hpp"

#include <cctype>

namespace linf {

namespace {

bool valid_integer(std::string_view s, bool allow_sign)
{
    if (s.empty())
        return false;
    std::size_t i = 0;
    if (allow_sign && s[0] == '-')
        ++i;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

}  // namespace

Q parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_integer(num, true) || !valid_integer(den, false))
        throw ParseError("malformed rational '" + std::string(text) + "' (expected p or p/q)");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    Q q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Q& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace linf
