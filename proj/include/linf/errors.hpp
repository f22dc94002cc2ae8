#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace linf {

/// Root of every error the library throws. The subclasses name the failing
/// contract so callers (and the CLI) can report them precisely.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LINF_DECLARE_ERROR(Name)                  \
    class Name : public Error {                   \
    public:                                       \
        explicit Name(const std::string& what)    \
            : Error(#Name ": " + what) {}         \
    }

LINF_DECLARE_ERROR(LengthMismatch);
LINF_DECLARE_ERROR(DegreeMismatch);
LINF_DECLARE_ERROR(AlgebraMismatch);
LINF_DECLARE_ERROR(ComplexMismatch);
LINF_DECLARE_ERROR(AritySupport);
LINF_DECLARE_ERROR(NotASubspace);
LINF_DECLARE_ERROR(IdealViolation);
LINF_DECLARE_ERROR(NotAMorphism);
LINF_DECLARE_ERROR(SectionViolation);
LINF_DECLARE_ERROR(SupportOutsideAffine);
LINF_DECLARE_ERROR(InfinitePerDegree);
LINF_DECLARE_ERROR(RelationOutsideCap);
LINF_DECLARE_ERROR(ParseError);
LINF_DECLARE_ERROR(ValidationError);
LINF_DECLARE_ERROR(DimensionGuard);

#undef LINF_DECLARE_ERROR

class DegreeOutsideWindow : public Error {
public:
    DegreeOutsideWindow(int degree, int lo, int hi)
        : Error("DegreeOutsideWindow: degree " + std::to_string(degree) + " needs neighbours inside [" +
                std::to_string(lo) + ", " + std::to_string(hi) + "]"),
          degree(degree)
    {
    }
    int degree;
};

/// Raised when some requested degrees cannot be computed exactly at the
/// current caps. Lists the offending degrees instead of failing wholesale.
class UnsafeWindow : public Error {
public:
    explicit UnsafeWindow(std::vector<int> degrees)
        : Error(message(degrees)), unsafe_degrees(std::move(degrees))
    {
    }
    std::vector<int> unsafe_degrees;

private:
    static std::string message(const std::vector<int>& ds)
    {
        std::string s = "UnsafeWindow: truncation-suspect degrees";
        for (int d : ds)
            s += " " + std::to_string(d);
        return s;
    }
};

/// Carries the offending residual in human-readable form.
class NotMaurerCartan : public Error {
public:
    explicit NotMaurerCartan(std::string residual_text)
        : Error("NotMaurerCartan: residual " + residual_text), residual(std::move(residual_text))
    {
    }
    std::string residual;
};

}  // namespace linf
