#pragma once

#include "linf/ce.hpp"
#include "linf/linfty.hpp"
#include "linf/nilpotent_base.hpp"

#include <optional>
#include <string>
#include <vector>

namespace linf {

/// Element sum_r a_r (x) X_r of A (x) Der(A_I), stored by A-basis index.
using ACochain = std::vector<Derivation>;

ACochain zero_cochain(const LInftyStructure& i, const NilpotentBase& a);
bool is_zero(const ACochain& x);
ACochain add(const ACochain& x, const ACochain& y, const Q& c = 1);

/// [a X, b Y] = (-1)^{|X||b|} ab [X, Y].
ACochain a_bracket(const NilpotentBase& a, const ACochain& x, const ACochain& y);
/// D(a X) = d_A(a) X + (-1)^{|a|} a [m, X].
ACochain a_differential(const NilpotentBase& a, const Derivation& m, const ACochain& x);
/// D xi + 1/2 [xi, xi].
ACochain a_mc_residual(const NilpotentBase& a, const Derivation& m, const ACochain& xi);

/// Component X_r must have derivation degree 1 - |a_r| and no constant term.
void check_deformation_shape(const NilpotentBase& a, const ACochain& xi, int total_degree = 1);
bool is_deformation(const LInftyStructure& i, const NilpotentBase& a, const ACochain& xi);

/// exp(eta) acting on the MC element xi (eta of total degree 0).
ACochain gauge_action(const NilpotentBase& a, const Derivation& m, const ACochain& eta, const ACochain& xi);

/// Total complex A (x) Der-bar over total degrees [lo, hi] (A infinitesimal
/// or not: only the differential enters).
struct TotalComplex {
    CochainWindow window{0, 0};
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> index;  // per degree: (a index, der basis index)
    bool safe = true;
};
TotalComplex total_complex(const LInftyStructure& i, const NilpotentBase& a, int lo, int hi, bool truncated = true);
ACochain total_element(const LInftyStructure& i, const NilpotentBase& a, const TotalComplex& t, int degree,
                       const Vector& coords, bool truncated = true);

/// A / A^k with the induced products and differential (basis adapted to the
/// power filtration).
NilpotentBase quotient_by_power(const NilpotentBase& a, int k);

struct LiftResult {
    bool lifted = false;
    ACochain lift;
    /// Kernel basis index and coordinates of a cocycle of derivation degree
    /// 2-|k| that is not a coboundary.
    std::vector<std::pair<std::size_t, Vector>> obstruction;
};

/// Lifts a deformation over B = A/K to A for a small extension (A_+ K = 0,
/// zero differentials). `xi_b` is given on A's basis with zero components on K.
LiftResult lift_square_zero(const LInftyStructure& i, const NilpotentBase& a, const std::vector<std::size_t>& kernel,
                            const ACochain& xi_b);

struct DefReport {
    bool infinitesimal = false;
    /// Dimension of Def over A when A is infinitesimal; otherwise the
    /// dimension of the first-order part (over A/A^2).
    std::size_t dimension = 0;
    std::vector<ACochain> representatives;
    /// For non-infinitesimal A: per representative, the first filtration
    /// level where lifting failed, or 0 if it lifted all the way.
    std::vector<int> obstructed_at;
    bool safe = true;
};

DefReport deformation_set(const LInftyStructure& i, const NilpotentBase& a);

enum class Verdict { equivalent, not_equivalent, undecided };

struct EquivalenceResult {
    Verdict verdict = Verdict::undecided;
    /// Gauge elements applied in order (one per filtration level), when equivalent.
    std::vector<ACochain> steps;
};

/// Greedy order-by-order gauge equivalence along the power filtration. Exact
/// (never undecided) when there are no degree-0 cocycles to choose from.
EquivalenceResult gauge_equivalent(const LInftyStructure& i, const NilpotentBase& a, const ACochain& x,
                                   const ACochain& y);

struct ExpLiftCheck {
    bool automorphism = false;   // exp(t theta) has inverse exp(-t theta)
    bool commutes = false;       // exp(t theta) m = m exp(t theta)
    bool compatible = false;     // reduces to the order k-1 lift mod t^k
};

/// The lift of an infinitesimal automorphism theta (degree 0, [m, theta] = 0)
/// to Q[t]/t^{k+1} as exp(t theta).
ExpLiftCheck exp_lift(const LInftyStructure& i, const Derivation& theta, int k);

}  // namespace linf
