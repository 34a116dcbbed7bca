#pragma once

// Curves y^2 = x(x^2 + a x + b) with a rational 2-isogeny, their isogenous
// curves and quadratic twists.

#include "isoselmer/arith.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace isoselmer {

/// The sign configuration of (a, b, a^2 - 4b) that selects every twist formula.
enum class SignCase {
    I,   // b < 0
    II,  // b > 0, disc < 0
    III, // b > 0, disc > 0, a < 0
    IV,  // b > 0, disc > 0, a > 0
};

std::string to_string(SignCase c);

class IsogenyCurve {
public:
    Int a() const { return a_; }
    Int b() const { return b_; }
    /// a^2 - 4b; the discriminant is 16 b^2 (a^2 - 4b).
    Int disc_core() const { return disc_core_; }
    int disc_sign() const { return disc_core_ > 0 ? 1 : -1; }
    /// {2} together with every odd prime dividing b (a^2 - 4b); contains the
    /// primes of bad reduction.
    const std::vector<Prime>& bad_support() const { return bad_support_; }
    bool is_bad(Prime p) const;
    /// True when a^2 - 4b is a square, i.e. all of E[2] is rational. Only
    /// derived curves (isogenous curves, twists of them) can have this set.
    bool full_two_torsion() const { return full_two_torsion_; }

    std::string spec() const; // "a,b"

    friend bool operator==(const IsogenyCurve& x, const IsogenyCurve& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

private:
    friend IsogenyCurve new_curve(Int a, Int b);
    friend IsogenyCurve isogenous_curve(const IsogenyCurve& e);
    friend IsogenyCurve quadratic_twist(const IsogenyCurve& e, Int m);

    static IsogenyCurve build(Int a, Int b, std::vector<Prime> bad_support);

    Int a_ = 0;
    Int b_ = 0;
    Int disc_core_ = 0;
    std::vector<Prime> bad_support_;
    bool full_two_torsion_ = false;
};

/// Validates (a, b): nonsingular and with exactly one nontrivial rational
/// 2-torsion point. Throws InvalidModel or FullTwoTorsion.
IsogenyCurve new_curve(Int a, Int b);

/// Parses "a,b" (two signed decimal integers) and validates it.
IsogenyCurve parse_curve(std::string_view spec);

/// E' : y^2 = x(x^2 - 2a x + (a^2 - 4b)).
IsogenyCurve isogenous_curve(const IsogenyCurve& e);

/// E^m : y^2 = x(x^2 + a m x + b m^2) for squarefree m.
IsogenyCurve quadratic_twist(const IsogenyCurve& e, Int m);

SignCase sign_case(const IsogenyCurve& e);

} // namespace isoselmer
