#include "isoselmer/curve.hpp"

#include "isoselmer/errors.hpp"

#include <algorithm>

namespace isoselmer {

std::string to_string(SignCase c)
{
    switch (c) {
    case SignCase::I: return "I";
    case SignCase::II: return "II";
    case SignCase::III: return "III";
    case SignCase::IV: return "IV";
    }
    return "?";
}

bool IsogenyCurve::is_bad(Prime p) const
{
    return std::binary_search(bad_support_.begin(), bad_support_.end(), p);
}

std::string IsogenyCurve::spec() const { return to_string(a_) + "," + to_string(b_); }

IsogenyCurve IsogenyCurve::build(Int a, Int b, std::vector<Prime> bad_support)
{
    if (b == 0)
        throw InvalidModel("singular model: b = 0");
    const Int disc = checked_sub(checked_mul(a, a), checked_mul(4, b));
    if (disc == 0)
        throw InvalidModel("singular model: a^2 - 4b = 0");
    IsogenyCurve e;
    e.a_ = a;
    e.b_ = b;
    e.disc_core_ = disc;
    e.full_two_torsion_ = is_perfect_square(disc);
    std::sort(bad_support.begin(), bad_support.end());
    bad_support.erase(std::unique(bad_support.begin(), bad_support.end()), bad_support.end());
    e.bad_support_ = std::move(bad_support);
    return e;
}

IsogenyCurve new_curve(Int a, Int b)
{
    if (b == 0)
        throw InvalidModel("singular model: b = 0");
    const Int disc = checked_sub(checked_mul(a, a), checked_mul(4, b));
    if (disc == 0)
        throw InvalidModel("singular model: a^2 - 4b = 0");
    if (is_perfect_square(disc))
        throw FullTwoTorsion("a^2 - 4b = " + to_string(disc) +
                             " is a perfect square: the curve has full rational 2-torsion");
    std::vector<Prime> support{2};
    for (Int n : {b, disc}) {
        for (const auto& [p, e] : factor(n).factors)
            support.push_back(p);
    }
    return IsogenyCurve::build(a, b, std::move(support));
}

IsogenyCurve parse_curve(std::string_view spec)
{
    const auto comma = spec.find(',');
    if (comma == std::string_view::npos)
        throw DomainError("curve spec must be \"a,b\", got \"" + std::string(spec) + "\"");
    const auto a = parse_int(spec.substr(0, comma));
    const auto b = parse_int(spec.substr(comma + 1));
    if (!a || !b)
        throw DomainError("curve spec must be two signed decimal integers, got \"" + std::string(spec) + "\"");
    return new_curve(*a, *b);
}

IsogenyCurve isogenous_curve(const IsogenyCurve& e)
{
    // b(a^2-4b) and (a^2-4b)*16b share their odd primes.
    return IsogenyCurve::build(checked_mul(-2, e.a()), e.disc_core(), e.bad_support());
}

IsogenyCurve quadratic_twist(const IsogenyCurve& e, Int m)
{
    if (m == 0)
        throw DomainError("quadratic_twist: m = 0");
    const PrimeFactorization f = factor(m);
    std::vector<Prime> support = e.bad_support();
    for (const auto& [p, k] : f.factors) {
        if (k != 1)
            throw DomainError("quadratic_twist: m = " + to_string(m) + " is not squarefree");
        support.push_back(p);
    }
    return IsogenyCurve::build(checked_mul(e.a(), m), checked_mul(e.b(), checked_mul(m, m)), std::move(support));
}

SignCase sign_case(const IsogenyCurve& e)
{
    if (e.b() < 0)
        return SignCase::I;
    if (e.disc_core() < 0)
        return SignCase::II;
    // b > 0 and a = 0 force a^2 - 4b < 0.
    if (e.a() == 0)
        throw UnsupportedConfiguration("a = 0 with b > 0 and positive discriminant");
    return e.a() < 0 ? SignCase::III : SignCase::IV;
}

} // namespace isoselmer
