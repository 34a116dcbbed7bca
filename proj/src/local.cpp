#include "isoselmer/local.hpp"

#include "isoselmer/errors.hpp"
#include "isoselmer/twist.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>
#include <tuple>

namespace isoselmer {

LocalSubgroup LocalSubgroup::full(Place v)
{
    const unsigned n = local_group_size(v);
    return {v, static_cast<std::uint8_t>((1u << n) - 1)};
}

LocalSubgroup LocalSubgroup::generated_by(Place v, const std::vector<unsigned>& generators)
{
    unsigned mask = 1;
    for (unsigned g : generators) {
        if (g >= local_group_size(v))
            throw DomainError("LocalSubgroup::generated_by: index out of range");
        unsigned next = mask;
        for (unsigned i = 0; i < 8; ++i)
            if ((mask >> i) & 1)
                next |= 1u << (i ^ g);
        mask = next;
    }
    return {v, static_cast<std::uint8_t>(mask)};
}

unsigned LocalSubgroup::size() const { return static_cast<unsigned>(std::popcount(mask_)); }

unsigned LocalSubgroup::dim() const { return static_cast<unsigned>(std::countr_zero(size())); }

bool LocalSubgroup::is_subgroup() const
{
    if (!contains(0u))
        return false;
    const unsigned n = local_group_size(place_);
    if (mask_ >> n)
        return false;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
            if (contains(i) && contains(j) && !contains(i ^ j))
                return false;
    return true;
}

std::vector<LocalClassRep> LocalSubgroup::members() const
{
    std::vector<LocalClassRep> out;
    for (unsigned i = 0; i < 8; ++i)
        if (contains(i))
            out.push_back({place_, i});
    return out;
}

std::string to_string(const LocalSubgroup& g)
{
    std::string s = "{";
    for (const LocalClassRep& c : g.members()) {
        if (s.size() > 1)
            s += ", ";
        s += std::to_string(c.rep());
    }
    return s + "} at " + to_string(g.place());
}

namespace {

mpz_class to_mpz(Int n)
{
    return mpz_class(to_string(n));
}

unsigned mpz_valuation(const mpz_class& n, unsigned long p)
{
    mpz_class rest = n;
    return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

// Some real u >= 0 with A u^2 + B u + C >= 0.
bool nonnegative_somewhere(const mpz_class& A, const mpz_class& B, const mpz_class& C)
{
    if (C >= 0 || A > 0)
        return true;
    if (A == 0)
        return B > 0;
    // A < 0: the maximum is at u = -B / 2A, which is positive iff B > 0.
    if (B <= 0)
        return false;
    return 4 * A * C - B * B <= 0;
}

bool real_solvable(Int alpha_sign, const IsogenyCurve& e)
{
    if (alpha_sign > 0)
        return true;
    const mpz_class al(-1);
    const mpz_class a = to_mpz(e.a()), c = to_mpz(e.disc_core());
    // W^2 = alpha^3 - 2a alpha^2 u + alpha c u^2 on one patch (u = s^2), reversed on the other.
    const mpz_class g0 = al * al * al, g2 = -2 * a * al * al, g4 = al * c;
    return nonnegative_somewhere(g4, g2, g0) || nonnegative_somewhere(g0, g2, g4);
}

using Quartic = std::array<mpz_class, 5>;

struct BallSearch {
    Quartic g;
    unsigned long p;
    unsigned depth_bound;

    bool solvable(const mpz_class& x0, unsigned k) const
    {
        // Taylor coefficients of g(x0 + z), then substitute z = p^k y.
        Quartic h = g;
        for (int i = 0; i < 4; ++i)
            for (int j = 3; j >= i; --j)
                h[j] += x0 * h[j + 1];
        const mpz_class derivative = h[1];
        mpz_class scale = 1, pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
        for (int i = 1; i <= 4; ++i) {
            scale *= pk;
            h[i] *= scale;
        }
        if (h[0] == 0)
            return true;
        const unsigned e = mpz_valuation(h[0], p);
        unsigned m = ~0u;
        for (int i = 1; i <= 4; ++i)
            if (h[i] != 0)
                m = std::min(m, mpz_valuation(h[i], p));
        if (e < m) {
            if (e % 2 == 1)
                return false;
            mpz_class unit = h[0];
            mpz_class pe;
            mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
            mpz_divexact(unit.get_mpz_t(), unit.get_mpz_t(), pe.get_mpz_t());
            if (p != 2)
                return mpz_kronecker_ui(unit.get_mpz_t(), p) == 1;
            if (m - e >= 3)
                return mpz_fdiv_ui(unit.get_mpz_t(), 8) == 1;
        }
        // A simple root of g inside the ball gives W = 0.
        if (derivative != 0) {
            const unsigned vd = mpz_valuation(derivative, p);
            if (e > 2 * vd && e - vd >= k)
                return true;
        }
        if (k >= depth_bound)
            throw InternalError("torsor search exceeded precision " + std::to_string(depth_bound) + " at p = " +
                                std::to_string(p));
        for (unsigned long j = 0; j < p; ++j)
            if (solvable(x0 + mpz_class(j) * pk, k + 1))
                return true;
        return false;
    }
};

} // namespace

unsigned torsor_depth_bound(const IsogenyCurve& e, Prime p)
{
    const unsigned v2 = p == 2 ? 1 : 0;
    const unsigned vbc = static_cast<unsigned>(valuation(e.b(), p) + valuation(e.disc_core(), p));
    return 8 * v2 + 2 * vbc + 5;
}

bool torsor_solvable(const TorsorProblem& t)
{
    const Place v = t.place;
    if (v.is_infinite())
        return real_solvable(t.alpha.negative ? -1 : 1, t.curve);

    // Solvability depends on the local class only: alpha -> alpha x^2 rescales w.
    const mpz_class al(static_cast<long>(localize(t.alpha, v).rep()));
    const mpz_class a = to_mpz(t.curve.a()), c = to_mpz(t.curve.disc_core());
    // W = alpha w, W^2 = alpha * quartic.
    const Quartic patch_s{al * al * al, 0, -2 * a * al * al, 0, al * c};
    const Quartic patch_t{al * c, 0, -2 * a * al * al, 0, al * al * al};
    const unsigned bound = torsor_depth_bound(t.curve, v.p);
    const BallSearch s{patch_s, static_cast<unsigned long>(v.p), bound};
    if (s.solvable(0, 0))
        return true;
    const BallSearch u{patch_t, static_cast<unsigned long>(v.p), bound};
    return u.solvable(0, 1);
}

namespace {

using OracleKey = std::tuple<Int, Int, Prime>;

std::mutex& oracle_mutex()
{
    static std::mutex m;
    return m;
}

std::map<OracleKey, std::uint8_t>& oracle_cache()
{
    static std::map<OracleKey, std::uint8_t> cache;
    return cache;
}

} // namespace

LocalSubgroup kummer_image_oracle(const IsogenyCurve& e, Place v)
{
    const OracleKey key{e.a(), e.b(), v.p};
    {
        std::lock_guard lock(oracle_mutex());
        const auto it = oracle_cache().find(key);
        if (it != oracle_cache().end())
            return {v, it->second};
    }
    unsigned mask = 0;
    for (unsigned i = 0; i < local_group_size(v); ++i) {
        const SquareClass alpha = square_class(canonical_rep(v, i));
        if (torsor_solvable({alpha, e, v}))
            mask |= 1u << i;
    }
    const LocalSubgroup g{v, static_cast<std::uint8_t>(mask)};
    if (!g.is_subgroup())
        throw InternalError("Kummer image " + to_string(g) + " of " + e.spec() + " is not a subgroup");
    std::lock_guard lock(oracle_mutex());
    oracle_cache().emplace(key, g.mask());
    return g;
}

std::optional<LocalSubgroup> kummer_image_fast(const IsogenyCurve& e, Place v, const std::optional<TwistContext>& context)
{
    if (v.is_infinite()) {
        // Trivial exactly when b < 0, or when a > 0 < b with a^2 - 4b > 0.
        if (e.b() < 0 || (e.disc_core() > 0 && e.a() > 0))
            return LocalSubgroup::trivial(v);
        return LocalSubgroup::full(v);
    }
    if (v.p != 2 && !e.is_bad(v.p))
        return LocalSubgroup::generated_by(v, {1});
    if (!context || v.p == 2 || context->d % static_cast<Int>(v.p) != 0)
        return std::nullopt;

    const IsogenyCurve& base = context->base;
    if (!(quadratic_twist(base, -context->d) == e))
        throw DomainError("kummer_image_fast: " + e.spec() + " is not the twist of " + base.spec() + " by -" +
                          to_string(context->d));
    if (base.is_bad(v.p))
        return std::nullopt;
    switch (sign_case(base)) {
    case SignCase::I:
        return LocalSubgroup::trivial(v);
    case SignCase::II:
        return LocalSubgroup::full(v);
    case SignCase::III:
    case SignCase::IV: {
        const TdPartition part = partition_Td(base, context->d);
        const bool plus = std::binary_search(part.plus.begin(), part.plus.end(), v.p);
        return LocalSubgroup::generated_by(v, {localize(SquareClass::of_prime(v.p, !plus), v).index});
    }
    }
    return std::nullopt;
}

LocalSubgroup kummer_image(const IsogenyCurve& e, Place v, const std::optional<TwistContext>& context)
{
    if (auto fast = kummer_image_fast(e, v, context))
        return *fast;
    return kummer_image_oracle(e, v);
}

} // namespace isoselmer
