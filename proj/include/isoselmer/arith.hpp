#pragma once

// Exact integer arithmetic, quadratic symbols and square classes of Q and Q_v.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace isoselmer {

// Curve coefficients of twists and isogenous curves outgrow 64 bits quickly.
using Int = __int128;
using Prime = std::uint64_t;

std::string to_string(Int n);
std::optional<Int> parse_int(std::string_view text);

Int checked_mul(Int x, Int y);
Int checked_add(Int x, Int y);
Int checked_sub(Int x, Int y);
Int abs_value(Int n);

/// Integer square root of n >= 0, rounded down.
Int isqrt(Int n);
bool is_perfect_square(Int n);

/// Deterministic Miller-Rabin, exact on the whole 64-bit range.
bool is_prime(std::uint64_t n);

/// Primes <= limit in increasing order.
std::vector<Prime> primes_up_to(std::uint64_t limit);

struct PrimeFactorization {
    int unit_sign = 1;
    std::vector<std::pair<Prime, int>> factors;

    friend bool operator==(const PrimeFactorization&, const PrimeFactorization&) = default;
};

inline constexpr std::uint64_t kTrialDivisionLimit = 1'000'000;

/// Exact factorization of n != 0. Trial division up to kTrialDivisionLimit,
/// then Pollard rho on the cofactor, which must be below 2^64.
PrimeFactorization factor(Int n);

/// p-adic valuation of n != 0.
int valuation(Int n, Prime p);

/// An element of Q^x / Q^x2, stored as the squarefree representative
/// (negative ? -1 : 1) * prod(primes).
struct SquareClass {
    bool negative = false;
    std::vector<Prime> primes; // strictly increasing

    static SquareClass one() { return {}; }
    static SquareClass minus_one() { return {true, {}}; }
    static SquareClass of_prime(Prime p, bool negative = false) { return {negative, {p}}; }

    bool contains(Prime p) const;
    bool is_one() const { return !negative && primes.empty(); }

    /// The squarefree representative; throws ResourceError if it overflows Int.
    Int value() const;

    friend SquareClass operator*(const SquareClass& x, const SquareClass& y);
    friend bool operator==(const SquareClass&, const SquareClass&) = default;
    friend auto operator<=>(const SquareClass&, const SquareClass&) = default;
};

std::string to_string(const SquareClass& c);

SquareClass square_class(Int n);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(Int a, Prime p);

/// Least positive quadratic nonresidue modulo the odd prime p.
Prime least_nonresidue(Prime p);

/// A place of Q: a prime, or the real place (stored as 0).
struct Place {
    Prime p = 0;

    static constexpr Place infinity() { return {0}; }
    static constexpr Place prime(Prime q) { return {q}; }
    constexpr bool is_infinite() const { return p == 0; }

    friend constexpr auto operator<=>(const Place&, const Place&) = default;
};

std::string to_string(Place v);

/// Size of Q_v^x / Q_v^x2: 2 at infinity, 8 at 2, 4 at odd primes.
unsigned local_group_size(Place v);

/// Canonical coset representative of Q_v^x / Q_v^x2.
///
/// Indices are F2 coordinates, so the group law is XOR:
///   odd p : index = gamma + 2*lambda, reps {1, u_p, p, u_p*p};
///   p = 2 : index = s + 2*t + 4*f for (-1)^s 2^t 5^f, reps {1,-1,2,-2,5,-5,10,-10};
///   inf   : index = sign bit, reps {1, -1}.
struct LocalClassRep {
    Place place;
    unsigned index = 0;

    std::int64_t rep() const;

    friend bool operator==(const LocalClassRep&, const LocalClassRep&) = default;
};

std::int64_t canonical_rep(Place v, unsigned index);

LocalClassRep localize(const SquareClass& c, Place v);

/// Quadratic Hilbert symbol (alpha, beta)_v in {-1, +1}.
int hilbert(const SquareClass& alpha, const SquareClass& beta, Place v);

/// A square root of c modulo p^k for an odd prime p not dividing c, normalized
/// to the smaller of the two roots. Empty when c is a nonresidue mod p.
std::optional<std::uint64_t> sqrt_hensel(Int c, Prime p, unsigned k);

namespace detail {
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t reduce(Int a, std::uint64_t m);
// Legendre symbol without validating that p is an odd prime.
int legendre_unchecked(Int a, Prime p);
} // namespace detail

} // namespace isoselmer
