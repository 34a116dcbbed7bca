#include "isoselmer/arith.hpp"

#include "isoselmer/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <numeric>

namespace isoselmer {

namespace {

using UInt = unsigned __int128;

constexpr Int kIntMax = static_cast<Int>(~static_cast<UInt>(0) >> 1);

UInt uabs(Int n) { return n < 0 ? static_cast<UInt>(0) - static_cast<UInt>(n) : static_cast<UInt>(n); }

} // namespace

std::string to_string(Int n)
{
    if (n == 0)
        return "0";
    UInt u = uabs(n);
    std::string digits;
    while (u != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (n < 0)
        digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::optional<Int> parse_int(std::string_view text)
{
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i == text.size())
        return std::nullopt;
    Int value = 0;
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            return std::nullopt;
        const int digit = text[i] - '0';
        if (value > (kIntMax - digit) / 10)
            return std::nullopt;
        value = value * 10 + digit;
    }
    return negative ? -value : value;
}

Int checked_mul(Int x, Int y)
{
    Int out;
    if (__builtin_mul_overflow(x, y, &out))
        throw ResourceError("integer overflow beyond 127 bits");
    return out;
}

Int checked_add(Int x, Int y)
{
    Int out;
    if (__builtin_add_overflow(x, y, &out))
        throw ResourceError("integer overflow beyond 127 bits");
    return out;
}

Int checked_sub(Int x, Int y)
{
    Int out;
    if (__builtin_sub_overflow(x, y, &out))
        throw ResourceError("integer overflow beyond 127 bits");
    return out;
}

Int abs_value(Int n) { return n < 0 ? checked_sub(0, n) : n; }

Int isqrt(Int n)
{
    if (n < 0)
        throw DomainError("isqrt of a negative number");
    if (n < 2)
        return n;
    // Newton iteration from an upper bound 2^ceil(bits/2).
    const UInt un = static_cast<UInt>(n);
    int bits = 0;
    for (UInt u = un; u != 0; u >>= 1)
        ++bits;
    UInt x = static_cast<UInt>(1) << ((bits + 1) / 2);
    while (true) {
        UInt y = (x + un / x) / 2;
        if (y >= x)
            break;
        x = y;
    }
    return static_cast<Int>(x);
}

bool is_perfect_square(Int n)
{
    if (n < 0)
        return false;
    Int r = isqrt(n);
    return r * r == n;
}

namespace detail {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<UInt>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t result = 1 % m;
    a %= m;
    while (e != 0) {
        if (e & 1)
            result = mulmod(result, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return result;
}

std::uint64_t reduce(Int a, std::uint64_t m)
{
    Int r = a % static_cast<Int>(m);
    if (r < 0)
        r += static_cast<Int>(m);
    return static_cast<std::uint64_t>(r);
}

int legendre_unchecked(Int a, Prime p)
{
    std::uint64_t r = reduce(a, p);
    if (r == 0)
        return 0;
    // Jacobi symbol via reciprocity; p is an odd prime so this is the Legendre symbol.
    std::uint64_t n = p;
    int t = 1;
    while (r != 0) {
        while ((r & 1) == 0) {
            r >>= 1;
            const std::uint64_t m8 = n & 7;
            if (m8 == 3 || m8 == 5)
                t = -t;
        }
        std::swap(r, n);
        if ((r & 3) == 3 && (n & 3) == 3)
            t = -t;
        r %= n;
    }
    return n == 1 ? t : 0;
}

} // namespace detail

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0)
            return n == small;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This base set is deterministic for all n < 2^64.
    for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        std::uint64_t x = detail::powmod(a % n, d, n);
        if (a % n == 0 || x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::vector<Prime> primes_up_to(std::uint64_t limit)
{
    std::vector<Prime> out;
    if (limit < 2)
        return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return out;
}

namespace {

const std::vector<Prime>& trial_primes()
{
    static const std::vector<Prime> primes = primes_up_to(kTrialDivisionLimit);
    return primes;
}

std::uint64_t pollard_brent(std::uint64_t n)
{
    if (n % 2 == 0)
        return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        const std::uint64_t m = 128;
        std::uint64_t r = 1;
        auto f = [&](std::uint64_t v) { return (detail::mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                y = f(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = detail::mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_large(std::uint64_t n, std::vector<Prime>& out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_brent(n);
    factor_large(d, out);
    factor_large(n / d, out);
}

} // namespace

PrimeFactorization factor(Int n)
{
    if (n == 0)
        throw DomainError("factor: zero has no factorization");
    PrimeFactorization out;
    out.unit_sign = n < 0 ? -1 : 1;
    UInt m = uabs(n);
    for (Prime p : trial_primes()) {
        if (static_cast<UInt>(p) * p > m)
            break;
        if (m % p != 0)
            continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.factors.emplace_back(p, e);
    }
    if (m == 1)
        return out;
    if (m > std::numeric_limits<std::uint64_t>::max())
        throw ResourceError("factor: cofactor " + to_string(static_cast<Int>(m)) +
                            " exceeds 2^64 after trial division");
    std::vector<Prime> rest;
    factor_large(static_cast<std::uint64_t>(m), rest);
    std::sort(rest.begin(), rest.end());
    for (Prime p : rest) {
        if (!out.factors.empty() && out.factors.back().first == p)
            ++out.factors.back().second;
        else
            out.factors.emplace_back(p, 1);
    }
    std::sort(out.factors.begin(), out.factors.end());
    return out;
}

int valuation(Int n, Prime p)
{
    if (n == 0)
        throw DomainError("valuation of zero");
    int v = 0;
    while (n % static_cast<Int>(p) == 0) {
        n /= static_cast<Int>(p);
        ++v;
    }
    return v;
}

bool SquareClass::contains(Prime p) const { return std::binary_search(primes.begin(), primes.end(), p); }

Int SquareClass::value() const
{
    Int v = negative ? -1 : 1;
    for (Prime p : primes)
        v = checked_mul(v, static_cast<Int>(p));
    return v;
}

SquareClass operator*(const SquareClass& x, const SquareClass& y)
{
    SquareClass out;
    out.negative = x.negative != y.negative;
    std::set_symmetric_difference(x.primes.begin(), x.primes.end(), y.primes.begin(), y.primes.end(),
                                  std::back_inserter(out.primes));
    return out;
}

std::string to_string(const SquareClass& c)
{
    std::string out = c.negative ? "-" : "+";
    out += "{";
    for (std::size_t i = 0; i < c.primes.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(c.primes[i]);
    }
    return out + "}";
}

SquareClass square_class(Int n)
{
    if (n == 0)
        throw DomainError("square_class: zero is not a unit");
    SquareClass out;
    const PrimeFactorization f = factor(n);
    out.negative = f.unit_sign < 0;
    for (const auto& [p, e] : f.factors) {
        if (e % 2 == 1)
            out.primes.push_back(p);
    }
    return out;
}

int legendre(Int a, Prime p)
{
    if (p == 2 || !is_prime(p))
        throw DomainError("legendre: modulus " + std::to_string(p) + " is not an odd prime");
    return detail::legendre_unchecked(a, p);
}

Prime least_nonresidue(Prime p)
{
    if (p == 2 || !is_prime(p))
        throw DomainError("least_nonresidue: modulus is not an odd prime");
    for (Prime u = 2;; ++u) {
        if (detail::legendre_unchecked(static_cast<Int>(u), p) == -1)
            return u;
    }
}

std::string to_string(Place v) { return v.is_infinite() ? std::string("inf") : std::to_string(v.p); }

unsigned local_group_size(Place v)
{
    if (v.is_infinite())
        return 2;
    return v.p == 2 ? 8 : 4;
}

std::int64_t canonical_rep(Place v, unsigned index)
{
    if (index >= local_group_size(v))
        throw DomainError("canonical_rep: index out of range for place " + to_string(v));
    if (v.is_infinite())
        return index ? -1 : 1;
    if (v.p == 2) {
        std::int64_t r = 1;
        if (index & 2)
            r *= 2;
        if (index & 4)
            r *= 5;
        return (index & 1) ? -r : r;
    }
    std::int64_t r = 1;
    if (index & 1)
        r *= static_cast<std::int64_t>(least_nonresidue(v.p));
    if (index & 2)
        r *= static_cast<std::int64_t>(v.p);
    return r;
}

std::int64_t LocalClassRep::rep() const { return canonical_rep(place, index); }

namespace {

// Residue mod 8 of the odd part of c.
unsigned odd_part_mod8(const SquareClass& c)
{
    unsigned r = 1;
    for (Prime q : c.primes) {
        if (q != 2)
            r = (r * static_cast<unsigned>(q % 8)) % 8;
    }
    return c.negative ? (8 - r) % 8 : r;
}

// Legendre symbol of the p-unit part of c, p odd.
int unit_part_legendre(const SquareClass& c, Prime p)
{
    int s = c.negative ? detail::legendre_unchecked(-1, p) : 1;
    for (Prime q : c.primes) {
        if (q != p)
            s *= detail::legendre_unchecked(static_cast<Int>(q), p);
    }
    return s;
}

unsigned two_adic_unit_index(unsigned u_mod8)
{
    switch (u_mod8) {
    case 1: return 0;
    case 7: return 1;      // -1
    case 5: return 4;      // 5
    case 3: return 1 | 4;  // -5
    default: throw InternalError("two_adic_unit_index: even residue");
    }
}

} // namespace

LocalClassRep localize(const SquareClass& c, Place v)
{
    if (v.is_infinite())
        return {v, c.negative ? 1u : 0u};
    if (v.p == 2) {
        unsigned index = two_adic_unit_index(odd_part_mod8(c));
        if (c.contains(2))
            index |= 2;
        return {v, index};
    }
    unsigned index = unit_part_legendre(c, v.p) == -1 ? 1u : 0u;
    if (c.contains(v.p))
        index |= 2;
    return {v, index};
}

int hilbert(const SquareClass& alpha, const SquareClass& beta, Place v)
{
    if (v.is_infinite())
        return (alpha.negative && beta.negative) ? -1 : 1;
    if (v.p == 2) {
        const unsigned a = alpha.contains(2) ? 1 : 0;
        const unsigned b = beta.contains(2) ? 1 : 0;
        const unsigned u = odd_part_mod8(alpha);
        const unsigned w = odd_part_mod8(beta);
        auto eps = [](unsigned x) { return ((x - 1) / 2) & 1; };
        auto omega = [](unsigned x) { return ((x * x - 1) / 8) & 1; };
        const unsigned e = (eps(u) * eps(w) + a * omega(w) + b * omega(u)) & 1;
        return e ? -1 : 1;
    }
    const Prime p = v.p;
    const unsigned a = alpha.contains(p) ? 1 : 0;
    const unsigned b = beta.contains(p) ? 1 : 0;
    int s = 1;
    if ((a & b) && ((p - 1) / 2) % 2 == 1)
        s = -s;
    if (b)
        s *= unit_part_legendre(alpha, p);
    if (a)
        s *= unit_part_legendre(beta, p);
    return s;
}

namespace {

std::uint64_t tonelli_shanks(std::uint64_t n, std::uint64_t p)
{
    if (p % 4 == 3)
        return detail::powmod(n, (p + 1) / 4, p);
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (detail::legendre_unchecked(static_cast<Int>(z), p) != -1)
        ++z;
    std::uint64_t m = static_cast<std::uint64_t>(s);
    std::uint64_t c = detail::powmod(z, q, p);
    std::uint64_t t = detail::powmod(n, q, p);
    std::uint64_t r = detail::powmod(n, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = detail::mulmod(tt, tt, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j)
            b = detail::mulmod(b, b, p);
        m = i;
        c = detail::mulmod(b, b, p);
        t = detail::mulmod(t, c, p);
        r = detail::mulmod(r, b, p);
    }
    return r;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m)
{
    Int t = 0, new_t = 1;
    Int r = static_cast<Int>(m), new_r = static_cast<Int>(a % m);
    while (new_r != 0) {
        const Int q = r / new_r;
        t = t - q * new_t;
        std::swap(t, new_t);
        r = r - q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1)
        throw InternalError("inverse_mod: not invertible");
    if (t < 0)
        t += static_cast<Int>(m);
    return static_cast<std::uint64_t>(t);
}

} // namespace

std::optional<std::uint64_t> sqrt_hensel(Int c, Prime p, unsigned k)
{
    if (p == 2 || !is_prime(p))
        throw DomainError("sqrt_hensel: modulus is not an odd prime");
    if (k == 0)
        throw DomainError("sqrt_hensel: precision must be positive");
    if (detail::reduce(c, p) == 0)
        throw DomainError("sqrt_hensel: p divides c");
    if (detail::legendre_unchecked(c, p) != 1)
        return std::nullopt;

    std::uint64_t modulus = p;
    std::uint64_t root = tonelli_shanks(detail::reduce(c, p), p);
    for (unsigned j = 2; j <= k; ++j) {
        if (modulus > std::numeric_limits<std::uint64_t>::max() / 4 / p)
            throw ResourceError("sqrt_hensel: p^k exceeds 62 bits");
        modulus *= p;
        // Newton step r <- r - (r^2 - c) / (2r) modulo p^j.
        const std::uint64_t cm = detail::reduce(c, modulus);
        const std::uint64_t r2 = detail::mulmod(root, root, modulus);
        const std::uint64_t diff = (r2 + modulus - cm) % modulus;
        const std::uint64_t inv = inverse_mod(detail::mulmod(2, root, modulus), modulus);
        root = (root + modulus - detail::mulmod(diff, inv, modulus)) % modulus;
    }
    return std::min(root, modulus - root);
}

} // namespace isoselmer
