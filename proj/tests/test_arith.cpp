#include "isoselmer/arith.hpp"
#include "isoselmer/errors.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace isoselmer;

namespace {

// Reference factorization by plain trial division.
std::vector<std::pair<Prime, int>> naive_factor(std::uint64_t n)
{
    std::vector<std::pair<Prime, int>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k)
            out.push_back({p, k});
    }
    if (n > 1)
        out.push_back({n, 1});
    return out;
}

int euler_legendre(std::int64_t a, std::uint64_t p)
{
    const std::int64_t r = ((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
    if (r == 0)
        return 0;
    for (std::uint64_t x = 1; x < p; ++x)
        if (x * x % p == static_cast<std::uint64_t>(r))
            return 1;
    return -1;
}

std::vector<Int> squarefree_upto(int n)
{
    std::vector<Int> out;
    for (int x = -n; x <= n; ++x)
        if (x != 0 && square_class(x).value() == x)
            out.push_back(x);
    return out;
}

// (a, b)_p = 1 iff a is a value of X^2 - b Y^2 up to squares in Q_p.
int hilbert_by_norms(Int a, Int b, Prime p)
{
    const Place v = Place::prime(p);
    std::set<unsigned> norms;
    for (Int x = 0; x < 64; ++x)
        for (Int y = 0; y < 64; ++y) {
            const Int n = x * x - b * y * y;
            if (n != 0)
                norms.insert(localize(square_class(n), v).index);
        }
    return norms.count(localize(square_class(a), v).index) ? 1 : -1;
}

} // namespace

TEST_SUITE("arith")
{
    TEST_CASE("factor matches trial division")
    {
        CHECK(factor(1) == PrimeFactorization{1, {}});
        CHECK(factor(-512) == PrimeFactorization{-1, {{2, 9}}});
        CHECK(factor(360) == PrimeFactorization{1, {{2, 3}, {3, 2}, {5, 1}}});
        std::mt19937_64 rng(7);
        for (int i = 0; i < 2000; ++i) {
            const std::uint64_t n = rng() % 50'000'000 + 1;
            const PrimeFactorization f = factor(static_cast<Int>(n));
            CHECK(f.unit_sign == 1);
            CHECK(f.factors == naive_factor(n));
        }
        CHECK_THROWS_AS(factor(0), DomainError);
    }

    TEST_CASE("factor splits products of large primes")
    {
        const PrimeFactorization f = factor(static_cast<Int>(1000000007) * 1000000009);
        CHECK(f.factors == std::vector<std::pair<Prime, int>>{{1000000007, 1}, {1000000009, 1}});
        const Int big = static_cast<Int>(4294967291ULL) * 4294967279ULL * 3;
        CHECK(factor(big).factors == std::vector<std::pair<Prime, int>>{{3, 1}, {4294967279ULL, 1}, {4294967291ULL, 1}});
        const Int too_big = static_cast<Int>(4611686018427387847ULL) * 2305843009213693951ULL;
        CHECK_THROWS_AS(factor(too_big), ResourceError);
    }

    TEST_CASE("primality agrees with a sieve")
    {
        const std::vector<Prime> ps = primes_up_to(100000);
        CHECK(ps.size() == 9592);
        std::set<Prime> s(ps.begin(), ps.end());
        for (std::uint64_t n = 0; n <= 100000; ++n)
            CHECK(is_prime(n) == (s.count(n) == 1));
        CHECK(is_prime(18446744073709551557ULL));
        CHECK_FALSE(is_prime(3215031751ULL)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    TEST_CASE("square classes")
    {
        CHECK(square_class(18) == SquareClass{false, {2}});
        CHECK(square_class(-4) == SquareClass{true, {}});
        CHECK(square_class(2450) == SquareClass{false, {2}});
        CHECK(square_class(1).is_one());
        CHECK_THROWS_AS(square_class(0), DomainError);
        std::mt19937_64 rng(11);
        for (int i = 0; i < 10000; ++i) {
            const Int n = static_cast<Int>(rng() % 200001) - 100000;
            const Int m = static_cast<Int>(rng() % 2000) + 1;
            if (n == 0)
                continue;
            CHECK(square_class(n * m * m) == square_class(n));
        }
        CHECK(square_class(6) * square_class(-10) == square_class(-15));
    }

    TEST_CASE("legendre symbol")
    {
        CHECK(legendre(1, 7) == 1);
        CHECK(legendre(2, 7) == 1);
        CHECK(legendre(5, 7) == -1);
        for (Prime p : primes_up_to(200)) {
            if (p == 2)
                continue;
            for (std::int64_t a = -300; a <= 300; ++a) {
                CHECK(legendre(a, p) == euler_legendre(a, p));
                CHECK(legendre(a + static_cast<std::int64_t>(p), p) == legendre(a, p));
            }
        }
        CHECK_THROWS_AS(legendre(3, 2), DomainError);
        CHECK_THROWS_AS(legendre(3, 9), DomainError);
    }

    TEST_CASE("localize")
    {
        CHECK(localize(SquareClass::one(), Place::prime(7)).rep() == 1);
        CHECK(localize(square_class(-7), Place::prime(7)).rep() == 21);
        CHECK(localize(square_class(3), Place::infinity()).rep() == 1);
        CHECK(local_group_size(Place::prime(2)) == 8);
        CHECK(local_group_size(Place::prime(3)) == 4);
        CHECK(local_group_size(Place::infinity()) == 2);

        // Homomorphism on classes supported on {-1, 2, 3, 5, 7}.
        std::vector<SquareClass> classes;
        for (unsigned m = 0; m < 32; ++m) {
            SquareClass c;
            c.negative = m & 1;
            const Prime ps[] = {2, 3, 5, 7};
            for (int i = 0; i < 4; ++i)
                if ((m >> (i + 1)) & 1)
                    c.primes.push_back(ps[i]);
            classes.push_back(c);
        }
        for (Place v : {Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7), Place::infinity()})
            for (const SquareClass& x : classes)
                for (const SquareClass& y : classes)
                    CHECK(localize(x * y, v).index == (localize(x, v).index ^ localize(y, v).index));
    }

    TEST_CASE("canonical representatives localize to themselves")
    {
        for (Place v : {Place::infinity(), Place::prime(2), Place::prime(3), Place::prime(7), Place::prime(41)})
            for (unsigned i = 0; i < local_group_size(v); ++i)
                CHECK(localize(square_class(canonical_rep(v, i)), v).index == i);
        CHECK(canonical_rep(Place::prime(7), 1) == 3);
        CHECK(canonical_rep(Place::prime(2), 7) == -10);
    }

    TEST_CASE("hilbert symbol")
    {
        const Place inf = Place::infinity();
        CHECK(hilbert(SquareClass::one(), square_class(-7), Place::prime(7)) == 1);
        CHECK(hilbert(square_class(5), square_class(7), Place::prime(7)) == -1);
        CHECK(hilbert(SquareClass::minus_one(), SquareClass::minus_one(), inf) == -1);
        CHECK(hilbert(SquareClass::minus_one(), square_class(2), inf) == 1);
    }

    TEST_CASE("hilbert symbol agrees with the norm form")
    {
        const std::vector<Int> reps = squarefree_upto(12);
        for (Prime p : {2, 3, 5, 7, 11})
            for (Int a : reps)
                for (Int b : reps)
                    CHECK(hilbert(square_class(a), square_class(b), Place::prime(p)) == hilbert_by_norms(a, b, p));
    }

    TEST_CASE("hilbert reciprocity and symmetry")
    {
        const std::vector<Int> reps = squarefree_upto(50);
        for (Int x : reps)
            for (Int y : reps) {
                const SquareClass a = square_class(x), b = square_class(y);
                std::set<Prime> places{2};
                places.insert(a.primes.begin(), a.primes.end());
                places.insert(b.primes.begin(), b.primes.end());
                int prod = hilbert(a, b, Place::infinity());
                for (Prime p : places) {
                    prod *= hilbert(a, b, Place::prime(p));
                    CHECK(hilbert(a, b, Place::prime(p)) == hilbert(b, a, Place::prime(p)));
                }
                CHECK(prod == 1);
            }
    }

    TEST_CASE("sqrt_hensel")
    {
        CHECK(sqrt_hensel(4, 7, 1) == 2u);
        CHECK(sqrt_hensel(2, 7, 2) == 10u);
        CHECK_FALSE(sqrt_hensel(3, 7, 1).has_value());
        CHECK_THROWS_AS(sqrt_hensel(14, 7, 1), DomainError);
        for (Prime p : primes_up_to(100)) {
            if (p == 2)
                continue;
            for (unsigned k = 1; k <= 6; ++k) {
                Int pk = 1;
                for (unsigned i = 0; i < k; ++i)
                    pk *= p;
                for (Int c = 1; c < static_cast<Int>(p); ++c) {
                    const auto r = sqrt_hensel(c, p, k);
                    REQUIRE(r.has_value() == (legendre(c, p) == 1));
                    if (r) {
                        const Int root = static_cast<Int>(*r);
                        CHECK((root * root - c) % pk == 0);
                        CHECK(root <= pk - root);
                    }
                }
            }
        }
    }

    TEST_CASE("checked arithmetic and parsing")
    {
        const Int big = static_cast<Int>(1) << 100;
        CHECK_THROWS_AS(checked_mul(big, big), ResourceError);
        CHECK(checked_mul(-big, 2) == -(big * 2));
        CHECK(parse_int("-12345678901234567890123") == -static_cast<Int>(12345678901234567890ULL) * 1000 - 123);
        CHECK_FALSE(parse_int("12a").has_value());
        CHECK_FALSE(parse_int("").has_value());
        CHECK(to_string(parse_int("-170141183460469231731687303715884105727").value()) ==
              "-170141183460469231731687303715884105727");
        CHECK_FALSE(parse_int("170141183460469231731687303715884105728").has_value());
        CHECK(parse_int("170141183460469231731687303715884105727").has_value());
        CHECK(isqrt(99) == 9);
        CHECK(is_perfect_square(static_cast<Int>(1) << 100));
        CHECK_FALSE(is_perfect_square((static_cast<Int>(1) << 100) + 1));
    }
}
