#include "isoselmer/errors.hpp"
#include "isoselmer/selmer.hpp"
#include "isoselmer/twist.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>

using namespace isoselmer;

namespace {

const std::vector<std::pair<int, int>> kBattery{{0, -2}, {0, 2}, {-3, 1}, {3, 1}, {0, 5}, {0, -5}, {-1, 3}, {1, 3}};

SquareClass cls(Int n) { return square_class(n); }

// Every class on the bad support whose torsor is solvable at infinity and at
// each prime of the support, decided by the torsor search alone.
SelmerSubspace selmer_by_torsors(const IsogenyCurve& e)
{
    const std::vector<Prime>& sigma = e.bad_support();
    SelmerSubspace shell(sigma, {});
    std::vector<SquareClass> found;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (sigma.size() + 1)); ++bits) {
        const SquareClass c = shell.from_iota(bits);
        bool ok = torsor_solvable({c, e, Place::infinity()});
        for (std::size_t i = 0; i < sigma.size() && ok; ++i)
            ok = torsor_solvable({c, e, Place::prime(sigma[i])});
        if (ok)
            found.push_back(c);
    }
    SelmerSubspace v(sigma, found);
    REQUIRE((std::size_t{1} << v.dim()) == found.size());
    return v;
}

std::vector<Int> some_d(const IsogenyCurve& e, std::size_t limit)
{
    std::vector<Int> d = generate_D(enumerate_Q(e, 200), 3, 1'000'000);
    if (d.size() > limit)
        d.resize(limit);
    return d;
}

struct ScopedEnv {
    ScopedEnv(const char* key, const char* value) : key(key) { ::setenv(key, value, 1); }
    ~ScopedEnv() { ::unsetenv(key); }
    const char* key;
};

} // namespace

TEST_SUITE("selmer")
{
    TEST_CASE("subspaces")
    {
        const SelmerSubspace v({2, 3, 5}, {cls(-6), cls(10), cls(-15)});
        CHECK(v.dim() == 2);
        CHECK(v.contains(cls(-15)));
        CHECK(v.contains(cls(1)));
        CHECK_FALSE(v.contains(cls(3)));
        CHECK_FALSE(v.contains(cls(7)));
        CHECK(v.members().size() == 4);
        CHECK(v == SelmerSubspace({2, 3, 5, 7}, {cls(10), cls(-6)}));
        CHECK(to_string(SelmerSubspace({5}, {cls(5)})) == "<+{5}>");
        CHECK(to_string(SelmerSubspace()) == "<>");
        CHECK_THROWS_AS(SelmerSubspace({2, 3}, {cls(5)}), DomainError);
        CHECK(intersect(v, SelmerSubspace({3, 5, 7}, {cls(-15), cls(7)})) == SelmerSubspace({3, 5}, {cls(-15)}));
    }

    TEST_CASE("functional evaluation")
    {
        CHECK(eval_epsilon(cls(-3)) == 1);
        CHECK(eval_epsilon(cls(3)) == 0);
        CHECK(eval_lambda(cls(21), 7) == 1);
        CHECK(eval_lambda(cls(21), 5) == 0);
        CHECK(eval_gamma(cls(-1), 7) == 1);
        CHECK(eval_gamma(cls(14), 7) == 0);
        CHECK(eval_gamma(cls(3), 7) == 1);
        CHECK(eval_gamma(cls(-7), 7) == 1);
        CHECK_THROWS_AS(eval_gamma(cls(3), 2), DomainError);
        CHECK(Functional::gamma_plus_lambda(7)(cls(-7)) == 0);
        CHECK(to_string(Functional{true, {7}, {7}}) == "eps + gamma_7 + lambda_7");
        // gamma agrees with the Legendre symbol of the unit part.
        for (Prime q : primes_up_to(60))
            if (q != 2)
                for (Int a = -60; a <= 60; ++a)
                    if (a != 0) {
                        const SquareClass c = cls(a);
                        Int unit = c.negative ? -1 : 1;
                        for (Prime p : c.primes)
                            if (p != q)
                                unit *= p;
                        CHECK(eval_gamma(c, q) == (legendre(unit, q) == -1 ? 1 : 0));
                    }
    }

    TEST_CASE("intersection with functionals")
    {
        const SelmerSubspace v({7}, {cls(-7)});
        CHECK(intersect_with_functionals(v, {}) == v);
        CHECK(intersect_with_functionals(v, {Functional::lambda_at(7)}).dim() == 0);
        const SelmerSubspace w({2, 7}, {cls(-7), cls(2)});
        CHECK(intersect_with_functionals(w, {Functional::sign()}) == SelmerSubspace({2}, {cls(2)}));
    }

    TEST_CASE("restricted matrices")
    {
        const SelmerSubspace v({2, 7, 23}, {cls(-1), cls(2), cls(7)});
        CHECK(restricted_matrix(v, FunctionalKind::sign).to_strings() == std::vector<std::string>{"100"});
        CHECK(restricted_matrix(v, FunctionalKind::lambda, {7}).to_strings() == std::vector<std::string>{"001"});
        // (-1/23) = -1, (2/23) = 1, (7/23) = -1.
        CHECK(restricted_matrix(v, FunctionalKind::gamma, {23}).to_strings() == std::vector<std::string>{"101"});
        CHECK_THROWS_AS(restricted_matrix(v, FunctionalKind::gamma, {2}), DomainError);
    }

    TEST_CASE("matrix kernels agree with functional intersections")
    {
        const std::vector<Prime> pool{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Prime> support;
            for (Prime p : pool)
                if (rng() % 2)
                    support.push_back(p);
            std::vector<SquareClass> gens;
            const int k = static_cast<int>(rng() % 5);
            SelmerSubspace shell(support, {});
            for (int i = 0; i < k; ++i)
                gens.push_back(shell.from_iota(rng() & ((std::uint64_t{1} << (support.size() + 1)) - 1)));
            const SelmerSubspace v(support, gens);
            std::vector<Prime> t;
            std::vector<Functional> gammas, lambdas;
            for (Prime p : support)
                if (p != 2 && rng() % 2) {
                    t.push_back(p);
                    gammas.push_back(Functional::gamma_at(p));
                    lambdas.push_back(Functional::lambda_at(p));
                }
            for (auto [kind, fns] : {std::pair{FunctionalKind::gamma, gammas}, std::pair{FunctionalKind::lambda, lambdas},
                                     std::pair{FunctionalKind::sign, std::vector<Functional>{Functional::sign()}}}) {
                const F2Matrix m = restricted_matrix(v, kind, t);
                const SelmerSubspace ker = matrix_kernel(v, m);
                CHECK(ker == intersect_with_functionals(v, fns));
                CHECK(ker.dim() + f2_rank(m) == v.dim());
            }
        }
    }

    TEST_CASE("selmer groups agree with a torsor-by-torsor search")
    {
        for (auto [a, b] : kBattery) {
            const IsogenyCurve e = new_curve(a, b);
            for (const IsogenyCurve& x : {e, isogenous_curve(e)}) {
                const SelmerSubspace s = selmer_group(x);
                CHECK_MESSAGE(s == selmer_by_torsors(x), x.spec());
                CHECK(s.contains(SquareClass::one()));
                CHECK(s.contains(cls(x.disc_core())));
            }
        }
        CHECK(selmer_group(new_curve(0, -2)) == SelmerSubspace({2}, {cls(2)}));
        CHECK(selmer_group(isogenous_curve(new_curve(0, -2))) == SelmerSubspace({2}, {cls(-1), cls(2)}));
        CHECK(selmer_group(new_curve(-3, 1)) == SelmerSubspace({5}, {cls(-1), cls(5)}));
        CHECK(selmer_group(isogenous_curve(new_curve(-3, 1))).dim() == 0);
    }

    TEST_CASE("selmer groups contain images of rational points")
    {
        for (auto [a, b] : kBattery) {
            const IsogenyCurve e = new_curve(a, b);
            const SelmerSubspace s = selmer_group(e);
            const Int A = -2 * static_cast<Int>(a), C = e.disc_core();
            for (Int n = 1; n <= 4; ++n)
                for (Int m = -2000; m <= 2000; ++m) {
                    const Int n2 = n * n;
                    const Int rhs = m * (m * m + A * m * n2 + C * n2 * n2);
                    if (m != 0 && rhs >= 0 && is_perfect_square(rhs))
                        CHECK_MESSAGE(s.contains(cls(m)), e.spec() << " x = " << to_string(m));
                }
        }
    }

    TEST_CASE("relaxed groups")
    {
        for (auto [a, b] : kBattery) {
            const IsogenyCurve e = new_curve(a, b);
            for (Int d : some_d(e, 6)) {
                const SelmerSubspace v = compute_selmer(relaxed_structure(e, d));
                for (Prime q : prime_divisors(d))
                    CHECK(v.contains(SquareClass::of_prime(q, true)));
                CHECK(v.dim() >= selmer_group(e).dim());
            }
        }
    }

    TEST_CASE("master computation matches direct descents")
    {
        for (auto [a, b] : kBattery) {
            const IsogenyCurve e = new_curve(a, b);
            const SelmerSubspace direct = selmer_group(e);
            for (Int d : some_d(e, 8)) {
                const MasterSelmer m = selmer_via_master(e, d);
                const SelmerSubspace twist = selmer_group(quadratic_twist(e, -d));
                CHECK_MESSAGE(m.curve == direct, e.spec() << " d = " << to_string(d));
                CHECK_MESSAGE(m.twist == twist, e.spec() << " d = " << to_string(d));
                CHECK(m.common == intersect(direct, twist));
                if (sign_case(e) == SignCase::I)
                    CHECK(m.common == m.curve);
                if (sign_case(e) == SignCase::II)
                    CHECK(m.twist == m.relaxed);
            }
        }
        CHECK_THROWS_AS(selmer_via_master(new_curve(0, 2), 5), DomainError);
        CHECK_THROWS_AS(selmer_via_master(new_curve(0, 2), 7 * 23), DomainError);
    }

    TEST_CASE("padding the supporting set changes nothing")
    {
        for (auto [a, b] : kBattery) {
            const IsogenyCurve e = new_curve(a, b);
            std::vector<Prime> pad;
            for (Prime p : primes_up_to(100))
                if (p != 2 && !e.is_bad(p) && pad.size() < 2)
                    pad.push_back(p);
            SelmerStructure s = exact_structure(e);
            s.padding = pad;
            CHECK(compute_selmer(s) == selmer_group(e));
            for (Int d : some_d(e, 3)) {
                SelmerStructure r = relaxed_structure(e, d);
                r.padding = pad;
                CHECK(compute_selmer(r) == compute_selmer(relaxed_structure(e, d)));
            }
        }
    }

    TEST_CASE("supporting set cap")
    {
        {
            ScopedEnv env("ISOSELMER_SIGMA_CAP", "2");
            CHECK(sigma_cap() == 2);
            CHECK_THROWS_AS(selmer_group(new_curve(-1, 3)), ResourceError);
            CHECK_NOTHROW(selmer_group(new_curve(0, 2)));
        }
        {
            ScopedEnv env("ISOSELMER_SIGMA_CAP", "0");
            CHECK_THROWS_AS(sigma_cap(), DomainError);
        }
        {
            ScopedEnv env("ISOSELMER_SIGMA_CAP", "many");
            CHECK_THROWS_AS(sigma_cap(), DomainError);
        }
        CHECK(sigma_cap() == 20);
    }
}
