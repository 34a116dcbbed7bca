#include "isoselmer/errors.hpp"
#include "isoselmer/f2.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace isoselmer;

namespace {

F2Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int density)
{
    F2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, static_cast<int>(rng() % 100) < density);
    return m;
}

// Rank as log2 of the number of distinct row combinations.
std::size_t rank_by_span(const F2Matrix& m)
{
    std::set<std::vector<bool>> span;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.rows()); ++mask) {
        std::vector<bool> v(m.cols(), false);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if ((mask >> i) & 1)
                for (std::size_t j = 0; j < m.cols(); ++j)
                    v[j] = v[j] != m.get(i, j);
        span.insert(v);
    }
    std::size_t r = 0;
    while ((std::size_t{1} << r) < span.size())
        ++r;
    return r;
}

} // namespace

TEST_SUITE("f2")
{
    TEST_CASE("rank examples")
    {
        CHECK(f2_rank(F2Matrix::identity(3)) == 3);
        CHECK(f2_rank(F2Matrix(2, 5)) == 0);
        CHECK(f2_rank(F2Matrix::from_strings({"11", "11"})) == 1);
        CHECK(f2_rank(F2Matrix(0, 4)) == 0);
        CHECK(f2_rank(F2Matrix(3, 0)) == 0);
    }

    TEST_CASE("rank agrees with span size")
    {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 300; ++t) {
            const std::size_t r = rng() % 9, c = rng() % 9 + 1;
            const F2Matrix m = random_matrix(rng, r, c, static_cast<int>(rng() % 100));
            CHECK(f2_rank(m) == rank_by_span(m));
            CHECK(f2_rank(m.transpose()) == f2_rank(m));
        }
    }

    TEST_CASE("wide matrices span several words")
    {
        std::mt19937_64 rng(5);
        const F2Matrix m = random_matrix(rng, 10, 150, 50);
        CHECK(f2_rank(m) == rank_by_span(m));
        const F2Matrix tall = m.transpose();
        CHECK(f2_rank(tall) == f2_rank(m));
    }

    TEST_CASE("kernel")
    {
        std::mt19937_64 rng(9);
        for (int t = 0; t < 300; ++t) {
            const std::size_t r = rng() % 8, c = rng() % 10;
            const F2Matrix m = random_matrix(rng, r, c, 40);
            const auto ker = f2_kernel(m);
            CHECK(ker.size() + f2_rank(m) == c);
            F2Matrix k(ker.size(), c);
            for (std::size_t i = 0; i < ker.size(); ++i)
                for (std::size_t j = 0; j < c; ++j)
                    k.set(i, j, ker[i][j]);
            CHECK(f2_rank(k) == ker.size());
            CHECK(m * k.transpose() == F2Matrix(r, ker.size()));
        }
    }

    TEST_CASE("block operations")
    {
        const F2Matrix m = F2Matrix::from_strings({"101", "010"});
        CHECK(m.complement().to_strings() == std::vector<std::string>{"010", "101"});
        CHECK(m.transpose().to_strings() == std::vector<std::string>{"10", "01", "10"});
        CHECK(F2Matrix::ones(2, 1).hstack(m).to_strings() == std::vector<std::string>{"1101", "1010"});
        CHECK(F2Matrix::ones(1, 3).vstack(m).to_strings() == std::vector<std::string>{"111", "101", "010"});
        CHECK(m.block(0, 1, 2, 2).to_strings() == std::vector<std::string>{"01", "10"});
        CHECK(m + m == F2Matrix(2, 3));
        CHECK_THROWS_AS(m.block(1, 1, 2, 2), DomainError);
        CHECK_THROWS_AS(F2Matrix::from_strings({"10", "1"}), DomainError);
    }
}
